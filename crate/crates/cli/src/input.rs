//! Theta arguments and point-set inputs.

use std::io::Read;

use bhset_core::json;
use bhset_core::realnum::{parse_theta, RealExpr, ThetaSystem};
use bhset_core::verify::Point;
use bhset_core::{Error, Result};
use num_bigint::BigInt;
use serde_json::Value;

/// One positional argument per theta vector; coordinates are separated by
/// commas, e.g. `sqrt:2,sqrt:3`.
pub fn theta_system(args: &[String]) -> Result<ThetaSystem> {
    if args.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one theta is required".into(),
        ));
    }
    let vectors = args
        .iter()
        .map(|s| {
            s.split(',')
                .map(parse_theta)
                .collect::<Result<Vec<RealExpr>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ThetaSystem::new(vectors)
}

fn parse_coord(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not an integer coordinate: {s:?}")))
}

fn parse_text_point(s: &str) -> Result<Point> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_coord)
        .collect()
}

/// `"18 22"`, `"18;22"` or `"1,2; 3,4"`.
pub fn inline_points(s: &str) -> Result<Vec<Point>> {
    let pts: Vec<&str> = if s.contains(';') {
        s.split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect()
    } else {
        s.split_whitespace().collect()
    };
    pts.into_iter()
        .map(|p| p.split(',').map(parse_coord).collect())
        .collect()
}

fn check_dim(sets: &[Vec<Point>], d: Option<usize>) -> Result<()> {
    let Some(d) = d else { return Ok(()) };
    for p in sets.iter().flatten() {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }
    Ok(())
}

fn sets_from_json(v: &Value) -> Result<Vec<Vec<Point>>> {
    if let Some(result) = v.get("result") {
        // output of `generate` or `gadic`
        if let Some(sets) = result.get("sets").and_then(Value::as_array) {
            return sets
                .iter()
                .map(|s| json::parse_points(s.get("set").unwrap_or(s)))
                .collect();
        }
        if let Some(set) = result.get("set") {
            return Ok(vec![json::parse_points(set)?]);
        }
        return Err(Error::InvalidArgument("document has no set or sets".into()));
    }
    if let Some(sets) = v.get("sets") {
        let d =
            match v.get("d") {
                Some(d) => Some(d.as_u64().ok_or_else(|| {
                    Error::InvalidArgument("\"d\" must be a positive integer".into())
                })? as usize),
                None => None,
            };
        let sets = sets
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("\"sets\" must be an array".into()))?
            .iter()
            .map(json::parse_points)
            .collect::<Result<Vec<_>>>()?;
        check_dim(&sets, d)?;
        return Ok(sets);
    }
    if v.is_array() {
        return Ok(vec![json::parse_points(v)?]);
    }
    Err(Error::InvalidArgument(
        "unrecognized JSON point-set document".into(),
    ))
}

/// JSON `{ "d", "sets" }`, a `generate`/`gadic` document, a JSON array of
/// points, or plain text with one point per line (`#` starts a comment).
pub fn point_sets_from_text(text: &str) -> Result<Vec<Vec<Point>>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("invalid JSON: {e}")))?;
        return sets_from_json(&v);
    }
    let set = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_text_point)
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![set])
}

/// Reads `path`, or stdin for `-`.
pub fn read_source(path: &str) -> Result<String> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Point {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn inline_forms() {
        assert_eq!(inline_points("18 22").unwrap(), vec![p(&[18]), p(&[22])]);
        assert_eq!(inline_points("18;22").unwrap(), vec![p(&[18]), p(&[22])]);
        assert_eq!(
            inline_points("1,2; 3, 4").unwrap(),
            vec![p(&[1, 2]), p(&[3, 4])]
        );
        assert!(inline_points("1 x").is_err());
    }

    #[test]
    fn file_forms() {
        let j = r#"{"d": 1, "sets": [[[18], [22]], [19, 23]]}"#;
        assert_eq!(
            point_sets_from_text(j).unwrap(),
            vec![vec![p(&[18]), p(&[22])], vec![p(&[19]), p(&[23])]]
        );
        assert!(matches!(
            point_sets_from_text(r#"{"d": 2, "sets": [[[1]]]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        let text = "# header\n1, 2\n3 4\n\n";
        assert_eq!(
            point_sets_from_text(text).unwrap(),
            vec![vec![p(&[1, 2]), p(&[3, 4])]]
        );
        let doc = r#"{"result": {"sets": [{"set": [[1], [2]]}, {"set": [[3], [5]]}]}}"#;
        assert_eq!(point_sets_from_text(doc).unwrap().len(), 2);
        let doc = r#"{"result": {"set": [[1], ["123456789012345678901234567890"]]}}"#;
        assert_eq!(
            point_sets_from_text(doc).unwrap()[0][1],
            "123456789012345678901234567890"
                .parse::<BigInt>()
                .map(|b| vec![b])
                .unwrap()
        );
    }

    #[test]
    fn theta_vectors() {
        let s = theta_system(&["sqrt:2,sqrt:3".into(), "sqrt:5,sqrt:7".into()]).unwrap();
        assert_eq!((s.n(), s.d()), (2, 2));
        assert!(matches!(
            theta_system(&["sqrt:2,sqrt:3".into(), "sqrt:5".into()]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(theta_system(&[]).is_err());
    }
}
