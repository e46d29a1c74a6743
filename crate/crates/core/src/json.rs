//! JSON helpers shared by certificates and reports.
//!
//! Integers that fit in `i64` are emitted as JSON numbers, larger ones as
//! decimal strings. Readers accept both.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::construct::{ConstructionCertificate, LatticeSet};
use crate::error::{Error, Result};
use crate::interval::Dyadic;

pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn point(p: &[BigInt]) -> Value {
    Value::Array(p.iter().map(int).collect())
}

pub fn points(ps: &[Vec<BigInt>]) -> Value {
    Value::Array(ps.iter().map(|p| point(p)).collect())
}

/// An exact dyadic endpoint plus a decimal rounded outward
/// (`round_up` for upper bounds).
pub fn bound(d: &Dyadic, digits: usize, round_up: bool) -> Value {
    json!({
        "decimal": d.to_decimal(digits, round_up),
        "mantissa": d.mantissa().to_string(),
        "exponent": d.exponent(),
    })
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidArgument(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not an integer: {s:?}"))),
        other => Err(Error::InvalidArgument(format!("not an integer: {other}"))),
    }
}

/// A point given as an integer (d = 1) or an array of integers.
pub fn parse_point(v: &Value) -> Result<Vec<BigInt>> {
    match v {
        Value::Array(cs) => cs.iter().map(parse_int).collect(),
        scalar => Ok(vec![parse_int(scalar)?]),
    }
}

pub fn parse_points(v: &Value) -> Result<Vec<Vec<BigInt>>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidArgument("point set must be a JSON array".into()))?
        .iter()
        .map(parse_point)
        .collect()
}

/// `{ params, eps, separation_lower_bound, certified }` for a family of
/// `n` points in dimension `d`.
pub fn certificate_summary(
    cert: &ConstructionCertificate,
    d: usize,
    n: usize,
    digits: usize,
) -> Value {
    json!({
        "params": {
            "h": cert.params.h,
            "m": cert.params.m,
            "q": int(&cert.params.q),
            "positivity_mode": cert.params.positivity_mode,
            "d": d,
            "n": n,
        },
        "eps": {
            "lo": bound(&cert.eps_bound.lo, digits, false),
            "hi": bound(&cert.eps_bound.hi, digits, true),
            "argmin": cert.eps_bound.argmin.coords(),
            "precision_bits_used": cert.eps_bound.precision_bits_used,
            "tied": cert.eps_bound.tied,
        },
        "separation_lower_bound": bound(&cert.separation_lower_bound, digits, false),
        "certified": cert.certified,
    })
}

/// The summary plus `set` and `choice_code`.
pub fn certificate(set: &LatticeSet, cert: &ConstructionCertificate, digits: usize) -> Value {
    let mut v = certificate_summary(cert, set.d(), set.points().len(), digits);
    v["set"] = points(set.points());
    v["choice_code"] = json!(set.choice_code().digits());
    v
}
