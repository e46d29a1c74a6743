//! Brute-force B_h verification.
//!
//! Every `h`-multiset of the points is enumerated as an element of
//! `X_{h,n}` and its sum accumulated exactly; the set is B_h when no sum is
//! hit twice. Nothing here depends on how the points were constructed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::multiindex::{count_multiindices, Compositions, MultiIndex};

pub type Point = Vec<BigInt>;

/// Default cap on the number of multisets examined.
pub const DEFAULT_VERIFY_CAP: u64 = 100_000_000;

fn validate(points: &[Point], h: u32, cap: u64) -> Result<u64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("point set is empty".into()));
    }
    if h == 0 {
        return Err(Error::InvalidArgument("h must be >= 1".into()));
    }
    let d = points[0].len();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "points need d >= 1 coordinates".into(),
        ));
    }
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(render(p)));
        }
    }
    let count = count_multiindices(h, points.len() as u32);
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        }),
    }
}

fn render(p: &[BigInt]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn weighted_sum(points: &[Point], x: &[u32]) -> Point {
    let mut acc = vec![BigInt::zero(); points[0].len()];
    for (p, &k) in points.iter().zip(x) {
        if k == 0 {
            continue;
        }
        for (a, c) in acc.iter_mut().zip(p) {
            *a += c * k;
        }
    }
    acc
}

fn summands(points: &[Point], x: &MultiIndex) -> Vec<Point> {
    x.coords()
        .iter()
        .zip(points)
        .flat_map(|(&k, p)| std::iter::repeat_n(p.clone(), k as usize))
        .collect()
}

fn compositions(points: &[Point], h: u32, cap: u64) -> Result<Compositions> {
    Compositions::new(h, points.len() as u32, cap)
}

/// `r_{A,h}(g)` for every `g` in `hA`.
pub fn representation_counts(points: &[Point], h: u32) -> Result<HashMap<Point, u64>> {
    representation_counts_with(points, h, DEFAULT_VERIFY_CAP)
}

pub fn representation_counts_with(
    points: &[Point],
    h: u32,
    cap: u64,
) -> Result<HashMap<Point, u64>> {
    let total = validate(points, h, cap)?;
    let mut counts: HashMap<Point, u64> = HashMap::with_capacity(total as usize);
    for x in compositions(points, h, cap)? {
        *counts.entry(weighted_sum(points, &x)).or_default() += 1;
    }
    Ok(counts)
}

/// `hA`, ordered.
pub fn sumset(points: &[Point], h: u32) -> Result<BTreeSet<Point>> {
    Ok(representation_counts(points, h)?.into_keys().collect())
}

/// Two distinct multisets with equal sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionWitness {
    pub sum: Point,
    pub first: MultiIndex,
    pub second: MultiIndex,
    pub first_summands: Vec<Point>,
    pub second_summands: Vec<Point>,
}

impl CollisionWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "sum": json::point(&self.sum),
            "first": self.first.coords(),
            "second": self.second.coords(),
            "first_summands": json::points(&self.first_summands),
            "second_summands": json::points(&self.second_summands),
        })
    }
}

/// Stops at the first repeated sum. The witness pairs the earliest
/// multiset (in enumeration order) hitting that sum with the one that
/// repeated it.
pub fn is_bh_set(points: &[Point], h: u32) -> Result<(bool, Option<CollisionWitness>)> {
    is_bh_set_with(points, h, DEFAULT_VERIFY_CAP)
}

pub fn is_bh_set_with(
    points: &[Point],
    h: u32,
    cap: u64,
) -> Result<(bool, Option<CollisionWitness>)> {
    let total = validate(points, h, cap)?;
    let mut first_hit: HashMap<Point, Vec<u32>> = HashMap::with_capacity(total as usize);
    for x in compositions(points, h, cap)? {
        let s = weighted_sum(points, &x);
        if let Some(prev) = first_hit.get(&s) {
            let first = MultiIndex::new(prev.clone())?;
            let second = MultiIndex::new(x)?;
            return Ok((
                false,
                Some(CollisionWitness {
                    first_summands: summands(points, &first),
                    second_summands: summands(points, &second),
                    sum: s,
                    first,
                    second,
                }),
            ));
        }
        first_hit.insert(s, x);
    }
    Ok((true, None))
}

/// A sum hit by more than one multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub sum: Point,
    pub representations: Vec<MultiIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub h: u32,
    pub set_size: usize,
    pub sumset_size: u64,
    /// `binom(n + h - 1, h)`, the sumset size of a B_h-set.
    pub expected_max: u64,
    pub is_bh: bool,
    /// Ordered by sum.
    pub collisions: Vec<Collision>,
    pub max_representation_count: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h,
            "set_size": self.set_size,
            "sumset_size": self.sumset_size,
            "expected_max": self.expected_max,
            "is_bh": self.is_bh,
            "max_representation_count": self.max_representation_count,
            "collisions": self.collisions.iter().map(|c| json!({
                "sum": json::point(&c.sum),
                "representations": c.representations.iter().map(|x| x.coords()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Full report: representation counts, sumset size and every collision.
pub fn verify_set(points: &[Point], h: u32) -> Result<VerificationReport> {
    verify_set_with(points, h, DEFAULT_VERIFY_CAP)
}

pub fn verify_set_with(points: &[Point], h: u32, cap: u64) -> Result<VerificationReport> {
    let total = validate(points, h, cap)?;
    let mut reps: HashMap<Point, Vec<Vec<u32>>> = HashMap::with_capacity(total as usize);
    for x in compositions(points, h, cap)? {
        reps.entry(weighted_sum(points, &x)).or_default().push(x);
    }
    let sumset_size = reps.len() as u64;
    let max_representation_count = reps.values().map(|v| v.len() as u64).max().unwrap_or(0);
    let collisions: BTreeMap<Point, Vec<MultiIndex>> = reps
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(s, v)| {
            let xs = v
                .into_iter()
                .map(MultiIndex::new)
                .collect::<Result<Vec<_>>>()?;
            Ok((s, xs))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport {
        h,
        set_size: points.len(),
        sumset_size,
        expected_max: total,
        is_bh: collisions.is_empty(),
        collisions: collisions
            .into_iter()
            .map(|(sum, representations)| Collision {
                sum,
                representations,
            })
            .collect(),
        max_representation_count,
    })
}
