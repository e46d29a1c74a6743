//! Weak compositions `X_{h,n}` and their canonical difference vectors.
//!
//! An element `x` of `X_{h,n}` is an `n`-tuple of nonnegative integers
//! summing to `h`. It parameterizes an `h`-element multiset drawn from an
//! `n`-element set, so the `h`-fold sumset of `{a_1, .., a_n}` is
//! `{ sum x_i a_i : x in X_{h,n} }`.
//!
//! A difference vector is `z = x - y` for distinct `x, y`. Since the
//! separation constant only uses `|sum z_i theta_i|`, `z` and `-z` are
//! identified and stored once with a positive leading coordinate.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of elements any enumeration may produce.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex {
    coords: Vec<u32>,
}

impl MultiIndex {
    /// Builds a multi-index; rejects an empty tuple or a zero sum.
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "multi-index must have n >= 1 coordinates".into(),
            ));
        }
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::InvalidArgument(
                "multi-index must have h >= 1".into(),
            ));
        }
        Ok(MultiIndex { coords })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn h(&self) -> u32 {
        self.coords.iter().sum()
    }

    /// `self - other` as a signed vector (not canonicalized).
    pub fn difference(&self, other: &MultiIndex) -> Vec<i64> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }

    /// L1 distance `sum |x_i - y_i|`.
    pub fn l1_distance(&self, other: &MultiIndex) -> u64 {
        self.difference(other)
            .iter()
            .map(|v| v.unsigned_abs())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DifferenceVector {
    coords: Vec<i64>,
    l1_norm: u64,
}

impl DifferenceVector {
    /// Validates and canonicalizes `coords` as a difference of two elements
    /// of `X_{h,n}`. The sign is flipped if the leading nonzero entry is
    /// negative.
    pub fn new(mut coords: Vec<i64>, h: u32) -> Result<Self> {
        let lead = coords.iter().copied().find(|&c| c != 0);
        match lead {
            None => {
                return Err(Error::InvalidArgument(
                    "difference vector must be nonzero (x != y)".into(),
                ))
            }
            Some(c) if c < 0 => coords.iter_mut().for_each(|c| *c = -*c),
            Some(_) => {}
        }
        if coords.iter().sum::<i64>() != 0 {
            return Err(Error::InvalidArgument(format!(
                "difference vector {coords:?} does not sum to zero"
            )));
        }
        let positive: u64 = coords.iter().filter(|&&c| c > 0).map(|&c| c as u64).sum();
        if positive > h as u64 {
            return Err(Error::InvalidArgument(format!(
                "difference vector {coords:?} is not realizable in X_{{{h},{}}}",
                coords.len()
            )));
        }
        Ok(DifferenceVector {
            l1_norm: 2 * positive,
            coords,
        })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn l1_norm(&self) -> u64 {
        self.l1_norm
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// One pair `(x, y)` in `X_{h,n}` with `x - y = self`: the positive and
    /// negative parts, each padded in the first coordinate up to sum `h`.
    pub fn realization(&self, h: u32) -> (MultiIndex, MultiIndex) {
        let mut x: Vec<u32> = self.coords.iter().map(|&c| c.max(0) as u32).collect();
        let mut y: Vec<u32> = self.coords.iter().map(|&c| (-c).max(0) as u32).collect();
        let pad = h - (self.l1_norm / 2) as u32;
        x[0] += pad;
        y[0] += pad;
        (MultiIndex { coords: x }, MultiIndex { coords: y })
    }
}

/// `|X_{h,n}| = binom(n + h - 1, h)`, exact.
pub fn count_multiindices(h: u32, n: u32) -> BigUint {
    // binom(n+h-1, h) = prod_{k=1..h} (n - 1 + k) / k, exact at each step
    let mut acc = BigUint::one();
    for k in 1..=h as u64 {
        acc *= n as u64 - 1 + k;
        acc /= k;
    }
    acc
}

fn check_positive(h: u32, n: u32) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    Ok(())
}

fn check_cap(h: u32, n: u32, cap: u64) -> Result<u64> {
    check_positive(h, n)?;
    let count = count_multiindices(h, n);
    match count.to_u64() {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        }),
    }
}

/// Streams `X_{h,n}` in lexicographically descending order without
/// materializing it.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    /// Iterator over `X_{h,n}`; validates `h, n >= 1` and the cap.
    pub fn new(h: u32, n: u32, cap: u64) -> Result<Self> {
        check_cap(h, n, cap)?;
        let mut first = vec![0; n as usize];
        first[0] = h;
        Ok(Compositions {
            current: Some(first),
        })
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let n = next.len();
        let tail = std::mem::take(&mut next[n - 1]);
        if let Some(i) = (0..n - 1).rev().find(|&i| next[i] > 0) {
            next[i] -= 1;
            next[i + 1] = tail + 1;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All of `X_{h,n}`, lexicographically descending.
pub fn enumerate_multiindices(h: u32, n: u32, cap: u64) -> Result<Vec<MultiIndex>> {
    Ok(Compositions::new(h, n, cap)?
        .map(|coords| MultiIndex { coords })
        .collect())
}

/// Canonical nonzero differences `x - y`, lexicographically descending.
///
/// Generated directly as zero-sum vectors whose positive part sums to at
/// most `h`, with a positive leading nonzero entry.
pub fn enumerate_difference_vectors(h: u32, n: u32, cap: u64) -> Result<Vec<DifferenceVector>> {
    check_cap(h, n, cap)?;
    let mut out = Vec::new();
    let mut buf = vec![0i64; n as usize];
    let mut gen = DiffGen {
        h: h as i64,
        cap,
        out: &mut out,
    };
    gen.fill(&mut buf, 0, 0, 0, false)?;
    Ok(out)
}

struct DiffGen<'a> {
    h: i64,
    cap: u64,
    out: &'a mut Vec<DifferenceVector>,
}

impl DiffGen<'_> {
    fn fill(
        &mut self,
        buf: &mut [i64],
        idx: usize,
        pos: i64,
        neg: i64,
        started: bool,
    ) -> Result<()> {
        if idx == buf.len() - 1 {
            let last = neg - pos;
            if (!started && last <= 0) || pos.max(neg) > self.h {
                return Ok(());
            }
            buf[idx] = last;
            let positive = pos + last.max(0);
            if self.out.len() as u64 >= self.cap {
                return Err(Error::CapExceeded {
                    count: format!("> {}", self.cap),
                    cap: self.cap,
                });
            }
            self.out.push(DifferenceVector {
                coords: buf.to_vec(),
                l1_norm: 2 * positive as u64,
            });
            return Ok(());
        }
        let hi = self.h - pos;
        let lo = if started { -(self.h - neg) } else { 0 };
        for v in (lo..=hi).rev() {
            buf[idx] = v;
            let (p, q) = if v >= 0 {
                (pos + v, neg)
            } else {
                (pos, neg - v)
            };
            self.fill(buf, idx + 1, p, q, started || v != 0)?;
        }
        Ok(())
    }
}

/// The pair achieving the lower bound `sum |x_i - y_i| = 2`.
///
/// For `h >= 2` this is `x = (2,0,1,..,1,0,..)`, `y = (1,1,1,..,1,0,..)`
/// with `h - 2` ones, requiring `n >= h`. For `h = 1` the bound is met by
/// two unit vectors, requiring `n >= 2`.
pub fn lower_witness(h: u32, n: u32) -> Result<(MultiIndex, MultiIndex)> {
    check_positive(h, n)?;
    let need = h.max(2);
    if n < need {
        return Err(Error::InvalidArgument(format!(
            "lower extremal witness needs n >= {need} (got n = {n})"
        )));
    }
    let mut x = vec![0u32; n as usize];
    let mut y = vec![0u32; n as usize];
    if h == 1 {
        x[0] = 1;
        y[1] = 1;
    } else {
        x[0] = 2;
        y[0] = 1;
        y[1] = 1;
        for k in 2..h as usize {
            x[k] = 1;
            y[k] = 1;
        }
    }
    Ok((MultiIndex { coords: x }, MultiIndex { coords: y }))
}

/// The pair achieving the upper bound `sum |x_i - y_i| = 2h`: `h` ones
/// followed by `h` zeros, against the reverse. Requires `n >= 2h`.
pub fn upper_witness(h: u32, n: u32) -> Result<(MultiIndex, MultiIndex)> {
    check_positive(h, n)?;
    if n < 2 * h {
        return Err(Error::InvalidArgument(format!(
            "upper extremal witness needs n >= 2h = {} (got n = {n})",
            2 * h
        )));
    }
    let mut x = vec![0u32; n as usize];
    let mut y = vec![0u32; n as usize];
    for k in 0..h as usize {
        x[k] = 1;
        y[h as usize + k] = 1;
    }
    Ok((MultiIndex { coords: x }, MultiIndex { coords: y }))
}

/// Both extremal pairs `(lower, upper)`; fails if either is unavailable.
#[allow(clippy::type_complexity)]
pub fn extremal_witnesses(
    h: u32,
    n: u32,
) -> Result<((MultiIndex, MultiIndex), (MultiIndex, MultiIndex))> {
    Ok((lower_witness(h, n)?, upper_witness(h, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn coords(v: &[MultiIndex]) -> Vec<Vec<u32>> {
        v.iter().map(|m| m.coords().to_vec()).collect()
    }

    fn pairwise_oracle(h: u32, n: u32) -> BTreeSet<Vec<i64>> {
        let xs = enumerate_multiindices(h, n, DEFAULT_CAP).unwrap();
        let mut set = BTreeSet::new();
        for (a, x) in xs.iter().enumerate() {
            for y in &xs[a + 1..] {
                let mut z = x.difference(y);
                if z.iter().find(|&&c| c != 0).unwrap() < &0 {
                    z.iter_mut().for_each(|c| *c = -*c);
                }
                set.insert(z);
            }
        }
        set
    }

    #[test]
    fn x22_listing() {
        let xs = enumerate_multiindices(2, 2, DEFAULT_CAP).unwrap();
        assert_eq!(coords(&xs), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn x24_matches_listing() {
        let xs: BTreeSet<_> = coords(&enumerate_multiindices(2, 4, DEFAULT_CAP).unwrap())
            .into_iter()
            .collect();
        let listed: BTreeSet<Vec<u32>> = [
            [2, 0, 0, 0],
            [0, 2, 0, 0],
            [0, 0, 2, 0],
            [0, 0, 0, 2],
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ]
        .iter()
        .map(|a| a.to_vec())
        .collect();
        assert_eq!(xs, listed);
    }

    #[test]
    fn unit_vectors_for_h1() {
        let xs = enumerate_multiindices(1, 3, DEFAULT_CAP).unwrap();
        assert_eq!(
            coords(&xs),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn h3_n5_count() {
        // binom(7, 3) = 7*6*5 / 6
        assert_eq!(enumerate_multiindices(3, 5, DEFAULT_CAP).unwrap().len(), 35);
        assert_eq!(count_multiindices(3, 5), BigUint::from(35u32));
    }

    #[test]
    fn counts() {
        assert_eq!(count_multiindices(2, 4), BigUint::from(10u32));
        assert_eq!(count_multiindices(2, 2), BigUint::from(3u32));
        for n in 1..20 {
            assert_eq!(count_multiindices(1, n), BigUint::from(n));
        }
    }

    #[test]
    fn descending_order() {
        let xs = enumerate_multiindices(3, 4, DEFAULT_CAP).unwrap();
        assert!(xs.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn rejects_zero_and_cap() {
        assert!(matches!(
            enumerate_multiindices(0, 2, DEFAULT_CAP),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            enumerate_multiindices(2, 0, DEFAULT_CAP),
            Err(Error::InvalidArgument(_))
        ));
        match enumerate_multiindices(10, 30, DEFAULT_CAP) {
            Err(Error::CapExceeded { count, .. }) => assert_eq!(count, "635745396"),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn diffs_h2_n2() {
        let zs = enumerate_difference_vectors(2, 2, DEFAULT_CAP).unwrap();
        let got: Vec<_> = zs.iter().map(|z| z.coords().to_vec()).collect();
        assert_eq!(got, vec![vec![2, -2], vec![1, -1]]);
    }

    #[test]
    fn diffs_h2_n3_match_forms() {
        let got: BTreeSet<_> = enumerate_difference_vectors(2, 3, DEFAULT_CAP)
            .unwrap()
            .iter()
            .map(|z| z.coords().to_vec())
            .collect();
        // |t1-t2|, |t1-t3|, |t2-t3|, |t1+t2-2t3|, |t1-2t2+t3|, |-2t1+t2+t3|,
        // plus the doubled differences 2(ti - tj).
        let forms: BTreeSet<Vec<i64>> = [
            vec![1, -1, 0],
            vec![1, 0, -1],
            vec![0, 1, -1],
            vec![1, 1, -2],
            vec![1, -2, 1],
            vec![2, -1, -1],
            vec![2, -2, 0],
            vec![2, 0, -2],
            vec![0, 2, -2],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, forms);
        assert_eq!(got, pairwise_oracle(2, 3));
    }

    #[test]
    fn diffs_h2_n4_count() {
        let zs = enumerate_difference_vectors(2, 4, DEFAULT_CAP).unwrap();
        // 21 forms listed for the infimum plus 6 doubled differences
        let undoubled = zs
            .iter()
            .filter(|z| !z.coords().iter().all(|c| c % 2 == 0))
            .count();
        assert_eq!(undoubled, 21);
        assert_eq!(zs.len(), 27);
    }

    #[test]
    fn direct_generation_matches_pairwise_oracle() {
        for h in 1..=3 {
            for n in 1..=5 {
                let direct: Vec<_> = enumerate_difference_vectors(h, n, DEFAULT_CAP)
                    .unwrap()
                    .iter()
                    .map(|z| z.coords().to_vec())
                    .collect();
                let set: BTreeSet<_> = direct.iter().cloned().collect();
                assert_eq!(set.len(), direct.len(), "duplicates at h={h} n={n}");
                assert_eq!(set, pairwise_oracle(h, n), "h={h} n={n}");
            }
        }
    }

    #[test]
    fn difference_invariants_and_realization() {
        for h in 1..=4 {
            for n in 1..=4 {
                let xs: BTreeSet<_> = enumerate_multiindices(h, n, DEFAULT_CAP)
                    .unwrap()
                    .into_iter()
                    .collect();
                for z in enumerate_difference_vectors(h, n, DEFAULT_CAP).unwrap() {
                    let c = z.coords();
                    assert_eq!(c.iter().sum::<i64>(), 0);
                    assert!(z.l1_norm() >= 2 && z.l1_norm() <= 2 * h as u64);
                    assert_eq!(z.l1_norm() % 2, 0);
                    assert!(*c.iter().find(|&&v| v != 0).unwrap() > 0);
                    let (x, y) = z.realization(h);
                    assert!(xs.contains(&x) && xs.contains(&y));
                    assert_eq!(x.difference(&y), c);
                }
            }
        }
    }

    #[test]
    fn difference_vector_canonicalizes() {
        let z = DifferenceVector::new(vec![-1, 2, -1], 2).unwrap();
        assert_eq!(z.coords(), &[1, -2, 1]);
        assert_eq!(z.l1_norm(), 4);
        assert!(DifferenceVector::new(vec![0, 0], 2).is_err());
        assert!(DifferenceVector::new(vec![1, 1], 2).is_err());
        assert!(DifferenceVector::new(vec![3, -3], 2).is_err());
    }

    #[test]
    fn witnesses() {
        let (x, y) = lower_witness(3, 3).unwrap();
        assert_eq!((x.coords(), y.coords()), (&[2, 0, 1][..], &[1, 1, 1][..]));
        assert_eq!(x.l1_distance(&y), 2);

        let (x, y) = upper_witness(2, 4).unwrap();
        assert_eq!(
            (x.coords(), y.coords()),
            (&[1, 1, 0, 0][..], &[0, 0, 1, 1][..])
        );
        assert_eq!(x.l1_distance(&y), 4);

        let err = upper_witness(2, 3).unwrap_err();
        assert!(err.to_string().contains("upper"));
        assert!(extremal_witnesses(2, 3).is_err());
        assert!(lower_witness(4, 3)
            .unwrap_err()
            .to_string()
            .contains("lower"));

        for h in 1..=5 {
            for n in (2 * h)..=(2 * h + 2) {
                let (lo, hi) = extremal_witnesses(h, n).unwrap();
                assert_eq!(lo.0.h(), h);
                assert_eq!(lo.1.h(), h);
                assert_eq!(lo.0.l1_distance(&lo.1), 2);
                assert_eq!(hi.0.l1_distance(&hi.1), 2 * h as u64);
            }
        }
    }

    #[test]
    fn permutation_symmetry() {
        let xs: BTreeSet<_> = coords(&enumerate_multiindices(3, 4, DEFAULT_CAP).unwrap())
            .into_iter()
            .collect();
        let perms = [[1, 0, 2, 3], [3, 2, 1, 0], [1, 2, 3, 0]];
        for p in perms {
            let permuted: BTreeSet<Vec<u32>> = xs
                .iter()
                .map(|x| p.iter().map(|&k| x[k]).collect())
                .collect();
            assert_eq!(permuted, xs);
        }
    }
}
