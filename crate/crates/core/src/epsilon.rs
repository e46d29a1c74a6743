//! The separation constant `eps_{h,n}` and the admissible modulus.
//!
//! `eps_{h,n}` is the least `||sum_i z_i theta_i||_inf` over canonical
//! difference vectors `z`. It is enclosed by evaluating every candidate at
//! increasing precision until all candidates are bounded away from zero and
//! the minimizer is separated from the rest.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{Dyadic, Interval};
use crate::multiindex::{enumerate_difference_vectors, DifferenceVector, DEFAULT_CAP};
use crate::realnum::{PrecisionLadder, ThetaSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonOptions {
    pub ladder: PrecisionLadder,
    pub cap: u64,
}

impl Default for EpsilonOptions {
    fn default() -> Self {
        EpsilonOptions {
            ladder: PrecisionLadder::default(),
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonBound {
    /// Proven lower bound, strictly positive.
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub argmin: DifferenceVector,
    pub h: u32,
    pub n: u32,
    pub precision_bits_used: u32,
    /// The minimizer could not be separated from another candidate at the
    /// maximum precision. `[lo, hi]` still encloses eps.
    pub tied: bool,
}

impl EpsilonBound {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone(), self.precision_bits_used)
    }
}

pub fn compute_epsilon(system: &ThetaSystem, h: u32) -> Result<EpsilonBound> {
    compute_epsilon_with(system, h, EpsilonOptions::default())
}

pub fn compute_epsilon_with(
    system: &ThetaSystem,
    h: u32,
    opts: EpsilonOptions,
) -> Result<EpsilonBound> {
    let n = system.n() as u32;
    if n < 2 {
        // X_{h,1} = {(h)} has no distinct pairs, so the infimum is empty
        return Err(Error::InvalidArgument(
            "eps_{h,n} needs n >= 2 (no distinct pairs in X_{h,1})".into(),
        ));
    }
    if let Some(combination) = system.rational_relation() {
        return Err(Error::RationalDependence { combination });
    }
    let diffs = enumerate_difference_vectors(h, n, opts.cap)?;
    // sum |z_i| <= 2h, so 2^bits(2h) covers the coefficient growth
    let extra = 64 - (2 * h as u64).leading_zeros();

    let mut last = None;
    for bits in opts.ladder.steps() {
        let enc = system.enclose(bits - 1 + extra);
        let norms: Vec<Interval> = diffs
            .iter()
            .map(|z| enc.combination_norm(z.coords(), bits))
            .collect();

        if let Some(k) = norms.iter().position(|iv| iv.lo().signum() <= 0) {
            last = Some((bits, k));
            continue;
        }

        let min_hi = norms
            .iter()
            .map(|iv| iv.hi())
            .min()
            .expect("nonempty")
            .clone();
        let contenders: Vec<usize> = (0..diffs.len())
            .filter(|&k| *norms[k].lo() <= min_hi)
            .collect();
        let separated = contenders.len() == 1;
        if separated || bits >= opts.ladder.max_bits {
            let best = *contenders
                .iter()
                .min_by(|&&a, &&b| diffs[a].coords().cmp(diffs[b].coords()))
                .expect("nonempty");
            let lo = norms
                .iter()
                .map(|iv| iv.lo())
                .min()
                .expect("nonempty")
                .clone();
            return Ok(EpsilonBound {
                lo,
                hi: norms[best].hi().clone(),
                argmin: diffs[best].clone(),
                h,
                n,
                precision_bits_used: bits,
                tied: !separated,
            });
        }
    }
    let (bits, k) = last.expect("ladder has at least one step");
    Err(Error::IndependenceUnresolved {
        precision_bits: bits,
        combination: diffs[k].coords().to_vec(),
    })
}

/// Least integer `q` with `q > 2hm / eps.lo`, computed exactly.
pub fn min_modulus(eps: &EpsilonBound, h: u32, m: u32) -> BigInt {
    let threshold = modulus_threshold(eps, h, m);
    threshold.floor().to_integer() + BigInt::one()
}

/// The rational `2hm / eps.lo`.
pub fn modulus_threshold(eps: &EpsilonBound, h: u32, m: u32) -> BigRational {
    assert!(eps.lo.signum() > 0, "epsilon lower bound must be positive");
    BigRational::from_integer(BigInt::from(2u64 * h as u64 * m as u64)) / eps.lo.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::{combination_norm_interval, RealExpr};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn eps22() {
        let sys = ThetaSystem::sqrt_of(&[2, 3]).unwrap();
        let e = compute_epsilon(&sys, 2).unwrap();
        assert_eq!(e.argmin.coords(), &[1, -1]);
        assert!(e.lo.to_rational() > rat(31783, 100000));
        assert!(e.hi.to_rational() < rat(31784, 100000));
        assert!(!e.tied);
        assert_eq!(e.precision_bits_used, 64);
        assert_eq!(min_modulus(&e, 2, 1), BigInt::from(13));
    }

    #[test]
    fn eps_argmin_norm_inside_bound() {
        let sys = ThetaSystem::sqrt_of(&[2, 3, 5, 7]).unwrap();
        let e = compute_epsilon(&sys, 2).unwrap();
        assert_eq!(e.argmin.coords(), &[1, -1, -1, 1]);
        let i = combination_norm_interval(&sys, &e.argmin, e.precision_bits_used).unwrap();
        assert!(i.is_subset_of(&e.interval()));
    }

    #[test]
    fn upper_chain() {
        for vals in [&[2, 3][..], &[2, 3, 5], &[2, 3, 5, 7], &[6, 10, 11]] {
            let sys = ThetaSystem::sqrt_of(vals).unwrap();
            for h in 2..=3 {
                let e = compute_epsilon(&sys, h).unwrap();
                let bound = sys.norm_inf_upper(64).mul_int(&BigInt::from(2 * h));
                assert!(e.hi <= bound);
            }
        }
    }

    #[test]
    fn dependent_input_is_reported() {
        // sqrt8 = 2 sqrt2, sqrt18 = 3 sqrt2
        let sys = ThetaSystem::sqrt_of(&[2, 8, 18]).unwrap();
        let opts = EpsilonOptions {
            ladder: PrecisionLadder {
                start_bits: 64,
                max_bits: 256,
            },
            ..Default::default()
        };
        match compute_epsilon_with(&sys, 2, opts) {
            Err(Error::IndependenceUnresolved {
                precision_bits,
                combination,
            }) => {
                assert_eq!(precision_bits, 256);
                assert_eq!(combination, vec![1, -2, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_input_is_dependent() {
        let sys = ThetaSystem::scalars(vec![RealExpr::integer(1), RealExpr::integer(2)]).unwrap();
        match compute_epsilon(&sys, 2) {
            Err(Error::RationalDependence { combination }) => {
                assert_eq!(combination, vec![BigInt::from(2), BigInt::from(-1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_theta_rejected() {
        let sys = ThetaSystem::sqrt_of(&[2]).unwrap();
        assert!(matches!(
            compute_epsilon(&sys, 2),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn scaling_by_three() {
        let sys = ThetaSystem::sqrt_of(&[2, 3, 5]).unwrap();
        let three = BigInt::from(3);
        let a = compute_epsilon(&sys, 2).unwrap();
        let b = compute_epsilon(&sys.scaled(3), 2).unwrap();
        assert!(a.lo.mul_int(&three) <= b.hi);
        assert!(b.lo <= a.hi.mul_int(&three));
        assert_eq!(a.argmin, b.argmin);
    }

    #[test]
    fn tie_is_flagged_and_still_rigorous() {
        // Cyclically permuted coordinates: shifting z cyclically preserves the
        // norm, so the minimum is attained by three distinct difference vectors.
        let r = |v: i64| RealExpr::sqrt_int(v).unwrap();
        let sys = ThetaSystem::new(vec![
            vec![r(2), r(3), r(5)],
            vec![r(5), r(2), r(3)],
            vec![r(3), r(5), r(2)],
        ])
        .unwrap();
        let opts = EpsilonOptions {
            ladder: PrecisionLadder {
                start_bits: 64,
                max_bits: 128,
            },
            ..Default::default()
        };
        let e = compute_epsilon_with(&sys, 2, opts).unwrap();
        assert!(e.tied);
        assert_eq!(e.precision_bits_used, 128);
        assert_eq!(e.argmin.coords(), &[0, 1, -1]);
        // eps = sqrt5 - sqrt2 = 0.82185...
        assert!(e.lo.to_rational() > rat(82185, 100000));
        assert!(e.hi.to_rational() < rat(82186, 100000));
        let i = combination_norm_interval(&sys, &e.argmin, 512).unwrap();
        assert!(i.is_subset_of(&e.interval()));
    }

    #[test]
    fn min_modulus_is_exact() {
        // eps.lo = 1/2 exactly: 2hm/lo = 8 for h=2,m=1, so q_min = 9 (strict)
        let bound = EpsilonBound {
            lo: Dyadic::new(1.into(), -1),
            hi: Dyadic::new(1.into(), -1),
            argmin: crate::multiindex::DifferenceVector::new(vec![1, -1], 2).unwrap(),
            h: 2,
            n: 2,
            precision_bits_used: 64,
            tied: false,
        };
        assert_eq!(min_modulus(&bound, 2, 1), BigInt::from(9));
        assert_eq!(min_modulus(&bound, 3, 2), BigInt::from(25));
    }
}
