//! B_h-sets `A_{h,n}(q,m)` of lattice points from a theta system.
//!
//! For each coordinate `theta_{i,j}` there are exactly `2m` integers `a`
//! with `0 < |a - q theta_{i,j}| <= m`. Picking one per coordinate gives a
//! point set; when `q > 2hm / eps_{h,n}` every such set is a B_h-set, since
//! distinct `h`-fold sums then differ by at least `q eps - 2hm > 0` in the
//! `l-inf` norm.

use std::collections::{BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::epsilon::{compute_epsilon_with, min_modulus, EpsilonBound, EpsilonOptions};
use crate::error::{Error, Result};
use crate::interval::Dyadic;
use crate::realnum::{floor_scaled, PrecisionLadder, ThetaSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub h: u32,
    pub m: u32,
    #[serde(serialize_with = "ser_bigint")]
    pub q: BigInt,
    pub positivity_mode: bool,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::json::int(v).serialize(s)
}

/// Options shared by the certified-construction entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConstructOptions {
    pub epsilon: EpsilonOptions,
    /// Build even when `q` fails the threshold; the certificate is then
    /// marked invalid.
    pub force: bool,
    /// Only choose positive coordinates.
    pub positivity_mode: bool,
}

/// The `2m` admissible integers for every coordinate, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitCandidates {
    q: BigInt,
    m: u32,
    d: usize,
    lists: Vec<Vec<Vec<BigInt>>>,
    exact: Vec<Vec<bool>>,
    norm_bound: Dyadic,
}

impl DigitCandidates {
    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Candidates for coordinate `j` of point `i`.
    pub fn get(&self, i: usize, j: usize) -> &[BigInt] {
        &self.lists[i][j]
    }

    /// Whether `q * theta_{i,j}` is exactly an integer.
    pub fn is_exact(&self, i: usize, j: usize) -> bool {
        self.exact[i][j]
    }

    /// Upper bound on `q ||Theta_n||_inf + m`.
    pub fn norm_bound(&self) -> &Dyadic {
        &self.norm_bound
    }

    pub fn code_len(&self) -> usize {
        self.n() * self.d
    }

    /// `(2m)^(d n)`.
    pub fn family_size(&self) -> BigUint {
        num_traits::pow(BigUint::from(2 * self.m), self.code_len())
    }

    /// The floor candidate everywhere (the integer part of `q theta` when it
    /// is not an integer).
    pub fn lower_code(&self) -> ChoiceCode {
        ChoiceCode::uniform(self.code_len(), self.m - 1, self.m)
    }

    /// The ceiling candidate everywhere.
    pub fn upper_code(&self) -> ChoiceCode {
        ChoiceCode::uniform(self.code_len(), self.m, self.m)
    }

    /// The lower code, except that nonpositive floor candidates are replaced
    /// by the smallest positive candidate.
    pub fn positive_lower_code(&self) -> Result<ChoiceCode> {
        let mut digits = Vec::with_capacity(self.code_len());
        for i in 0..self.n() {
            for j in 0..self.d {
                let list = &self.lists[i][j];
                let floor_idx = (self.m - 1) as usize;
                let idx = if list[floor_idx].is_positive() {
                    floor_idx
                } else {
                    list.iter().position(|a| a.is_positive()).ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "no positive candidate for coordinate ({}, {})",
                            i + 1,
                            j + 1
                        ))
                    })?
                };
                digits.push(idx as u32);
            }
        }
        ChoiceCode::new(digits, self.m)
    }
}

/// Base-`2m` digits selecting one candidate per coordinate, point-major:
/// digit `i*d + j` picks the candidate for coordinate `j` of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChoiceCode {
    digits: Vec<u32>,
    #[serde(skip)]
    base: u32,
}

impl ChoiceCode {
    pub fn new(digits: Vec<u32>, m: u32) -> Result<Self> {
        let base = 2 * m;
        if let Some(&bad) = digits.iter().find(|&&c| c >= base) {
            return Err(Error::InvalidArgument(format!(
                "choice digit {bad} out of range for base {base}"
            )));
        }
        Ok(ChoiceCode { digits, base })
    }

    fn uniform(len: usize, digit: u32, m: u32) -> Self {
        ChoiceCode {
            digits: vec![digit; len],
            base: 2 * m,
        }
    }

    /// The code whose base-`2m` value is `index`, most significant first.
    pub fn from_index(mut index: BigUint, len: usize, m: u32) -> Self {
        let base = BigUint::from(2 * m);
        let mut digits = vec![0u32; len];
        for slot in digits.iter_mut().rev() {
            *slot = (&index % &base).to_u32().expect("digit < base");
            index /= &base;
        }
        ChoiceCode {
            digits,
            base: 2 * m,
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// In-place increment in counting order; false on wrap-around.
    fn increment(&mut self) -> bool {
        for slot in self.digits.iter_mut().rev() {
            *slot += 1;
            if *slot < self.base {
                return true;
            }
            *slot = 0;
        }
        false
    }
}

/// One constructed set `A_{h,n}(q,m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    points: Vec<Vec<BigInt>>,
    q: BigInt,
    m: u32,
    choice_code: ChoiceCode,
}

impl LatticeSet {
    /// Assembles a set from explicit points; rejects repeated points.
    pub fn from_parts(
        points: Vec<Vec<BigInt>>,
        q: BigInt,
        m: u32,
        choice_code: ChoiceCode,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(render_point(p)));
            }
        }
        Ok(LatticeSet {
            points,
            q,
            m,
            choice_code,
        })
    }

    pub fn points(&self) -> &[Vec<BigInt>] {
        &self.points
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn choice_code(&self) -> &ChoiceCode {
        &self.choice_code
    }

    pub fn d(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn all_positive(&self) -> bool {
        self.points.iter().flatten().all(|a| a.is_positive())
    }

    /// The points as a one-dimensional set, if `d = 1`.
    pub fn scalars(&self) -> Option<Vec<BigInt>> {
        (self.d() == 1).then(|| self.points.iter().map(|p| p[0].clone()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionCertificate {
    pub eps_bound: EpsilonBound,
    pub params: ConstructionParams,
    /// `q eps.lo - 2hm`, positive exactly when the set is certified.
    pub separation_lower_bound: Dyadic,
    pub certified: bool,
}

impl ConstructionCertificate {
    pub fn new(eps_bound: EpsilonBound, params: ConstructionParams) -> Self {
        let two_hm = BigInt::from(2u64 * params.h as u64 * params.m as u64);
        let separation = &eps_bound.lo.mul_int(&params.q) - &Dyadic::from_int(two_hm);
        ConstructionCertificate {
            certified: separation.signum() > 0,
            separation_lower_bound: separation,
            eps_bound,
            params,
        }
    }
}

pub fn digit_candidates(system: &ThetaSystem, q: &BigInt, m: u32) -> Result<DigitCandidates> {
    digit_candidates_with(system, q, m, PrecisionLadder::default())
}

pub fn digit_candidates_with(
    system: &ThetaSystem,
    q: &BigInt,
    m: u32,
    ladder: PrecisionLadder,
) -> Result<DigitCandidates> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument("q must be >= 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let mut lists = Vec::with_capacity(system.n());
    let mut exact = Vec::with_capacity(system.n());
    for v in system.vectors() {
        let mut row = Vec::with_capacity(system.d());
        let mut row_exact = Vec::with_capacity(system.d());
        for theta in v {
            let f = floor_scaled(theta, q, ladder)?;
            let mm = BigInt::from(m);
            let mut list = Vec::with_capacity(2 * m as usize);
            if f.exact_integer {
                // v-m .. v-1, v+1 .. v+m
                let v = &f.floor;
                let mut a = v - &mm;
                while &a < v {
                    list.push(a.clone());
                    a += 1;
                }
                let mut a: BigInt = v + 1;
                let end = v + &mm;
                while a <= end {
                    list.push(a.clone());
                    a += 1;
                }
            } else {
                // floor-(m-1) .. floor, floor+1 .. floor+m
                let mut a: BigInt = &f.floor - (&mm - 1);
                let end = &f.floor + &mm;
                while a <= end {
                    list.push(a.clone());
                    a += 1;
                }
            }
            row.push(list);
            row_exact.push(f.exact_integer);
        }
        lists.push(row);
        exact.push(row_exact);
    }
    let norm_bound = &system.norm_inf_upper(64).mul_int(q) + &Dyadic::from_int(m);
    Ok(DigitCandidates {
        q: q.clone(),
        m,
        d: system.d(),
        lists,
        exact,
        norm_bound,
    })
}

fn render_point(p: &[BigInt]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn build_set(candidates: &DigitCandidates, code: &ChoiceCode) -> Result<LatticeSet> {
    let (n, d) = (candidates.n(), candidates.d());
    if code.digits.len() != n * d {
        return Err(Error::InvalidArgument(format!(
            "choice code has length {}, expected d*n = {}",
            code.digits.len(),
            n * d
        )));
    }
    if let Some(&bad) = code.digits.iter().find(|&&c| c >= 2 * candidates.m) {
        return Err(Error::InvalidArgument(format!(
            "choice digit {bad} out of range for base {}",
            2 * candidates.m
        )));
    }
    let points: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..d)
                .map(|j| candidates.lists[i][j][code.digits[i * d + j] as usize].clone())
                .collect()
        })
        .collect();
    let mut seen = HashSet::with_capacity(n);
    for p in &points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(render_point(p)));
        }
    }
    let set = LatticeSet {
        points,
        q: candidates.q.clone(),
        m: candidates.m,
        choice_code: ChoiceCode {
            digits: code.digits.clone(),
            base: 2 * candidates.m,
        },
    };
    let norm = set_norm_inf(&set);
    if candidates.norm_bound.cmp_int(&norm) == std::cmp::Ordering::Less {
        return Err(Error::InvalidArgument(format!(
            "norm {norm} exceeds the bound q||Theta||_inf + m"
        )));
    }
    Ok(set)
}

/// `||A||_inf`: the largest absolute coordinate.
pub fn set_norm_inf(set: &LatticeSet) -> BigInt {
    set.points
        .iter()
        .flatten()
        .map(|a| a.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Establishes `eps`, `q` and the certificate for `(system, h, m, q?)`.
pub fn certify(
    system: &ThetaSystem,
    h: u32,
    m: u32,
    q: Option<BigInt>,
    opts: ConstructOptions,
) -> Result<ConstructionCertificate> {
    if h < 2 {
        return Err(Error::InvalidArgument("h must be >= 2".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    if !system.independence_claim() && !opts.force {
        return Err(Error::InvalidArgument(
            "theta system is not claimed to be Q-independent".into(),
        ));
    }
    let eps = compute_epsilon_with(system, h, opts.epsilon)?;
    let q_min = min_modulus(&eps, h, m);
    let q = match q {
        Some(q) if !q.is_positive() => return Err(Error::InvalidArgument("q must be >= 1".into())),
        Some(q) => q,
        None => q_min.clone(),
    };
    let cert = ConstructionCertificate::new(
        eps,
        ConstructionParams {
            h,
            m,
            q: q.clone(),
            positivity_mode: opts.positivity_mode,
        },
    );
    if !cert.certified && !opts.force {
        return Err(Error::UncertifiedModulus {
            q: q.to_string(),
            required: q_min.to_string(),
        });
    }
    Ok(cert)
}

/// Builds the default (floor-choice) set with its certificate.
pub fn construct_certified(
    system: &ThetaSystem,
    h: u32,
    m: u32,
    q: Option<BigInt>,
    opts: ConstructOptions,
) -> Result<(LatticeSet, ConstructionCertificate)> {
    let cert = certify(system, h, m, q, opts)?;
    let cands = digit_candidates_with(system, &cert.params.q, m, opts.epsilon.ladder)?;
    let code = if opts.positivity_mode {
        cands.positive_lower_code()?
    } else {
        cands.lower_code()
    };
    Ok((build_set(&cands, &code)?, cert))
}

/// A family of sets sharing one certificate.
#[derive(Debug, Clone)]
pub struct CertifiedFamily {
    pub certificate: ConstructionCertificate,
    pub total: BigUint,
    pub sets: Vec<LatticeSet>,
    /// Present when the family was sampled rather than enumerated.
    pub seed: Option<u64>,
}

/// Every set of the `(2m)^(dn)` family in counting order, or a seeded
/// uniform sample of `limit` of them (without replacement, returned in
/// counting order) when the family is larger than `limit`.
pub fn enumerate_certified_sets(
    system: &ThetaSystem,
    h: u32,
    m: u32,
    q: Option<BigInt>,
    limit: u64,
    seed: Option<u64>,
    opts: ConstructOptions,
) -> Result<CertifiedFamily> {
    let certificate = certify(system, h, m, q, opts)?;
    let cands = digit_candidates_with(system, &certificate.params.q, m, opts.epsilon.ladder)?;
    let total = cands.family_size();
    let len = cands.code_len();

    let codes: Vec<ChoiceCode> = if total <= BigUint::from(limit) {
        let mut code = ChoiceCode::from_index(BigUint::zero(), len, m);
        let mut out = vec![code.clone()];
        while code.increment() {
            out.push(code.clone());
        }
        out
    } else {
        let seed = seed.ok_or_else(|| Error::LimitExceeded {
            total: total.to_string(),
            limit,
        })?;
        sample_codes(&total, limit, len, m, seed)
    };
    let sampled = total > BigUint::from(limit);

    let mut sets = Vec::with_capacity(codes.len());
    for code in &codes {
        let set = build_set(&cands, code)?;
        if opts.positivity_mode && !set.all_positive() {
            continue;
        }
        sets.push(set);
    }
    Ok(CertifiedFamily {
        certificate,
        total,
        sets,
        seed: if sampled { seed } else { None },
    })
}

fn sample_codes(total: &BigUint, limit: u64, len: usize, m: u32, seed: u64) -> Vec<ChoiceCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: BTreeSet<BigUint> = BTreeSet::new();
    match total.to_usize() {
        Some(t) => {
            for k in index::sample(&mut rng, t, limit as usize) {
                indices.insert(BigUint::from(k));
            }
        }
        None => {
            // family larger than usize: draw uniform digit strings and reject repeats
            while (indices.len() as u64) < limit {
                let mut v = BigUint::zero();
                for _ in 0..len {
                    v = v * BigUint::from(2 * m) + BigUint::from(rng.gen_range(0..2 * m));
                }
                indices.insert(v);
            }
        }
    }
    indices
        .into_iter()
        .map(|k| ChoiceCode::from_index(k, len, m))
        .collect()
}
