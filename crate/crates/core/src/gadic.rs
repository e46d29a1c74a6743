//! Sidon sets from base-`g` truncations.
//!
//! For positive theta, `a_{i,l} = floor(g^l theta_i)` drops all base-`g`
//! digits of `theta_i` past position `l`. This is the floor-choice
//! construction with `q = g^l`, `m = 1`, so the set is certified Sidon as
//! soon as `g^l > 4 / eps_{2,n}`.

use num_bigint::BigInt;
use num_traits::Pow;

use crate::construct::{
    digit_candidates_with, ChoiceCode, ConstructionCertificate, ConstructionParams, LatticeSet,
};
use crate::epsilon::{compute_epsilon_with, min_modulus, EpsilonBound, EpsilonOptions};
use crate::error::{Error, Result};
use crate::realnum::{floor_scaled, prove_positive, PrecisionLadder, RealExpr, ThetaSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadicParams {
    pub g: u32,
    pub level: u32,
}

impl GadicParams {
    pub fn new(g: u32, level: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidArgument(format!("g must be >= 2 (got {g})")));
        }
        if level == 0 {
            return Err(Error::InvalidArgument("level must be >= 1".into()));
        }
        Ok(GadicParams { g, level })
    }

    /// `g^l`.
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.g).pow(self.level)
    }
}

/// `floor(g^l theta)` for provably positive theta.
pub fn gadic_truncation(theta: &RealExpr, g: u32, level: u32) -> Result<BigInt> {
    gadic_truncation_with(
        theta,
        GadicParams::new(g, level)?,
        PrecisionLadder::default(),
    )
}

pub fn gadic_truncation_with(
    theta: &RealExpr,
    params: GadicParams,
    ladder: PrecisionLadder,
) -> Result<BigInt> {
    prove_positive(theta, ladder)?;
    Ok(floor_scaled(theta, &params.modulus(), ladder)?.floor)
}

#[derive(Debug, Clone)]
pub struct GadicSet {
    pub set: LatticeSet,
    pub certificate: ConstructionCertificate,
    pub params: GadicParams,
    /// Least certified level for this system and `g`.
    pub min_level: u32,
    /// The floors coincide with the floor-choice candidates at `q = g^l`,
    /// `m = 1` (fails only when some `g^l theta_i` is an exact integer).
    pub matches_construction: bool,
    /// Built for `h != 2`, which goes beyond the Sidon statement.
    pub extension: bool,
}

fn check_system(system: &ThetaSystem, ladder: PrecisionLadder) -> Result<()> {
    if system.d() != 1 {
        return Err(Error::InvalidArgument(format!(
            "g-adic construction needs d = 1 (got d = {})",
            system.d()
        )));
    }
    for v in system.vectors() {
        prove_positive(&v[0], ladder)?;
    }
    Ok(())
}

/// Least `l >= 1` with `g^l > 2h / eps.lo`.
pub fn min_level_for(eps: &EpsilonBound, h: u32, g: u32) -> u32 {
    let q_min = min_modulus(eps, h, 1);
    let g = BigInt::from(g);
    let mut level = 1;
    let mut power = g.clone();
    while power < q_min {
        power *= &g;
        level += 1;
    }
    level
}

pub fn min_level(system: &ThetaSystem, g: u32) -> Result<u32> {
    min_level_with(system, g, EpsilonOptions::default())
}

pub fn min_level_with(system: &ThetaSystem, g: u32, opts: EpsilonOptions) -> Result<u32> {
    GadicParams::new(g, 1)?;
    check_system(system, opts.ladder)?;
    let eps = compute_epsilon_with(system, 2, opts)?;
    Ok(min_level_for(&eps, 2, g))
}

/// `B_{2,n}(l) = { floor(g^l theta_i) }` with its certificate. Levels below
/// [`min_level`] still return the set, with `certified = false`.
pub fn gadic_sidon_set(system: &ThetaSystem, g: u32, level: u32) -> Result<GadicSet> {
    gadic_bh_set(
        system,
        2,
        GadicParams::new(g, level)?,
        EpsilonOptions::default(),
    )
}

/// General-`h` variant; certificates for `h != 2` are flagged as extensions
/// (the threshold becomes `g^l > 2h / eps_{h,n}`).
pub fn gadic_bh_set(
    system: &ThetaSystem,
    h: u32,
    params: GadicParams,
    opts: EpsilonOptions,
) -> Result<GadicSet> {
    if h < 2 {
        return Err(Error::InvalidArgument("h must be >= 2".into()));
    }
    check_system(system, opts.ladder)?;
    let q = params.modulus();
    let eps = compute_epsilon_with(system, h, opts)?;
    let min_level = min_level_for(&eps, h, params.g);

    let floors: Vec<BigInt> = system
        .vectors()
        .iter()
        .map(|v| Ok(floor_scaled(&v[0], &q, opts.ladder)?.floor))
        .collect::<Result<_>>()?;

    let cands = digit_candidates_with(system, &q, 1, opts.ladder)?;
    let matches_construction = floors
        .iter()
        .enumerate()
        .all(|(i, f)| !cands.is_exact(i, 0) && &cands.get(i, 0)[0] == f);

    let code = ChoiceCode::new(vec![0; system.n()], 1)?;
    let set = LatticeSet::from_parts(
        floors.into_iter().map(|f| vec![f]).collect(),
        q.clone(),
        1,
        code,
    )?;
    let certificate = ConstructionCertificate::new(
        eps,
        ConstructionParams {
            h,
            m: 1,
            q,
            positivity_mode: true,
        },
    );
    Ok(GadicSet {
        set,
        certificate,
        params,
        min_level,
        matches_construction,
        extension: h != 2,
    })
}

impl GadicSet {
    pub fn certified(&self) -> bool {
        self.certificate.certified
    }
}
