//! Symbolic reals and rigorous enclosures.
//!
//! A [`RealExpr`] is a rational, a square root of a nonnegative rational, a
//! decimal literal (an exact rational), or an integer linear combination of
//! those. Expressions are evaluated to dyadic intervals that are guaranteed
//! to contain the true value.
//!
//! Text grammar (EBNF) used on the command line:
//!
//! ```text
//! expr     = ws, [ sign, ws ], term, { ws, sign, ws, term }, ws ;
//! term     = [ integer, ws, "*", ws ], atom ;
//! atom     = "sqrt:", rational | "rat:", rational | "dec:", decimal ;
//! rational = [ "-" ], digits, [ "/", digits ] ;
//! decimal  = [ "-" ], digits, ".", digits ;
//! sign     = "+" | "-" ;
//! ```

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{Dyadic, Interval};
use crate::multiindex::DifferenceVector;

pub const MIN_PRECISION_BITS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealExpr {
    Rational(BigRational),
    /// Square root of a nonnegative rational.
    SqrtRational(BigRational),
    /// Decimal literal, kept verbatim; its value is the exact rational it spells.
    DecimalLiteral(String),
    /// Integer linear combination of atoms. Coefficients are nonzero and the
    /// terms are never themselves sums.
    Sum(Vec<(i64, RealExpr)>),
}

impl RealExpr {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(RealExpr::Rational(BigRational::new(p.into(), q.into())))
    }

    pub fn integer(v: i64) -> Self {
        RealExpr::Rational(BigRational::from_integer(v.into()))
    }

    pub fn sqrt(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeSqrt(r.to_string()));
        }
        Ok(RealExpr::SqrtRational(r))
    }

    pub fn sqrt_int(v: i64) -> Result<Self> {
        RealExpr::sqrt(BigRational::from_integer(v.into()))
    }

    pub fn decimal(text: &str) -> Result<Self> {
        parse_decimal(text).map_err(|(pos, message)| Error::Parse {
            position: pos,
            message,
        })?;
        Ok(RealExpr::DecimalLiteral(text.to_string()))
    }

    /// Linear combination; flattens nested sums and drops zero coefficients.
    /// A single unit-coefficient term collapses to the term itself.
    pub fn sum(terms: Vec<(i64, RealExpr)>) -> Self {
        let mut flat = Vec::new();
        for (c, e) in terms {
            match e {
                RealExpr::Sum(inner) => {
                    for (k, a) in inner {
                        flat.push((c * k, a));
                    }
                }
                other => flat.push((c, other)),
            }
        }
        flat.retain(|(c, _)| *c != 0);
        match flat.len() {
            0 => RealExpr::integer(0),
            1 if flat[0].0 == 1 => flat.pop().unwrap().1,
            _ => RealExpr::Sum(flat),
        }
    }

    /// `k * self`.
    pub fn scaled(&self, k: i64) -> Self {
        RealExpr::sum(vec![(k, self.clone())])
    }

    /// The exact value if it is visibly rational (rationals, decimals,
    /// square roots of rational squares, and sums of these).
    pub fn exact_rational(&self) -> Option<BigRational> {
        match self {
            RealExpr::Rational(r) => Some(r.clone()),
            RealExpr::DecimalLiteral(s) => parse_decimal(s).ok(),
            RealExpr::SqrtRational(r) => rational_sqrt(r),
            RealExpr::Sum(terms) => {
                let mut acc = BigRational::zero();
                for (c, e) in terms {
                    acc += e.exact_rational()? * BigRational::from_integer((*c).into());
                }
                Some(acc)
            }
        }
    }

    /// Enclosure of width at most `2^-abs_bits`.
    pub fn enclose_abs(&self, abs_bits: u32) -> (Dyadic, Dyadic) {
        match self {
            RealExpr::Rational(r) => enclose_rational(r, abs_bits),
            RealExpr::DecimalLiteral(s) => enclose_rational(
                &parse_decimal(s).expect("validated at construction"),
                abs_bits,
            ),
            RealExpr::SqrtRational(r) => enclose_sqrt(r, abs_bits),
            RealExpr::Sum(terms) => {
                let total: u64 = terms.iter().map(|(c, _)| c.unsigned_abs()).sum();
                let child_bits = abs_bits + bit_length(total);
                let mut lo = Dyadic::zero();
                let mut hi = Dyadic::zero();
                for (c, e) in terms {
                    let (a, b) = e.enclose_abs(child_bits);
                    let k = BigInt::from(*c);
                    let (a, b) = (a.mul_int(&k), b.mul_int(&k));
                    let (a, b) = if *c < 0 { (b, a) } else { (a, b) };
                    lo = &lo + &a;
                    hi = &hi + &b;
                }
                (lo, hi)
            }
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExpr::Rational(r) => write!(f, "rat:{}", fmt_rational(r)),
            RealExpr::SqrtRational(r) => write!(f, "sqrt:{}", fmt_rational(r)),
            RealExpr::DecimalLiteral(s) => write!(f, "dec:{s}"),
            RealExpr::Sum(_) => unreachable!("sums are flat"),
        }
    }
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExpr::Sum(terms) => {
                for (idx, (c, e)) in terms.iter().enumerate() {
                    let mag = c.unsigned_abs();
                    match (idx, *c < 0) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if mag != 1 {
                        write!(f, "{mag}*")?;
                    }
                    e.fmt_atom(f)?;
                }
                Ok(())
            }
            atom => atom.fmt_atom(f),
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}

fn is_power_of_two(v: &BigInt) -> bool {
    v.is_positive() && v.trailing_zeros() == Some(v.bits() - 1)
}

fn enclose_rational(r: &BigRational, abs_bits: u32) -> (Dyadic, Dyadic) {
    let den = r.denom();
    if is_power_of_two(den) {
        let v = Dyadic::new(r.numer().clone(), -(den.bits() as i64 - 1));
        return (v.clone(), v);
    }
    // den is not a power of two and r is reduced, so r * 2^k is never an
    // integer and the enclosure below is strict.
    let scaled = (r.numer() << abs_bits as usize) / den;
    let floor = if r.is_negative() { scaled - 1 } else { scaled };
    let e = -(abs_bits as i64);
    (Dyadic::new(floor.clone(), e), Dyadic::new(floor + 1, e))
}

fn perfect_sqrt(v: &BigInt) -> Option<BigInt> {
    let s = v.sqrt();
    (&s * &s == *v).then_some(s)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    Some(BigRational::new(
        perfect_sqrt(r.numer())?,
        perfect_sqrt(r.denom())?,
    ))
}

fn enclose_sqrt(r: &BigRational, abs_bits: u32) -> (Dyadic, Dyadic) {
    if let Some(exact) = rational_sqrt(r) {
        return enclose_rational(&exact, abs_bits);
    }
    // floor(sqrt(r) * 2^k) = isqrt(floor(r * 4^k)); sqrt(r) is irrational here
    let num = r.numer() << (2 * abs_bits as usize);
    let floor_arg = BigUint::try_from(num / r.denom()).expect("nonnegative");
    let s = BigInt::from(floor_arg.sqrt());
    let e = -(abs_bits as i64);
    (Dyadic::new(s.clone(), e), Dyadic::new(s + 1, e))
}

/// Sound enclosure of `expr` with width at most `2^(1-precision_bits) * max(1, |value|)`.
pub fn eval_interval(expr: &RealExpr, precision_bits: u32) -> Result<Interval> {
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::InvalidArgument(format!(
            "precision_bits must be >= {MIN_PRECISION_BITS}"
        )));
    }
    let (lo, hi) = expr.enclose_abs(precision_bits - 1);
    Ok(Interval::new(lo, hi, precision_bits))
}

// ---------------------------------------------------------------------------
// parsing

type ParseResult<T> = std::result::Result<T, (usize, String)>;

/// Exact value of `[-]digits.digits`.
fn parse_decimal(s: &str) -> ParseResult<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let offset = usize::from(neg);
    let (int, frac) = body
        .split_once('.')
        .ok_or((offset, "decimal literal needs digits.digits".to_string()))?;
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int) {
        return Err((offset, format!("malformed integer part in decimal {s:?}")));
    }
    if !all_digits(frac) {
        return Err((
            offset + int.len() + 1,
            format!("malformed fractional part in decimal {s:?}"),
        ));
    }
    let numer: BigInt = format!("{int}{frac}").parse().expect("digits");
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> ParseResult<T> {
        Err((self.pos, msg.into()))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !f(c))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn digits(&mut self) -> ParseResult<&'a str> {
        let d = self.take_while(|c| c.is_ascii_digit());
        if d.is_empty() {
            return self.err("expected digits");
        }
        Ok(d)
    }

    fn rational(&mut self) -> ParseResult<BigRational> {
        let neg = self.eat('-');
        let p: BigInt = self.digits()?.parse().expect("digits");
        let q: BigInt = if self.eat('/') {
            let at = self.pos;
            let q: BigInt = self.digits()?.parse().expect("digits");
            if q.is_zero() {
                return Err((at, "zero denominator".into()));
            }
            q
        } else {
            BigInt::one()
        };
        let r = BigRational::new(p, q);
        Ok(if neg { -r } else { r })
    }

    fn atom(&mut self) -> ParseResult<RealExpr> {
        let start = self.pos;
        if let Some(rest) = self.rest().strip_prefix("sqrt:") {
            self.pos = self.src.len() - rest.len();
            let r = self.rational()?;
            if r.is_negative() {
                return Err((start, format!("square root of negative rational {r}")));
            }
            Ok(RealExpr::SqrtRational(r))
        } else if let Some(rest) = self.rest().strip_prefix("rat:") {
            self.pos = self.src.len() - rest.len();
            Ok(RealExpr::Rational(self.rational()?))
        } else if let Some(rest) = self.rest().strip_prefix("dec:") {
            self.pos = self.src.len() - rest.len();
            let lit_start = self.pos;
            self.eat('-');
            self.take_while(|c| c.is_ascii_digit() || c == '.');
            let lit = &self.src[lit_start..self.pos];
            parse_decimal(lit).map_err(|(p, m)| (lit_start + p, m))?;
            Ok(RealExpr::DecimalLiteral(lit.to_string()))
        } else {
            self.err("expected sqrt:, rat: or dec:")
        }
    }

    fn term(&mut self) -> ParseResult<(i64, RealExpr)> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let at = self.pos;
            let c: i64 = self
                .digits()?
                .parse()
                .map_err(|_| (at, "coefficient out of range".to_string()))?;
            self.skip_ws();
            if !self.eat('*') {
                return self.err("expected '*' after coefficient");
            }
            self.skip_ws();
            Ok((c, self.atom()?))
        } else {
            Ok((1, self.atom()?))
        }
    }

    fn expr(&mut self) -> ParseResult<RealExpr> {
        self.skip_ws();
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
            self.skip_ws();
        } else if self.eat('+') {
            self.skip_ws();
        }
        let mut terms = Vec::new();
        let (c, a) = self.term()?;
        terms.push((sign * c, a));
        loop {
            self.skip_ws();
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                break;
            };
            self.skip_ws();
            let (c, a) = self.term()?;
            terms.push((sign * c, a));
        }
        if self.pos != self.src.len() {
            return self.err("unexpected trailing input");
        }
        if terms.len() == 1 && terms[0].0 == 1 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(RealExpr::Sum(terms))
    }
}

/// Parses the theta grammar given in the module docs.
pub fn parse_theta(text: &str) -> Result<RealExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p
        .expr()
        .map_err(|(position, message)| Error::Parse { position, message })?;
    // drop zero coefficients (e.g. "0*sqrt:2") so the Sum invariant holds
    Ok(match e {
        RealExpr::Sum(terms) if terms.iter().any(|(c, _)| *c == 0) => RealExpr::sum(terms),
        e => e,
    })
}

// ---------------------------------------------------------------------------
// theta systems

/// `n` vectors in `R^d`, each coordinate a [`RealExpr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSystem {
    d: usize,
    vectors: Vec<Vec<RealExpr>>,
    /// The caller's assertion that the vectors are Q-independent. Never
    /// checked; the verifier is the safety net.
    independence_claim: bool,
}

impl ThetaSystem {
    pub fn new(vectors: Vec<Vec<RealExpr>>) -> Result<Self> {
        let d = vectors
            .first()
            .ok_or_else(|| Error::InvalidArgument("theta system needs n >= 1 vectors".into()))?
            .len();
        if d == 0 {
            return Err(Error::InvalidArgument("theta vectors need d >= 1".into()));
        }
        if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(ThetaSystem {
            d,
            vectors,
            independence_claim: true,
        })
    }

    /// A one-dimensional system.
    pub fn scalars(thetas: Vec<RealExpr>) -> Result<Self> {
        ThetaSystem::new(thetas.into_iter().map(|t| vec![t]).collect())
    }

    /// Square roots of the given integers, one-dimensional.
    pub fn sqrt_of(values: &[i64]) -> Result<Self> {
        ThetaSystem::scalars(
            values
                .iter()
                .map(|&v| RealExpr::sqrt_int(v))
                .collect::<Result<_>>()?,
        )
    }

    pub fn with_independence_claim(mut self, claim: bool) -> Self {
        self.independence_claim = claim;
        self
    }

    pub fn independence_claim(&self) -> bool {
        self.independence_claim
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<RealExpr>] {
        &self.vectors
    }

    pub fn coord(&self, i: usize, j: usize) -> &RealExpr {
        &self.vectors[i][j]
    }

    /// Every vector scaled by `k`.
    pub fn scaled(&self, k: i64) -> ThetaSystem {
        ThetaSystem {
            d: self.d,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|e| e.scaled(k)).collect())
                .collect(),
            independence_claim: self.independence_claim,
        }
    }

    /// Advisory notes about inputs that cannot be Q-independent.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, v) in self.vectors.iter().enumerate() {
            if v.iter().any(|e| matches!(e, RealExpr::DecimalLiteral(_))) {
                out.push(format!(
                    "theta {} contains a decimal literal, which is an exact rational",
                    i + 1
                ));
            }
        }
        if let Some(rel) = self.rational_relation() {
            let parts: Vec<String> = rel.iter().map(ToString::to_string).collect();
            out.push(format!(
                "rational theta vectors are Q-dependent: ({}) . Theta = 0",
                parts.join(", ")
            ));
        }
        out
    }

    /// An integer relation among the exactly rational vectors, if any.
    ///
    /// Only vectors whose coordinates are all rational take part; the
    /// others get coefficient 0. The relation is primitive with its first
    /// nonzero entry positive.
    pub fn rational_relation(&self) -> Option<Vec<BigInt>> {
        let idx: Vec<usize> = (0..self.n())
            .filter(|&i| self.vectors[i].iter().all(|e| e.exact_rational().is_some()))
            .collect();
        let cols: Vec<Vec<BigRational>> = idx
            .iter()
            .map(|&i| {
                self.vectors[i]
                    .iter()
                    .map(|e| e.exact_rational().expect("rational"))
                    .collect()
            })
            .collect();
        let k = cols.len();
        // rows = coordinates, columns = rational vectors
        let mut a: Vec<Vec<BigRational>> = (0..self.d)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(p) = (row..self.d).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].recip();
            for x in a[row].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = a[row].clone();
            for (r, other) in a.iter_mut().enumerate() {
                if r != row && !other[col].is_zero() {
                    let f = other[col].clone();
                    for (x, p) in other.iter_mut().zip(&pivot_row) {
                        *x -= p * &f;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free = (0..k).find(|c| !pivots.contains(c))?;
        let mut c = vec![BigRational::zero(); k];
        c[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            c[pc] = -a[r][free].clone();
        }
        let lcm = c.iter().fold(BigInt::one(), |l, x| {
            num_integer::Integer::lcm(&l, x.denom())
        });
        let mut ints: Vec<BigInt> = c.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        let sign = if ints
            .iter()
            .find(|x| !x.is_zero())
            .expect("nonzero")
            .is_negative()
        {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        for x in ints.iter_mut() {
            *x = &*x / &g * &sign;
        }
        let mut out = vec![BigInt::zero(); self.n()];
        for (j, &i) in idx.iter().enumerate() {
            out[i] = ints[j].clone();
        }
        Some(out)
    }

    /// Enclosures of every coordinate with absolute width at most `2^-abs_bits`.
    pub fn enclose(&self, abs_bits: u32) -> SystemEnclosure {
        SystemEnclosure {
            abs_bits,
            coords: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|e| e.enclose_abs(abs_bits)).collect())
                .collect(),
        }
    }

    /// Upper bound on `||Theta_n||_inf`.
    pub fn norm_inf_upper(&self, precision_bits: u32) -> Dyadic {
        self.enclose(precision_bits)
            .coords
            .iter()
            .flatten()
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or_else(Dyadic::zero)
    }
}

/// Cached coordinate enclosures of a [`ThetaSystem`] at one precision.
#[derive(Debug, Clone)]
pub struct SystemEnclosure {
    abs_bits: u32,
    coords: Vec<Vec<(Dyadic, Dyadic)>>,
}

impl SystemEnclosure {
    pub fn abs_bits(&self) -> u32 {
        self.abs_bits
    }

    /// Enclosure of `|| sum_i z_i theta_i ||_inf`.
    pub fn combination_norm(&self, z: &[i64], precision_bits: u32) -> Interval {
        let d = self.coords[0].len();
        let mut acc: Option<Interval> = None;
        for j in 0..d {
            let mut lo = Dyadic::zero();
            let mut hi = Dyadic::zero();
            for (i, &c) in z.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (a, b) = &self.coords[i][j];
                let k = BigInt::from(c);
                if c > 0 {
                    lo = &lo + &a.mul_int(&k);
                    hi = &hi + &b.mul_int(&k);
                } else {
                    lo = &lo + &b.mul_int(&k);
                    hi = &hi + &a.mul_int(&k);
                }
            }
            let coord = Interval::new(lo, hi, precision_bits).abs();
            acc = Some(match acc {
                None => coord,
                Some(m) => m.max(&coord),
            });
        }
        acc.expect("d >= 1")
    }
}

/// Sound enclosure of `|| sum_i z_i theta_i ||_inf`, per-coordinate width at
/// most `2^(1-precision_bits)`.
pub fn combination_norm_interval(
    system: &ThetaSystem,
    z: &DifferenceVector,
    precision_bits: u32,
) -> Result<Interval> {
    if z.n() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: z.n(),
        });
    }
    if precision_bits < MIN_PRECISION_BITS {
        return Err(Error::InvalidArgument(format!(
            "precision_bits must be >= {MIN_PRECISION_BITS}"
        )));
    }
    let abs_bits = precision_bits - 1 + bit_length(z.l1_norm());
    Ok(system
        .enclose(abs_bits)
        .combination_norm(z.coords(), precision_bits))
}

/// Doubling precision schedule shared by callers that escalate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionLadder {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionLadder {
    fn default() -> Self {
        PrecisionLadder {
            start_bits: 64,
            max_bits: 16384,
        }
    }
}

impl PrecisionLadder {
    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits.max(self.start_bits);
        std::iter::successors(Some(self.start_bits.max(MIN_PRECISION_BITS)), move |&p| {
            (p < max).then(|| (p * 2).min(max))
        })
    }
}

/// `floor(q * theta)`, rigorously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledFloor {
    pub floor: BigInt,
    /// `q * theta` is exactly the integer `floor`.
    pub exact_integer: bool,
    /// Precision at which the floor was established (0 when exact).
    pub precision_bits: u32,
}

pub fn floor_scaled(expr: &RealExpr, q: &BigInt, ladder: PrecisionLadder) -> Result<ScaledFloor> {
    if let Some(r) = expr.exact_rational() {
        let v = r * BigRational::from_integer(q.clone());
        return Ok(ScaledFloor {
            floor: v.floor().to_integer(),
            exact_integer: v.is_integer(),
            precision_bits: 0,
        });
    }
    let q_bits = q.bits() as u32;
    let mut last = 0;
    for bits in ladder.steps() {
        last = bits;
        let (lo, hi) = expr.enclose_abs(bits + q_bits);
        let (lo, hi) = (lo.mul_int(q), hi.mul_int(q));
        let f = lo.floor();
        // strict: f < lo <= q*theta <= hi < f + 1
        if !lo.is_integer() && hi < Dyadic::from_int(&f + 1) {
            return Ok(ScaledFloor {
                floor: f,
                exact_integer: false,
                precision_bits: bits,
            });
        }
    }
    Err(Error::PrecisionExhausted {
        precision_bits: last,
        what: format!("cannot separate {q} * ({expr}) from an integer"),
    })
}

/// Proves `expr > 0`, escalating precision.
pub fn prove_positive(expr: &RealExpr, ladder: PrecisionLadder) -> Result<()> {
    if let Some(r) = expr.exact_rational() {
        return if r.is_positive() {
            Ok(())
        } else {
            Err(Error::NonPositiveTheta(expr.to_string()))
        };
    }
    let mut last = 0;
    for bits in ladder.steps() {
        last = bits;
        let (lo, hi) = expr.enclose_abs(bits);
        if lo.signum() > 0 {
            return Ok(());
        }
        if hi.signum() <= 0 {
            return Err(Error::NonPositiveTheta(expr.to_string()));
        }
    }
    Err(Error::PrecisionExhausted {
        precision_bits: last,
        what: format!("sign of {expr} unresolved"),
    })
}
