//! Dyadic rationals `m * 2^e` and closed intervals with dyadic endpoints.
//!
//! All arithmetic is exact; rounding only happens when an enclosure is
//! first produced (see `realnum`), and always outward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

/// Exact value `mantissa * 2^exponent`, normalized so that the mantissa is
/// odd (or the value is zero with exponent 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mantissa * k, self.exponent)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    /// `self * 2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mantissa.clone(), self.exponent + k)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as usize
        } else {
            let den = BigInt::one() << (-self.exponent) as usize;
            self.mantissa.div_floor(&den)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    /// Nearest-ish `f64`, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mantissa >> shift as usize)
            .to_f64()
            .unwrap_or(f64::NAN);
        m * 2f64.powi((self.exponent + shift).clamp(-2000, 2000) as i32)
    }

    /// Decimal rendering with `sig` significant digits, rounded toward
    /// -inf (`round_up = false`) or +inf (`round_up = true`).
    pub fn to_decimal(&self, sig: usize, round_up: bool) -> String {
        rational_to_decimal(&self.to_rational(), sig, round_up)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        (a, b, e)
    }

    pub fn cmp_int(&self, v: &BigInt) -> Ordering {
        self.cmp(&Dyadic::from_int(v.clone()))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

/// Serialized as `{ "mantissa": "<int>", "exponent": e, "decimal": "..." }`
/// with a 15-significant-digit nearest-below decimal rendering.
impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Dyadic", 2)?;
        st.serialize_field("mantissa", &self.mantissa.to_string())?;
        st.serialize_field("exponent", &self.exponent)?;
        st.end()
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn scaled_by_pow10(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        r * BigRational::from_integer(pow10(k as u32))
    } else {
        r / BigRational::from_integer(pow10((-k) as u32))
    }
}

/// Directed decimal rendering of an exact rational.
pub fn rational_to_decimal(r: &BigRational, sig: usize, round_up: bool) -> String {
    let sig = sig.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let abs = r.abs();
    // 10^e <= |r| < 10^(e+1)
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    if abs < scaled_by_pow10(&BigRational::one(), e) {
        e -= 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = scaled_by_pow10(r, shift);
    let mut digits = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let mut exp10 = -shift;
    if digits.abs().to_string().len() > sig {
        // rounding carried into a new digit: 9.99.. -> 10.0
        digits = if round_up {
            digits.div_ceil(&BigInt::from(10))
        } else {
            digits.div_floor(&BigInt::from(10))
        };
        exp10 += 1;
    }
    format_scaled(&digits, exp10)
}

/// Renders `digits * 10^exp10` in positional notation, trimming trailing
/// zeros after the point.
fn format_scaled(digits: &BigInt, exp10: i64) -> String {
    let neg = digits.is_negative();
    let s = digits.abs().to_string();
    let body = if exp10 >= 0 {
        let mut t = s;
        t.extend(std::iter::repeat_n('0', exp10 as usize));
        t
    } else {
        let frac_len = (-exp10) as usize;
        let padded = if s.len() <= frac_len {
            format!("{}{}", "0".repeat(frac_len - s.len() + 1), s)
        } else {
            s
        };
        let (int, frac) = padded.split_at(padded.len() - frac_len);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl Interval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(v: Dyadic, precision_bits: u32) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
            precision_bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, v: &BigRational) -> bool {
        &self.lo.to_rational() <= v && v <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Interval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        Interval {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    pub fn abs(&self) -> Interval {
        let (lo, hi) = if self.lo.signum() >= 0 {
            (self.lo.clone(), self.hi.clone())
        } else if self.hi.signum() <= 0 {
            (-&self.hi, -&self.lo)
        } else {
            (Dyadic::zero(), self.hi.clone().max(-&self.lo))
        };
        Interval {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(15, false),
            self.hi.to_decimal(15, true)
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Interval", 3)?;
        st.serialize_field("lo", &crate::json::bound(&self.lo, 15, false))?;
        st.serialize_field("hi", &crate::json::bound(&self.hi, 15, true))?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.end()
    }
}
