//! Exact dyadic rationals `m * 2^e` and their complex counterpart.
//!
//! Values are kept in canonical form: the mantissa is odd, or the value is
//! zero and stored as `0 * 2^0`. Addition and subtraction are exact and
//! infallible. Multiplication and explicit power-of-two scaling are the only
//! operations that can push the exponent out of its bounded range, so they are
//! checked and report [`DyadicError::ExponentOverflow`].

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest admissible magnitude of a binary exponent (and of the position of
/// the leading bit).
pub const MAX_EXPONENT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DyadicError {
    #[error("dyadic exponent overflow")]
    ExponentOverflow,
    #[error("interval lower bound exceeds upper bound")]
    InvertedBounds,
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("malformed dyadic literal `{0}`")]
    Parse(String),
}

pub type DyadicResult<T> = Result<T, DyadicError>;

/// An exact dyadic rational `mantissa * 2^exponent`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::canonical(BigInt::from(v), 0)
    }

    /// `mantissa * 2^exponent`, range checked.
    pub fn from_parts(mantissa: impl Into<BigInt>, exponent: i64) -> DyadicResult<Self> {
        Dyadic::canonical(mantissa.into(), exponent).checked()
    }

    /// `2^exponent`.
    pub fn pow2(exponent: i64) -> DyadicResult<Self> {
        Dyadic::from_parts(1, exponent)
    }

    /// Exact conversion; every finite `f64` is a dyadic rational.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::canonical(BigInt::from(sign * m), e))
    }

    fn canonical(mut mantissa: BigInt, mut exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz as usize;
            exponent += tz as i64;
        }
        Dyadic { mantissa, exponent }
    }

    fn checked(self) -> DyadicResult<Self> {
        if self.is_zero() {
            return Ok(self);
        }
        if self.exponent.abs() > MAX_EXPONENT || self.msb().abs() > MAX_EXPONENT {
            return Err(DyadicError::ExponentOverflow);
        }
        Ok(self)
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

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
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

    /// `floor(log2 |x|)`; meaningless (returns `i64::MIN`) for zero.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.exponent + self.mantissa.bits() as i64 - 1
    }

    pub fn checked_mul(&self, other: &Dyadic) -> DyadicResult<Dyadic> {
        if self.is_zero() || other.is_zero() {
            return Ok(Dyadic::zero());
        }
        // Product of odd mantissas is odd: already canonical.
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
        .checked()
    }

    pub fn square(&self) -> DyadicResult<Dyadic> {
        self.checked_mul(self)
    }

    /// `self * 2^k`.
    pub fn mul_pow2(&self, k: i64) -> DyadicResult<Dyadic> {
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
        .checked()
    }

    pub fn half(&self) -> DyadicResult<Dyadic> {
        self.mul_pow2(-1)
    }

    /// Integer `self * 2^shift` rounded toward negative infinity.
    fn scaled_floor(&self, shift: i64) -> BigInt {
        let e = self.exponent + shift;
        if e >= 0 {
            &self.mantissa << (e as usize)
        } else {
            // Arithmetic right shift on BigInt rounds toward negative infinity.
            &self.mantissa >> ((-e) as usize)
        }
    }

    /// `floor(self * 2^shift)` as `i64`, if it fits.
    pub fn floor_scaled_i64(&self, shift: i64) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.msb() + shift > 62 {
            return None;
        }
        self.scaled_floor(shift).to_i64()
    }

    /// Largest multiple of `2^-prec` not above `self`.
    pub fn floor_at(&self, prec: i64) -> Dyadic {
        if self.is_zero() || self.exponent >= -prec {
            return self.clone();
        }
        Dyadic::canonical(self.scaled_floor(prec), -prec)
    }

    /// Smallest multiple of `2^-prec` not below `self`.
    pub fn ceil_at(&self, prec: i64) -> Dyadic {
        -(-self).floor_at(prec)
    }

    /// Nearest multiple of `2^-prec` (ties toward positive infinity).
    pub fn round_at(&self, prec: i64) -> Dyadic {
        if self.is_zero() || self.exponent >= -prec {
            return self.clone();
        }
        let half = Dyadic::canonical(BigInt::one(), -prec - 1);
        (self + &half).floor_at(prec)
    }

    /// Quantum exponent used by enclosure rounding: absolute `2^-prec` for
    /// moderate magnitudes, relative `2 * prec` significant bits for huge ones.
    fn enclosure_quantum(&self, prec: u32) -> i64 {
        let prec = prec as i64;
        core::cmp::max(-prec, self.msb() - 2 * prec)
    }

    /// Directed rounding down used by interval enclosures.
    pub fn round_down(&self, prec: u32) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let q = self.enclosure_quantum(prec);
        self.floor_at(-q)
    }

    /// Directed rounding up used by interval enclosures.
    pub fn round_up(&self, prec: u32) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let q = self.enclosure_quantum(prec);
        self.ceil_at(-q)
    }

    /// Lower bound on `sqrt(self)` that is a multiple of `2^-prec`.
    pub fn sqrt_floor_at(&self, prec: i64) -> DyadicResult<Dyadic> {
        if self.is_negative() {
            return Err(DyadicError::NegativeSqrt);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        // floor(sqrt(x * 4^prec)) * 2^-prec, with x * 4^prec floored first.
        let scaled = self.scaled_floor(2 * prec);
        Dyadic::from_parts(scaled.sqrt(), -prec)
    }

    /// Upper bound on `sqrt(self)` that is a multiple of `2^-prec`.
    pub fn sqrt_ceil_at(&self, prec: i64) -> DyadicResult<Dyadic> {
        let lo = self.sqrt_floor_at(prec)?;
        if lo.square()? == *self {
            Ok(lo)
        } else {
            Ok(&lo + &Dyadic::pow2(-prec)?)
        }
    }

    /// `floor(self / divisor)` at resolution `2^-prec`.
    pub fn div_floor_at(&self, divisor: &Dyadic, prec: i64) -> DyadicResult<Dyadic> {
        if divisor.is_zero() {
            return Err(DyadicError::DivisionByZero);
        }
        // self / divisor = (ms / md) * 2^(es - ed); scale numerator so the
        // integer quotient carries `prec` fractional bits.
        let shift = prec + self.exponent - divisor.exponent;
        let (num, den) = if shift >= 0 {
            (&self.mantissa << (shift as usize), divisor.mantissa.clone())
        } else {
            (self.mantissa.clone(), &divisor.mantissa << ((-shift) as usize))
        };
        Dyadic::from_parts(num.div_floor(&den), -prec)
    }

    pub fn div_ceil_at(&self, divisor: &Dyadic, prec: i64) -> DyadicResult<Dyadic> {
        Ok(-(-self).div_floor_at(divisor, prec)?)
    }

    /// Nearest `f64` (truncating the mantissa to 62 leading bits first).
    pub fn to_f64(&self) -> f64 {
        self.to_f64_scaled(0)
    }

    /// Approximates `self * 2^shift` as `f64`; saturates to infinity.
    pub fn to_f64_scaled(&self, shift: i64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 62).max(0);
        let top = (&self.mantissa >> (drop as usize)).to_i64().unwrap_or(0);
        let e = self.exponent + drop + shift;
        let e = e.clamp(-4000, 4000) as i32;
        libm::ldexp(top as f64, e)
    }

    /// Exact decimal expansion (every dyadic has a finite one).
    pub fn to_decimal_string(&self) -> String {
        if self.exponent >= 0 {
            return self.to_string();
        }
        let k = (-self.exponent) as usize;
        // m * 2^-k = m * 5^k / 10^k.
        let scaled = self.mantissa.abs() * num_traits::pow(BigInt::from(5), k);
        let digits = scaled.to_string();
        let (int_part, frac_part) = if digits.len() > k {
            let (a, b) = digits.split_at(digits.len() - k);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(k - digits.len()), digits))
        };
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{}", frac_part.trim_end_matches('0'))
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes, flipping for negatives.
        let mag = match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {
                let (a, b) = (self.mantissa.magnitude(), other.mantissa.magnitude());
                match self.exponent.cmp(&other.exponent) {
                    Ordering::Equal => a.cmp(b),
                    Ordering::Greater => (a << ((self.exponent - other.exponent) as usize)).cmp(b),
                    Ordering::Less => a.cmp(&(b << ((other.exponent - self.exponent) as usize))),
                }
            }
            ord => ord,
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let sum = match self.exponent.cmp(&rhs.exponent) {
            Ordering::Equal => &self.mantissa + &rhs.mantissa,
            Ordering::Greater => (&self.mantissa << ((self.exponent - rhs.exponent) as usize)) + &rhs.mantissa,
            Ordering::Less => &self.mantissa + (&rhs.mantissa << ((rhs.exponent - self.exponent) as usize)),
        };
        Dyadic::canonical(sum, self.exponent.min(rhs.exponent))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return -rhs;
        }
        let diff = match self.exponent.cmp(&rhs.exponent) {
            Ordering::Equal => &self.mantissa - &rhs.mantissa,
            Ordering::Greater => (&self.mantissa << ((self.exponent - rhs.exponent) as usize)) - &rhs.mantissa,
            Ordering::Less => &self.mantissa - (&rhs.mantissa << ((rhs.exponent - self.exponent) as usize)),
        };
        Dyadic::canonical(diff, self.exponent.min(rhs.exponent))
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
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

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_i64(v)
    }
}

/// Integers print in decimal; everything else as `m*2^e` with `m` odd.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent >= 0 {
            write!(f, "{}", &self.mantissa << (self.exponent as usize))
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:e})", self, self.to_f64())
    }
}

/// Accepts `-12`, `0.625`, `5*2^-3`, `5p-3` and `a/2^k`-style fractions
/// `5/8`. Decimal and fractional forms must denote a dyadic value exactly.
impl FromStr for Dyadic {
    type Err = DyadicError;

    fn from_str(s: &str) -> DyadicResult<Self> {
        let s = s.trim();
        let err = || DyadicError::Parse(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        if let Some((m, e)) = s.split_once("*2^").or_else(|| s.split_once('p')) {
            let m: BigInt = m.trim().parse().map_err(|_| err())?;
            let e: i64 = e.trim().parse().map_err(|_| err())?;
            return Dyadic::from_parts(m, e);
        }
        let (num, den) = parse_rational(s).ok_or_else(err)?;
        if den.is_zero() {
            return Err(DyadicError::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_zero() { (num, den) } else { (num / &g, den / &g) };
        let tz = den.trailing_zeros().unwrap_or(0);
        if (&den >> (tz as usize)) != BigInt::one() {
            return Err(err());
        }
        Dyadic::from_parts(num, -(tz as i64))
    }
}

/// Parses an integer, decimal (`-1.25`) or fraction (`3/7`) literal into a
/// numerator and positive denominator. Shared with coefficient parsing.
pub(crate) fn parse_rational(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_negative() {
            return Some((-n, -d));
        }
        return Some((n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Some((num, den))
}

/// A complex number with exact dyadic components.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DyadicComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl DyadicComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        DyadicComplex { re, im }
    }

    pub fn real(re: Dyadic) -> Self {
        DyadicComplex {
            re,
            im: Dyadic::zero(),
        }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        DyadicComplex::new(Dyadic::from_i64(re), Dyadic::from_i64(im))
    }

    pub fn zero() -> Self {
        DyadicComplex::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn checked_mul(&self, other: &DyadicComplex) -> DyadicResult<DyadicComplex> {
        let re = &self.re.checked_mul(&other.re)? - &self.im.checked_mul(&other.im)?;
        let im = &self.re.checked_mul(&other.im)? + &self.im.checked_mul(&other.re)?;
        Ok(DyadicComplex { re, im })
    }

    pub fn scale(&self, k: &Dyadic) -> DyadicResult<DyadicComplex> {
        Ok(DyadicComplex::new(self.re.checked_mul(k)?, self.im.checked_mul(k)?))
    }

    /// `|z|^2`, exact.
    pub fn norm_sq(&self) -> DyadicResult<Dyadic> {
        Ok(&self.re.square()? + &self.im.square()?)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Lexicographic order on `(re, im)`, used for canonical sorting.
    pub fn lex_cmp(&self, other: &DyadicComplex) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl<'a> Add<&'a DyadicComplex> for &'a DyadicComplex {
    type Output = DyadicComplex;
    fn add(self, rhs: &'a DyadicComplex) -> DyadicComplex {
        DyadicComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a DyadicComplex> for &'a DyadicComplex {
    type Output = DyadicComplex;
    fn sub(self, rhs: &'a DyadicComplex) -> DyadicComplex {
        DyadicComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for &DyadicComplex {
    type Output = DyadicComplex;
    fn neg(self) -> DyadicComplex {
        DyadicComplex::new(-&self.re, -&self.im)
    }
}

impl fmt::Debug for DyadicComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

/// `dyadic_round`: nearest multiple of `2^-prec`, so the error is at most
/// `2^-(prec+1)` and the result's exponent is at least `-prec`.
pub fn dyadic_round(x: &Dyadic, prec: u32) -> Dyadic {
    x.round_at(prec as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::from_parts(12, 0).unwrap();
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        let z = Dyadic::from_parts(0, 17).unwrap();
        assert_eq!(z.exponent(), 0);
        assert_eq!(&d("0.75") - &d("0.75"), Dyadic::zero());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(d("0.625"), Dyadic::from_parts(5, -3).unwrap());
        assert_eq!(d("5*2^-3").to_string(), "5*2^-3");
        assert_eq!(d("-3/4"), Dyadic::from_parts(-3, -2).unwrap());
        assert_eq!(d("5p-3"), d("0.625"));
        assert_eq!(d("-24").to_string(), "-24");
        assert!("0.1".parse::<Dyadic>().is_err());
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("abc".parse::<Dyadic>().is_err());
        assert_eq!(d("-5*2^-3").to_decimal_string(), "-0.625");
        assert_eq!(d("3*2^-6").to_decimal_string(), "0.046875");
        assert_eq!(d("12").to_decimal_string(), "12");
        let x = d("-123*2^-40");
        assert_eq!(x.to_decimal_string().parse::<Dyadic>().unwrap(), x);
        assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x);
    }

    #[test]
    fn ordering() {
        assert!(d("-1") < d("-0.5"));
        assert!(d("0.5") < d("0.75"));
        assert!(d("-0.75") < d("0.5"));
        assert!(d("3*2^-100") > Dyadic::zero());
        assert!(d("3*2^-100") < d("1*2^-98"));
        assert_eq!(d("2").cmp(&d("8*2^-2")), Ordering::Equal);
    }

    #[test]
    fn rounding_examples() {
        // 3 is already representable at any precision.
        assert_eq!(dyadic_round(&d("3"), 4), d("3"));
        let tiny = d("1*2^-10");
        let r = dyadic_round(&tiny, 4);
        assert!((&r - &tiny).abs() <= d("1*2^-4"));
        assert!(r.is_zero() || r.exponent() >= -4);
        let x = d("5*2^-3");
        let r = dyadic_round(&x, 2);
        assert!((&r - &x).abs() <= d("1*2^-2"));
        assert!(r == d("0.5") || r == d("0.75"));
    }

    #[test]
    fn directed_rounding() {
        let x = d("-11*2^-5");
        assert_eq!(x.floor_at(2), d("-0.5"));
        assert_eq!(x.ceil_at(2), d("-0.25"));
        let y = d("11*2^-5");
        assert_eq!(y.floor_at(2), d("0.25"));
        assert_eq!(y.ceil_at(2), d("0.5"));
        assert!(y.round_down(3) <= y && y <= y.round_up(3));
        // Huge magnitudes keep 2*prec significant bits rather than absolute ones.
        let big = Dyadic::from_parts(BigInt::from(3) << 300usize, 0).unwrap() + Dyadic::one();
        let down = big.round_down(16);
        assert!(down <= big && down.exponent() > 0);
    }

    #[test]
    fn sqrt_and_division_bounds() {
        let two = d("2");
        let lo = two.sqrt_floor_at(30).unwrap();
        let hi = two.sqrt_ceil_at(30).unwrap();
        assert!(lo.square().unwrap() <= two && two <= hi.square().unwrap());
        assert_eq!(&hi - &lo, d("1*2^-30"));
        assert_eq!(d("9").sqrt_ceil_at(4).unwrap(), d("3"));
        assert!(d("-1").sqrt_floor_at(3).is_err());
        let q_lo = d("1").div_floor_at(&d("3"), 20).unwrap();
        let q_hi = d("1").div_ceil_at(&d("3"), 20).unwrap();
        assert!(q_lo.checked_mul(&d("3")).unwrap() <= d("1"));
        assert!(q_hi.checked_mul(&d("3")).unwrap() >= d("1"));
        assert!(d("1").div_floor_at(&Dyadic::zero(), 4).is_err());
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = Dyadic::pow2(MAX_EXPONENT / 2 + 1).unwrap();
        assert_eq!(big.square(), Err(DyadicError::ExponentOverflow));
        assert!(Dyadic::pow2(MAX_EXPONENT + 1).is_err());
    }

    #[test]
    fn f64_conversion_is_exact() {
        for v in [0.1f64, -3.75, 1e-300, 6.02e23, f64::MIN_POSITIVE / 4.0] {
            let x = Dyadic::from_f64(v).unwrap();
            assert_eq!(x.to_f64(), v);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn complex_product() {
        let i = DyadicComplex::from_i64(0, 1);
        assert_eq!(i.checked_mul(&i).unwrap(), DyadicComplex::from_i64(-1, 0));
        let z = DyadicComplex::new(d("0.5"), d("-1.5"));
        assert_eq!(z.norm_sq().unwrap(), d("2.5"));
    }
}
