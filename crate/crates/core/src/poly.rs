//! Polynomials whose coefficients are answered by a precision oracle.
//!
//! A [`PolynomialOracle`] is either a base polynomial with exact, rational or
//! rotation coefficients, the derivative of another oracle, or the `n`-th
//! iterate of another oracle. Every query returns a box of prescribed width
//! that provably contains the true coefficient.
//!
//! Evaluation goes through [`PreparedPoly`], which fixes the coefficient
//! enclosures at one working precision and runs Horner's scheme in interval
//! arithmetic with outward rounding after every step.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{parse_rational, Dyadic, DyadicComplex, DyadicResult};
use crate::error::{Error, Result};
use crate::interval::{ComplexBox, Interval};
use crate::transcendental::{rotation, RotationAngle};

/// Largest degree `iterate_map_poly` will expand to unless told otherwise.
pub const DEFAULT_DEGREE_CAP: usize = 4096;

/// A real number given either exactly or as a reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RealValue {
    Dyadic(Dyadic),
    /// `num / den` with `den > 0`, reduced, and `den` not a power of two.
    Ratio { num: BigInt, den: BigInt },
}

impl RealValue {
    fn from_ratio(num: BigInt, den: BigInt) -> Option<RealValue> {
        if den.is_zero() {
            return None;
        }
        let (mut num, mut den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (&den >> (tz as usize)).is_one() {
            return Dyadic::from_parts(num, -(tz as i64)).ok().map(RealValue::Dyadic);
        }
        Some(RealValue::Ratio { num, den })
    }

    fn scaled(&self, k: &BigInt) -> RealValue {
        match self {
            RealValue::Dyadic(d) => {
                RealValue::Dyadic(d.checked_mul(&Dyadic::from_parts(k.clone(), 0).unwrap()).unwrap())
            }
            RealValue::Ratio { num, den } => RealValue::from_ratio(num * k, den.clone()).unwrap(),
        }
    }

    fn enclosure(&self, prec: u32) -> DyadicResult<Interval> {
        match self {
            RealValue::Dyadic(d) => Ok(Interval::point(d.clone())),
            RealValue::Ratio { num, den } => {
                let n = Dyadic::from_parts(num.clone(), 0)?;
                let d = Dyadic::from_parts(den.clone(), 0)?;
                Interval::new(n.div_floor_at(&d, prec as i64)?, n.div_ceil_at(&d, prec as i64)?)
            }
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, RealValue::Dyadic(d) if d.is_zero())
    }

    fn is_negative(&self) -> bool {
        match self {
            RealValue::Dyadic(d) => d.is_negative(),
            RealValue::Ratio { num, .. } => num.is_negative(),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Dyadic(d) => f.write_str(&d.to_decimal_string()),
            RealValue::Ratio { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

fn parse_real(s: &str) -> Option<RealValue> {
    if let Ok(d) = s.parse::<Dyadic>() {
        return Some(RealValue::Dyadic(d));
    }
    let (num, den) = parse_rational(s)?;
    RealValue::from_ratio(num, den)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoefficientSource {
    Value { re: RealValue, im: RealValue },
    /// `exp(2 pi i theta)`.
    Rotation(RotationAngle),
}

/// One coefficient: `multiplier * source`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coefficient {
    source: CoefficientSource,
    multiplier: BigInt,
}

impl Coefficient {
    pub fn exact(z: DyadicComplex) -> Self {
        Coefficient {
            source: CoefficientSource::Value {
                re: RealValue::Dyadic(z.re),
                im: RealValue::Dyadic(z.im),
            },
            multiplier: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Coefficient::exact(DyadicComplex::zero())
    }

    pub fn rotation(angle: RotationAngle) -> Self {
        Coefficient {
            source: CoefficientSource::Rotation(angle),
            multiplier: BigInt::one(),
        }
    }

    pub fn golden() -> Self {
        Coefficient::rotation(RotationAngle::Golden)
    }

    pub fn source(&self) -> &CoefficientSource {
        &self.source
    }

    /// The exact value, when the coefficient is a dyadic complex number.
    pub fn as_exact(&self) -> Option<DyadicComplex> {
        match &self.source {
            CoefficientSource::Value {
                re: RealValue::Dyadic(re),
                im: RealValue::Dyadic(im),
            } => {
                let m = Dyadic::from_parts(self.multiplier.clone(), 0).ok()?;
                Some(DyadicComplex::new(re.checked_mul(&m).ok()?, im.checked_mul(&m).ok()?))
            }
            _ => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.multiplier.is_zero()
            || matches!(&self.source, CoefficientSource::Value { re, im } if re.is_zero() && im.is_zero())
    }

    fn is_rotation(&self) -> bool {
        matches!(self.source, CoefficientSource::Rotation(_))
    }

    fn scaled(&self, k: u64) -> Coefficient {
        let k = BigInt::from(k);
        match &self.source {
            CoefficientSource::Value { re, im } => Coefficient {
                source: CoefficientSource::Value {
                    re: re.scaled(&(&k * &self.multiplier)),
                    im: im.scaled(&(&k * &self.multiplier)),
                },
                multiplier: BigInt::one(),
            },
            CoefficientSource::Rotation(_) => Coefficient {
                source: self.source.clone(),
                multiplier: &self.multiplier * k,
            },
        }
    }

    /// A box of width at most `2^-prec` containing the coefficient.
    pub fn enclosure(&self, prec: u32) -> DyadicResult<ComplexBox> {
        let extra = self.multiplier.bits() as u32 + 1;
        let base = match &self.source {
            CoefficientSource::Value { re, im } => {
                ComplexBox::from_intervals(re.enclosure(prec + extra)?, im.enclosure(prec + extra)?)
            }
            CoefficientSource::Rotation(angle) => rotation(angle, prec + extra)?,
        };
        if self.multiplier.is_one() {
            return Ok(base);
        }
        base.scale(&Dyadic::from_parts(self.multiplier.clone(), 0)?)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.multiplier.is_one() {
            write!(f, "{}*", self.multiplier)?;
        }
        match &self.source {
            CoefficientSource::Rotation(RotationAngle::Golden) => f.write_str("golden"),
            CoefficientSource::Rotation(RotationAngle::Dyadic(t)) => {
                write!(f, "rot({})", t.to_decimal_string())
            }
            CoefficientSource::Value { re, im } => {
                if im.is_zero() {
                    write!(f, "{re}")
                } else if re.is_zero() {
                    write!(f, "{im}i")
                } else if im.is_negative() {
                    write!(f, "{re}{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    /// `re`, `re+imi`, `imi`, `p/q`, `golden` or `rot(theta)`.
    fn from_str(raw: &str) -> Result<Self> {
        let s: String = raw.trim().replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Descriptor(format!("malformed coefficient `{}`", raw.trim()));
        if s.is_empty() {
            return Err(bad());
        }
        if s == "golden" {
            return Ok(Coefficient::golden());
        }
        if let Some(t) = s.strip_prefix("rot(").and_then(|r| r.strip_suffix(')')) {
            let t: Dyadic = t.parse().map_err(|_| bad())?;
            return Ok(Coefficient::rotation(RotationAngle::Dyadic(t)));
        }
        let (re, im) = match s.strip_suffix('i') {
            None => (s.as_str(), "0"),
            Some(body) => {
                let bytes = body.as_bytes();
                let split = (1..bytes.len()).rev().find(|&k| {
                    (bytes[k] == b'+' || bytes[k] == b'-')
                        && !matches!(bytes[k - 1], b'^' | b'p' | b'*' | b'/' | b'e')
                });
                match split {
                    Some(k) => (&body[..k], &body[k..]),
                    None => ("0", body),
                }
            }
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        let re = parse_real(re).ok_or_else(bad)?;
        let im = parse_real(im).ok_or_else(bad)?;
        Ok(Coefficient {
            source: CoefficientSource::Value { re, im },
            multiplier: BigInt::one(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Kind {
    Base(Vec<Coefficient>),
    Derivative(Box<PolynomialOracle>),
    Iterate { base: Box<PolynomialOracle>, n: u32 },
}

/// A polynomial `a_0 + a_1 z + ... + a_d z^d` with oracle coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialOracle {
    kind: Kind,
    degree: usize,
}

impl PolynomialOracle {
    /// Coefficients in ascending order; the leading one must not be exactly zero.
    pub fn new(coeffs: Vec<Coefficient>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Precondition("a polynomial needs degree at least 1".into()));
        }
        if coeffs.last().unwrap().is_exact_zero() {
            return Err(Error::DegenerateLeadingCoefficient);
        }
        let degree = coeffs.len() - 1;
        Ok(PolynomialOracle {
            kind: Kind::Base(coeffs),
            degree,
        })
    }

    pub fn from_exact(coeffs: Vec<DyadicComplex>) -> Result<Self> {
        PolynomialOracle::new(coeffs.into_iter().map(Coefficient::exact).collect())
    }

    /// Real integer coefficients, ascending.
    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        PolynomialOracle::from_exact(coeffs.iter().map(|&c| DyadicComplex::from_i64(c, 0)).collect())
    }

    /// Parses the comma-separated descriptor `a_0,...,a_d` (degree at least 2).
    /// A rotation coefficient is only accepted as `a_1` of a quadratic.
    pub fn parse(desc: &str) -> Result<Self> {
        let coeffs = desc.split(',').map(str::parse).collect::<Result<Vec<Coefficient>>>()?;
        if coeffs.len() < 3 {
            return Err(Error::Descriptor(format!(
                "need at least three coefficients (degree >= 2), got {}",
                coeffs.len()
            )));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_rotation() && (coeffs.len() != 3 || i != 1) {
                return Err(Error::Descriptor(
                    "`golden` is only allowed as a_1 of a degree-2 polynomial".into(),
                ));
            }
        }
        if coeffs.last().unwrap().is_exact_zero() {
            return Err(Error::Descriptor("leading coefficient is zero".into()));
        }
        PolynomialOracle::new(coeffs)
    }

    /// `z^2 + exp(2 pi i theta) z`.
    pub fn siegel_quadratic(angle: RotationAngle) -> Self {
        PolynomialOracle::new(vec![
            Coefficient::zero(),
            Coefficient::rotation(angle),
            Coefficient::exact(DyadicComplex::from_i64(1, 0)),
        ])
        .expect("leading coefficient is one")
    }

    /// The angle `theta` when this is `z^2 + exp(2 pi i theta) z`.
    pub fn siegel_angle(&self) -> Option<RotationAngle> {
        let c = self.base_coefficients()?;
        if c.len() != 3 || !c[0].is_exact_zero() || c[2].as_exact()? != DyadicComplex::from_i64(1, 0) {
            return None;
        }
        match (&c[1].source, c[1].multiplier.is_one()) {
            (CoefficientSource::Rotation(a), true) => Some(a.clone()),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The base coefficient list, for base polynomials.
    pub fn base_coefficients(&self) -> Option<&[Coefficient]> {
        match &self.kind {
            Kind::Base(c) => Some(c),
            _ => None,
        }
    }

    /// All coefficients exactly, when every one of them is dyadic.
    pub fn exact_coefficients(&self) -> Option<Vec<DyadicComplex>> {
        match &self.kind {
            Kind::Base(c) => c.iter().map(Coefficient::as_exact).collect(),
            Kind::Derivative(inner) => {
                let c = inner.exact_coefficients()?;
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, a)| a.scale(&Dyadic::from_i64(i as i64)).ok())
                    .collect()
            }
            Kind::Iterate { base, n } => {
                let c = base.exact_coefficients()?;
                let boxes: Vec<ComplexBox> = c.iter().map(ComplexBox::point).collect();
                compose_power(&boxes, *n, None)
                    .ok()
                    .map(|v| v.iter().map(ComplexBox::center).collect())
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.kind {
            Kind::Base(c) => c.iter().all(|a| a.as_exact().is_some()),
            Kind::Derivative(inner) => inner.is_exact(),
            Kind::Iterate { base, .. } => base.is_exact(),
        }
    }

    /// Enclosures of width at most `2^-prec` of all coefficients, ascending.
    pub fn coefficient_boxes(&self, prec: u32) -> Result<Vec<ComplexBox>> {
        match &self.kind {
            Kind::Base(c) => Ok(c.iter().map(|a| a.enclosure(prec)).collect::<DyadicResult<_>>()?),
            Kind::Derivative(inner) => {
                let extra = usize::BITS - inner.degree.leading_zeros() + 1;
                let c = inner.coefficient_boxes(prec + extra)?;
                Ok(c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, a)| a.scale(&Dyadic::from_i64(i as i64)))
                    .collect::<DyadicResult<_>>()?)
            }
            Kind::Iterate { base, n } => {
                if let Some(c) = base.exact_coefficients() {
                    let boxes: Vec<ComplexBox> = c.iter().map(ComplexBox::point).collect();
                    return Ok(compose_power(&boxes, *n, None)?);
                }
                let target = Dyadic::pow2(-(prec as i64))?;
                let mut work = prec + 16 + 4 * n;
                for _ in 0..8 {
                    let c = base.coefficient_boxes(work + 8)?;
                    let out = compose_power(&c, *n, Some(work))?;
                    if out.iter().all(|b| b.width() <= target) {
                        return Ok(out);
                    }
                    work = work * 3 / 2 + 32;
                }
                Err(Error::PrecisionExhausted(format!(
                    "composed coefficients did not reach width 2^-{prec}"
                )))
            }
        }
    }

    pub fn coefficient_box(&self, i: usize, prec: u32) -> Result<ComplexBox> {
        if i > self.degree {
            return Ok(ComplexBox::zero());
        }
        match &self.kind {
            Kind::Base(c) => Ok(c[i].enclosure(prec)?),
            _ => Ok(self.coefficient_boxes(prec)?.swap_remove(i)),
        }
    }

    /// A dyadic approximation of `a_i` within `2^-prec`.
    pub fn coefficient(&self, i: usize, prec: u32) -> Result<DyadicComplex> {
        Ok(self.coefficient_box(i, prec)?.center())
    }

    /// Certified upper bound on `max_i |a_i|`.
    pub fn magnitude_bound(&self) -> Result<Dyadic> {
        let mut best = Dyadic::zero();
        for b in self.coefficient_boxes(16)? {
            best = best.max(b.mag_upper(16)?);
        }
        Ok(best)
    }

    /// Certified positive lower bound on `|a_d|`.
    pub fn leading_lower_bound(&self) -> Result<Dyadic> {
        for prec in [16u32, 32, 64, 128, 256] {
            let lead = self.coefficient_box(self.degree, prec)?;
            let lo = lead.mig_lower(prec as i64)?;
            if lo.is_positive() {
                return Ok(lo);
            }
        }
        Err(Error::DegenerateLeadingCoefficient)
    }

    /// Fixes coefficient enclosures for evaluation with rounding at `2^-prec`.
    pub fn prepare(&self, prec: u32) -> Result<PreparedPoly> {
        PreparedPoly::new(self.coefficient_boxes(prec + 4)?, prec)
    }
}

impl FromStr for PolynomialOracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolynomialOracle::parse(s)
    }
}

impl fmt::Display for PolynomialOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Base(c) => {
                for (i, a) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
            Kind::Derivative(inner) => write!(f, "d/dz[{inner}]"),
            Kind::Iterate { base, n } => write!(f, "iterate{n}[{base}]"),
        }
    }
}

/// Product of two coefficient lists, rounding each coefficient if asked.
fn poly_mul(a: &[ComplexBox], b: &[ComplexBox], round: Option<u32>) -> DyadicResult<Vec<ComplexBox>> {
    let mut out = vec![ComplexBox::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_point() && x.center().is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y)?);
        }
    }
    if let Some(p) = round {
        for c in &mut out {
            *c = c.round_out(p);
        }
    }
    Ok(out)
}

/// Coefficients of `p^n` by repeated Horner composition `p o q`.
fn compose_power(p: &[ComplexBox], n: u32, round: Option<u32>) -> DyadicResult<Vec<ComplexBox>> {
    let mut q = p.to_vec();
    for _ in 1..n {
        let mut r = vec![p[p.len() - 1].clone()];
        for a in p[..p.len() - 1].iter().rev() {
            r = poly_mul(&r, &q, round)?;
            r[0] = r[0].add(a);
        }
        q = r;
    }
    Ok(q)
}

/// Coefficient enclosures frozen at one precision, ready for repeated
/// interval evaluation.
#[derive(Debug, Clone)]
pub struct PreparedPoly {
    coeffs: Vec<ComplexBox>,
    first: Vec<ComplexBox>,
    second: Vec<ComplexBox>,
    prec: u32,
}

impl PreparedPoly {
    pub fn new(coeffs: Vec<ComplexBox>, prec: u32) -> Result<Self> {
        let deriv = |c: &[ComplexBox]| -> DyadicResult<Vec<ComplexBox>> {
            if c.len() <= 1 {
                return Ok(vec![ComplexBox::zero()]);
            }
            c.iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.scale(&Dyadic::from_i64(i as i64)))
                .collect()
        };
        let first = deriv(&coeffs)?;
        let second = deriv(&first)?;
        Ok(PreparedPoly {
            coeffs,
            first,
            second,
            prec,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coefficients(&self) -> &[ComplexBox] {
        &self.coeffs
    }

    fn horner(c: &[ComplexBox], x: &ComplexBox, prec: u32) -> DyadicResult<ComplexBox> {
        let mut acc = c[c.len() - 1].clone();
        for a in c[..c.len() - 1].iter().rev() {
            acc = acc.mul(x)?.add(a).round_out(prec);
        }
        Ok(acc)
    }

    /// Encloses `p(x)`.
    pub fn eval(&self, x: &ComplexBox) -> DyadicResult<ComplexBox> {
        Self::horner(&self.coeffs, x, self.prec)
    }

    /// Encloses `p'(x)`.
    pub fn eval_derivative(&self, x: &ComplexBox) -> DyadicResult<ComplexBox> {
        Self::horner(&self.first, x, self.prec)
    }

    /// Encloses `p''(x)`.
    pub fn eval_second(&self, x: &ComplexBox) -> DyadicResult<ComplexBox> {
        Self::horner(&self.second, x, self.prec)
    }

    /// Taylor coefficients `t_i` with `p(c + w) = sum_i t_i w^i`.
    pub fn taylor_at(&self, c: &DyadicComplex) -> DyadicResult<Vec<ComplexBox>> {
        let mut b = self.coeffs.clone();
        let cb = ComplexBox::point(c);
        let d = self.degree();
        for i in 0..d {
            for j in (i..d).rev() {
                b[j] = b[j].add(&b[j + 1].mul(&cb)?).round_out(self.prec);
            }
        }
        Ok(b)
    }
}

/// Encloses `p(z)` for all `z` in `x`, rounding outward at `2^-prec`.
pub fn eval_enclosure(p: &PolynomialOracle, x: &ComplexBox, prec: u32) -> Result<ComplexBox> {
    Ok(p.prepare(prec + 4)?.eval(x)?)
}

/// The derivative oracle; exact coefficients stay exact.
pub fn derivative(p: &PolynomialOracle) -> PolynomialOracle {
    match &p.kind {
        Kind::Base(c) if c.len() > 1 => {
            let coeffs = c.iter().enumerate().skip(1).map(|(i, a)| a.scaled(i as u64)).collect();
            PolynomialOracle {
                kind: Kind::Base(coeffs),
                degree: p.degree - 1,
            }
        }
        _ => PolynomialOracle {
            kind: Kind::Derivative(Box::new(p.clone())),
            degree: p.degree.saturating_sub(1),
        },
    }
}

/// The oracle for `p^n`, capped at [`DEFAULT_DEGREE_CAP`].
pub fn iterate_map_poly(p: &PolynomialOracle, n: u32) -> Result<PolynomialOracle> {
    iterate_map_poly_capped(p, n, DEFAULT_DEGREE_CAP)
}

pub fn iterate_map_poly_capped(p: &PolynomialOracle, n: u32, cap: usize) -> Result<PolynomialOracle> {
    if n == 0 {
        return Err(Error::Precondition("iterate count must be at least 1".into()));
    }
    let degree = p
        .degree
        .checked_pow(n)
        .filter(|&d| d <= cap)
        .ok_or_else(|| Error::Resource(format!("degree {}^{n} exceeds the cap {cap}", p.degree)))?;
    if n == 1 {
        return Ok(p.clone());
    }
    Ok(PolynomialOracle {
        kind: Kind::Iterate {
            base: Box::new(p.clone()),
            n,
        },
        degree,
    })
}

/// One point of an approximate orbit: `point` approximates `p^index(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub point: DyadicComplex,
    pub index: u32,
}

/// Approximate orbit `z, p(z), ..., p^count(z)`, each point the center of a
/// certified enclosure computed at `prec`.
pub fn approximate_orbit(p: &PolynomialOracle, z: &DyadicComplex, count: u32, prec: u32) -> Result<Vec<OrbitPoint>> {
    let pp = p.prepare(prec)?;
    let mut x = ComplexBox::point(z);
    let mut out = vec![OrbitPoint {
        point: z.clone(),
        index: 0,
    }];
    for index in 1..=count {
        x = pp.eval(&x)?;
        out.push(OrbitPoint {
            point: x.center(),
            index,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn exact(p: &PolynomialOracle) -> Vec<DyadicComplex> {
        p.exact_coefficients().unwrap()
    }

    fn reals(v: &[i64]) -> Vec<DyadicComplex> {
        v.iter().map(|&c| DyadicComplex::from_i64(c, 0)).collect()
    }

    #[test]
    fn descriptor_round_trip() {
        let p = PolynomialOracle::parse("-2, 0, 1").unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(exact(&p), reals(&[-2, 0, 1]));
        assert_eq!(p.to_string(), "-2,0,1");
        let q = PolynomialOracle::parse("0.25-1.5i,1/3,i,1").unwrap();
        assert_eq!(q.to_string(), "0.25-1.5i,1/3,1i,1");
        assert_eq!(PolynomialOracle::parse(&q.to_string()).unwrap(), q);
        let s = PolynomialOracle::parse("0,golden,1").unwrap();
        assert_eq!(s, PolynomialOracle::siegel_quadratic(RotationAngle::Golden));
        assert_eq!(s.siegel_angle(), Some(RotationAngle::Golden));
        assert_eq!(PolynomialOracle::parse("1,golden,1").unwrap().siegel_angle(), None);
        assert_eq!(PolynomialOracle::parse("0,2*golden,1").ok().and_then(|q| q.siegel_angle()), None);
        assert_eq!(p.siegel_angle(), None);
        assert_eq!(PolynomialOracle::parse("\u{2212}2,0,1").unwrap(), p);
    }

    #[test]
    fn descriptor_errors() {
        assert!(PolynomialOracle::parse("1,2").is_err());
        assert!(PolynomialOracle::parse("0,0,0").is_err());
        assert!(PolynomialOracle::parse("golden,0,1").is_err());
        assert!(PolynomialOracle::parse("0,golden,0,1").is_err());
        assert!(PolynomialOracle::parse("1,x,1").is_err());
        assert!(PolynomialOracle::parse("1,1/0,1").is_err());
    }

    #[test]
    fn rational_coefficients_converge() {
        let p = PolynomialOracle::parse("1/3,0,1").unwrap();
        let third = DyadicComplex::real(d("0.25"));
        for prec in [8u32, 40, 120] {
            let b = p.coefficient_box(0, prec).unwrap();
            assert!(b.width() <= Dyadic::pow2(-(prec as i64)).unwrap());
            let a = p.coefficient(0, prec).unwrap();
            // 3a within 3 * 2^-prec of 1.
            let err = (&a.re.checked_mul(&d("3")).unwrap() - &d("1")).abs();
            assert!(err <= Dyadic::pow2(-(prec as i64) + 2).unwrap());
            assert!(a.re > third.re);
        }
    }

    #[test]
    fn eval_examples() {
        let p = PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap();
        let one = ComplexBox::point(&DyadicComplex::from_i64(1, 0));
        assert!(eval_enclosure(&p, &one, 20).unwrap().contains_point(&DyadicComplex::from_i64(-1, 0)));
        let sq = PolynomialOracle::from_i64(&[0, 0, 1]).unwrap();
        let unit = ComplexBox::new(d("0"), d("1"), d("0"), d("1")).unwrap();
        let img = eval_enclosure(&sq, &unit, 20).unwrap();
        assert!(img.contains_box(&ComplexBox::new(d("-1"), d("1"), d("0"), d("2")).unwrap()));
        let two = ComplexBox::point(&DyadicComplex::from_i64(2, 0));
        assert_eq!(eval_enclosure(&sq, &two, 20).unwrap(), ComplexBox::point(&DyadicComplex::from_i64(4, 0)));
    }

    #[test]
    fn derivative_examples() {
        let p = PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(exact(&derivative(&p)), reals(&[0, 2]));
        let c = PolynomialOracle::from_i64(&[0, -3, 0, 1]).unwrap();
        let dc = derivative(&c);
        assert_eq!(dc.degree(), 2);
        assert_eq!(exact(&dc), reals(&[-3, 0, 3]));
        let g = derivative(&PolynomialOracle::siegel_quadratic(RotationAngle::Golden));
        assert_eq!(g.degree(), 1);
        assert!(g.coefficient_box(0, 60).unwrap().width() <= Dyadic::pow2(-60).unwrap());
    }

    #[test]
    fn iterate_examples() {
        let sq = PolynomialOracle::from_i64(&[0, 0, 1]).unwrap();
        assert_eq!(exact(&iterate_map_poly(&sq, 2).unwrap()), reals(&[0, 0, 0, 0, 1]));
        let p = PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap();
        let p2 = iterate_map_poly(&p, 2).unwrap();
        assert_eq!(p2.degree(), 4);
        assert_eq!(exact(&p2), reals(&[2, 0, -4, 0, 1]));
        assert_eq!(iterate_map_poly(&p, 1).unwrap(), p);
        assert!(matches!(iterate_map_poly(&p, 13), Err(Error::Resource(_))));
        assert!(iterate_map_poly(&p, 0).is_err());
    }

    #[test]
    fn iterate_with_transcendental_coefficient() {
        let g = PolynomialOracle::siegel_quadratic(RotationAngle::Golden);
        let g2 = iterate_map_poly(&g, 2).unwrap();
        let boxes = g2.coefficient_boxes(50).unwrap();
        assert_eq!(boxes.len(), 5);
        let target = Dyadic::pow2(-50).unwrap();
        assert!(boxes.iter().all(|b| b.width() <= target));
        // (z^2 + lz)^2 + l(z^2 + lz) has z^4 coefficient 1 and z^0 coefficient 0.
        assert!(boxes[4].contains_point(&DyadicComplex::from_i64(1, 0)));
        assert!(boxes[0].contains_point(&DyadicComplex::zero()));
    }

    #[test]
    fn taylor_shift_matches_expansion() {
        // z^3 - 3z at c = 1: (1+w)^3 - 3(1+w) = -2 + 0w + 3w^2 + w^3.
        let p = PolynomialOracle::from_i64(&[0, -3, 0, 1]).unwrap().prepare(40).unwrap();
        let t = p.taylor_at(&DyadicComplex::from_i64(1, 0)).unwrap();
        let expect = [-2, 0, 3, 1];
        for (b, e) in t.iter().zip(expect) {
            assert!(b.contains_point(&DyadicComplex::from_i64(e, 0)));
        }
    }

    #[test]
    fn magnitude_bounds() {
        let p = PolynomialOracle::parse("-2,0.5i,3").unwrap();
        assert!(p.magnitude_bound().unwrap() >= d("3"));
        let lo = p.leading_lower_bound().unwrap();
        assert!(lo.is_positive() && lo <= d("3"));
    }
}
