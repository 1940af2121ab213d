//! Rigorous enclosures of the few transcendental constants the crate needs:
//! `pi`, `sqrt(5)`, the golden rotation number and `exp(2 pi i theta)`.
//!
//! Every function returns an [`Interval`] (or box) guaranteed to contain the
//! true value, with width at most `2^-prec`.

use crate::dyadic::{Dyadic, DyadicComplex, DyadicResult};
use crate::interval::{ComplexBox, Interval};

/// Rotation number of a Siegel-type quadratic `z^2 + exp(2 pi i theta) z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RotationAngle {
    /// `(sqrt(5) - 1) / 2`.
    Golden,
    /// An exact dyadic angle (rational, hence never a Siegel parameter).
    Dyadic(Dyadic),
}

/// Encloses `sum_k sign^k / ((2k+1) x^(2k+1))`, i.e. `atan(1/x)`, for integer `x > 1`.
fn atan_inv(x: i64, work: i64) -> DyadicResult<Interval> {
    let one = Dyadic::one();
    let xd = Dyadic::from_i64(x);
    let x2 = Dyadic::from_i64(x * x);
    let eps = Dyadic::pow2(-work)?;
    // power = 1 / x^(2k+1), kept as an enclosing interval.
    let mut power = Interval::new(one.div_floor_at(&xd, work)?, one.div_ceil_at(&xd, work)?)?;
    let mut sum = Interval::zero();
    let mut k: i64 = 0;
    loop {
        let denom = Dyadic::from_i64(2 * k + 1);
        let term = Interval::new(
            power.lo().div_floor_at(&denom, work)?,
            power.hi().div_ceil_at(&denom, work)?,
        )?;
        if term.hi() <= &eps {
            // Alternating series with decreasing terms: the tail is bounded by
            // the first omitted term.
            return Ok(sum.inflate(term.hi()));
        }
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = Interval::new(
            power.lo().div_floor_at(&x2, work)?,
            power.hi().div_ceil_at(&x2, work)?,
        )?;
        k += 1;
    }
}

/// Enclosure of `pi` of width at most `2^-prec` (Machin's formula).
pub fn pi(prec: u32) -> DyadicResult<Interval> {
    let work = prec as i64 + 12;
    let a = atan_inv(5, work)?.mul_pow2(4)?;
    let b = atan_inv(239, work)?.mul_pow2(2)?;
    Ok(a.sub(&b).round_out(prec + 4))
}

/// Enclosure of `sqrt(5)` by interval Newton iteration on `x^2 - 5`.
pub fn sqrt5(prec: u32) -> DyadicResult<Interval> {
    let work = prec as i64 + 8;
    let five = Dyadic::from_i64(5);
    let target = Dyadic::pow2(-(prec as i64))?;
    let mut x = Interval::new(Dyadic::from_i64(2), Dyadic::from_i64(3))?;
    for _ in 0..(2 * prec + 64) {
        if x.width() <= target {
            break;
        }
        let m = x.mid();
        let fm = &m.square()? - &five;
        // N(X) = m - f(m) / (2X), with 2X > 0 on the whole iteration.
        let two_x = x.mul_pow2(1)?;
        let q = if fm.is_negative() {
            Interval::new(fm.div_floor_at(two_x.lo(), work)?, fm.div_ceil_at(two_x.hi(), work)?)?
        } else {
            Interval::new(fm.div_floor_at(two_x.hi(), work)?, fm.div_ceil_at(two_x.lo(), work)?)?
        };
        let newton = Interval::point(m).sub(&q);
        x = x.intersection(&newton).unwrap_or(newton);
    }
    Ok(x)
}

/// Enclosure of the golden rotation number `(sqrt(5) - 1) / 2`.
pub fn golden_theta(prec: u32) -> DyadicResult<Interval> {
    let s = sqrt5(prec + 2)?;
    s.sub(&Interval::point(Dyadic::one())).mul_pow2(-1)
}

/// Encloses `(cos x, sin x)` for `x` in the given interval by Taylor series
/// at the midpoint plus the Lipschitz widening by the radius.
fn cos_sin(x: &Interval, work: i64) -> DyadicResult<(Interval, Interval)> {
    let m = x.mid();
    let eps = Dyadic::pow2(-work)?;
    let abs_m = m.abs();
    let mut term = Interval::point(Dyadic::one());
    let mut cos = Interval::zero();
    let mut sin = Interval::zero();
    let mut k: i64 = 0;
    loop {
        // Once k + 1 >= 2|m| the tail sum_{j>=k} |m|^j/j! is at most 2 |term|.
        let ratio_ok = Dyadic::from_i64(k + 1) >= abs_m.mul_pow2(1)?;
        if ratio_ok && term.mag() <= eps {
            let tail = term.mag().mul_pow2(1)?;
            cos = cos.inflate(&tail);
            sin = sin.inflate(&tail);
            break;
        }
        match k % 4 {
            0 => cos = cos.add(&term),
            1 => sin = sin.add(&term),
            2 => cos = cos.sub(&term),
            _ => sin = sin.sub(&term),
        }
        k += 1;
        let next = term.scale(&m)?;
        let kk = Dyadic::from_i64(k);
        term = Interval::new(next.lo().div_floor_at(&kk, work)?, next.hi().div_ceil_at(&kk, work)?)?;
    }
    let r = x.radius();
    Ok((cos.inflate(&r), sin.inflate(&r)))
}

/// Enclosure of `exp(2 pi i theta)` as a complex box of width at most `2^-prec`.
pub fn rotation(angle: &RotationAngle, prec: u32) -> DyadicResult<ComplexBox> {
    let work = prec as i64 + 16;
    let wp = prec + 16;
    // Reduce theta to (-1/2, 1/2] before scaling by 2 pi.
    let theta = match angle {
        RotationAngle::Golden => golden_theta(wp)?.sub(&Interval::point(Dyadic::one())),
        RotationAngle::Dyadic(t) => {
            let n = t.round_at(0);
            Interval::point(t - &n)
        }
    };
    let two_pi = pi(wp)?.mul_pow2(1)?;
    let x = theta.mul(&two_pi)?.round_out(wp);
    let (c, s) = cos_sin(&x, work)?;
    Ok(ComplexBox::from_intervals(c, s).round_out(prec + 2))
}

/// A point approximation of `exp(2 pi i theta)` with per-component error at
/// most `2^-prec`.
pub fn rotation_approx(angle: &RotationAngle, prec: u32) -> DyadicResult<DyadicComplex> {
    let b = rotation(angle, prec + 2)?;
    let c = b.center();
    Ok(DyadicComplex::new(c.re.round_at(prec as i64 + 1), c.im.round_at(prec as i64 + 1)))
}
