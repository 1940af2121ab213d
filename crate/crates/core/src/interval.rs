//! Real intervals and axis-aligned complex boxes with dyadic endpoints.
//!
//! Exact operations (`add`, `mul`, ...) return the tightest interval with
//! dyadic endpoints; callers that iterate bound the endpoint growth with
//! [`Interval::round_out`] / [`ComplexBox::round_out`], which only ever widen.

use core::cmp::Ordering;
use core::fmt;

use crate::dyadic::{Dyadic, DyadicComplex, DyadicError, DyadicResult};

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> DyadicResult<Self> {
        if lo > hi {
            return Err(DyadicError::InvertedBounds);
        }
        Ok(Interval { lo, hi })
    }

    /// Builds `[min(a,b), max(a,b)]`.
    pub fn spanning(a: Dyadic, b: Dyadic) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    /// `[c - r, c + r]` for `r >= 0`.
    pub fn around(c: &Dyadic, r: &Dyadic) -> Self {
        Interval::spanning(c - r, c + r)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        // Halving cannot overflow for values produced by bounded arithmetic.
        (&self.lo + &self.hi).half().expect("midpoint exponent in range")
    }

    pub fn radius(&self) -> Dyadic {
        self.width().half().expect("radius exponent in range")
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` lies in the open interior of `self`.
    pub fn strictly_contains(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        Interval::new(lo, hi).ok()
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> DyadicResult<Interval> {
        if self.is_point() && other.is_point() {
            return Ok(Interval::point(self.lo.checked_mul(&other.lo)?));
        }
        let (al, ah, bl, bh) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let sign = |i: &Interval| {
            if !i.lo.is_negative() {
                1
            } else if !i.hi.is_positive() {
                -1
            } else {
                0
            }
        };
        let (lo, hi) = match (sign(self), sign(other)) {
            (1, 1) => (al.checked_mul(bl)?, ah.checked_mul(bh)?),
            (1, -1) => (ah.checked_mul(bl)?, al.checked_mul(bh)?),
            (1, _) => (ah.checked_mul(bl)?, ah.checked_mul(bh)?),
            (-1, 1) => (al.checked_mul(bh)?, ah.checked_mul(bl)?),
            (-1, -1) => (ah.checked_mul(bh)?, al.checked_mul(bl)?),
            (-1, _) => (al.checked_mul(bh)?, al.checked_mul(bl)?),
            (_, 1) => (al.checked_mul(bh)?, ah.checked_mul(bh)?),
            (_, -1) => (ah.checked_mul(bl)?, al.checked_mul(bl)?),
            _ => (
                al.checked_mul(bh)?.min(ah.checked_mul(bl)?),
                al.checked_mul(bl)?.max(ah.checked_mul(bh)?),
            ),
        };
        Ok(Interval { lo, hi })
    }

    /// `{x^2 : x in self}`, tighter than `self.mul(self)`.
    pub fn sqr(&self) -> DyadicResult<Interval> {
        let a = self.lo.square()?;
        let b = self.hi.square()?;
        if !self.lo.is_negative() {
            Ok(Interval { lo: a, hi: b })
        } else if !self.hi.is_positive() {
            Ok(Interval { lo: b, hi: a })
        } else {
            Ok(Interval {
                lo: Dyadic::zero(),
                hi: a.max(b),
            })
        }
    }

    pub fn scale(&self, k: &Dyadic) -> DyadicResult<Interval> {
        let a = self.lo.checked_mul(k)?;
        let b = self.hi.checked_mul(k)?;
        Ok(Interval::spanning(a, b))
    }

    pub fn mul_pow2(&self, k: i64) -> DyadicResult<Interval> {
        Ok(Interval {
            lo: self.lo.mul_pow2(k)?,
            hi: self.hi.mul_pow2(k)?,
        })
    }

    /// Largest absolute value.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Widens the endpoints to the enclosure grid of precision `prec`.
    pub fn round_out(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round_down(prec),
            hi: self.hi.round_up(prec),
        }
    }

    pub fn inflate(&self, r: &Dyadic) -> Interval {
        Interval {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Axis-aligned rectangle `[re_lo, re_hi] x [im_lo, im_hi]` in the plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re_lo: Dyadic, re_hi: Dyadic, im_lo: Dyadic, im_hi: Dyadic) -> DyadicResult<Self> {
        Ok(ComplexBox {
            re: Interval::new(re_lo, re_hi)?,
            im: Interval::new(im_lo, im_hi)?,
        })
    }

    pub fn from_intervals(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(z: &DyadicComplex) -> Self {
        ComplexBox {
            re: Interval::point(z.re.clone()),
            im: Interval::point(z.im.clone()),
        }
    }

    pub fn zero() -> Self {
        ComplexBox::point(&DyadicComplex::zero())
    }

    pub fn one() -> Self {
        ComplexBox::point(&DyadicComplex::from_i64(1, 0))
    }

    /// Square of half-side `r` centred at `c`.
    pub fn square(c: &DyadicComplex, r: &Dyadic) -> Self {
        ComplexBox {
            re: Interval::around(&c.re, r),
            im: Interval::around(&c.im, r),
        }
    }

    pub fn re_lo(&self) -> &Dyadic {
        self.re.lo()
    }
    pub fn re_hi(&self) -> &Dyadic {
        self.re.hi()
    }
    pub fn im_lo(&self) -> &Dyadic {
        self.im.lo()
    }
    pub fn im_hi(&self) -> &Dyadic {
        self.im.hi()
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn center(&self) -> DyadicComplex {
        DyadicComplex::new(self.re.mid(), self.im.mid())
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Dyadic {
        self.re.width().max(self.im.width())
    }

    /// Squared length of the diagonal, exact.
    pub fn diameter_sq(&self) -> DyadicResult<Dyadic> {
        Ok(&self.re.width().square()? + &self.im.width().square()?)
    }

    /// Upper bound on half the diagonal.
    pub fn half_diagonal_upper(&self, prec: i64) -> DyadicResult<Dyadic> {
        self.diameter_sq()?.mul_pow2(-2)?.sqrt_ceil_at(prec)
    }

    pub fn contains_point(&self, z: &DyadicComplex) -> bool {
        self.re.contains(&z.re) && self.im.contains(&z.im)
    }

    pub fn contains_box(&self, other: &ComplexBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    /// `other` lies in the open interior of `self`.
    pub fn strictly_contains_box(&self, other: &ComplexBox) -> bool {
        self.re.strictly_contains(&other.re) && self.im.strictly_contains(&other.im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersection(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersection(&other.re)?,
            im: self.im.intersection(&other.im)?,
        })
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Complex product via the component-wise interval expansion
    /// `(x1 x2 - y1 y2, x1 y2 + x2 y1)`.
    pub fn mul(&self, other: &ComplexBox) -> DyadicResult<ComplexBox> {
        let re = self.re.mul(&other.re)?.sub(&self.im.mul(&other.im)?);
        let im = self.re.mul(&other.im)?.add(&self.im.mul(&other.re)?);
        Ok(ComplexBox { re, im })
    }

    /// `{z^2 : z in self}` enclosure using `(x^2 - y^2, 2xy)`.
    pub fn sqr(&self) -> DyadicResult<ComplexBox> {
        let re = self.re.sqr()?.sub(&self.im.sqr()?);
        let im = self.re.mul(&self.im)?.mul_pow2(1)?;
        Ok(ComplexBox { re, im })
    }

    pub fn mul_point(&self, z: &DyadicComplex) -> DyadicResult<ComplexBox> {
        self.mul(&ComplexBox::point(z))
    }

    pub fn scale(&self, k: &Dyadic) -> DyadicResult<ComplexBox> {
        Ok(ComplexBox {
            re: self.re.scale(k)?,
            im: self.im.scale(k)?,
        })
    }

    pub fn mul_pow2(&self, k: i64) -> DyadicResult<ComplexBox> {
        Ok(ComplexBox {
            re: self.re.mul_pow2(k)?,
            im: self.im.mul_pow2(k)?,
        })
    }

    pub fn round_out(&self, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.round_out(prec),
            im: self.im.round_out(prec),
        }
    }

    pub fn inflate(&self, r: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.inflate(r),
            im: self.im.inflate(r),
        }
    }

    /// Exact `max |z|^2` over the box.
    pub fn max_modulus_sq(&self) -> DyadicResult<Dyadic> {
        Ok(&self.re.mag().square()? + &self.im.mag().square()?)
    }

    /// Exact `min |z|^2` over the box.
    pub fn min_modulus_sq(&self) -> DyadicResult<Dyadic> {
        Ok(&self.re.mig().square()? + &self.im.mig().square()?)
    }

    /// Upper bound on `max |z|` at resolution `2^-prec`.
    pub fn mag_upper(&self, prec: i64) -> DyadicResult<Dyadic> {
        self.max_modulus_sq()?.sqrt_ceil_at(prec)
    }

    /// Lower bound on `min |z|` at resolution `2^-prec`.
    pub fn mig_lower(&self, prec: i64) -> DyadicResult<Dyadic> {
        self.min_modulus_sq()?.sqrt_floor_at(prec)
    }

    /// Quadrants in the order (SW, SE, NW, NE).
    pub fn split4(&self) -> [ComplexBox; 4] {
        let (rm, im) = (self.re.mid(), self.im.mid());
        let left = Interval::spanning(self.re.lo().clone(), rm.clone());
        let right = Interval::spanning(rm, self.re.hi().clone());
        let low = Interval::spanning(self.im.lo().clone(), im.clone());
        let high = Interval::spanning(im, self.im.hi().clone());
        [
            ComplexBox::from_intervals(left.clone(), low.clone()),
            ComplexBox::from_intervals(right.clone(), low),
            ComplexBox::from_intervals(left, high.clone()),
            ComplexBox::from_intervals(right, high),
        ]
    }

    /// The four corners, counter-clockwise from the lower-left one.
    pub fn corners(&self) -> [DyadicComplex; 4] {
        let (a, b) = (self.re.lo().clone(), self.re.hi().clone());
        let (c, d) = (self.im.lo().clone(), self.im.hi().clone());
        [
            DyadicComplex::new(a.clone(), c.clone()),
            DyadicComplex::new(b.clone(), c),
            DyadicComplex::new(b, d.clone()),
            DyadicComplex::new(a, d),
        ]
    }

    /// Canonical order: by lower-left corner, then upper-right.
    pub fn canonical_cmp(&self, other: &ComplexBox) -> Ordering {
        self.re
            .lo()
            .cmp(other.re.lo())
            .then_with(|| self.im.lo().cmp(other.im.lo()))
            .then_with(|| self.re.hi().cmp(other.re.hi()))
            .then_with(|| self.im.hi().cmp(other.im.hi()))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.re.lo().to_f64(),
            self.re.hi().to_f64(),
            self.im.lo().to_f64(),
            self.im.hi().to_f64(),
        ]
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} x {:?}i", self.re, self.im)
    }
}

/// Upper bound on the Euclidean distance from `z` to the box `a`, exact up to
/// one final rounding at resolution `2^-prec`. Zero exactly when `z` lies in `a`.
pub fn box_point_distance(a: &ComplexBox, z: &DyadicComplex, prec: u32) -> DyadicResult<Dyadic> {
    let gap = |iv: &Interval, x: &Dyadic| -> Dyadic {
        if x < iv.lo() {
            iv.lo() - x
        } else if x > iv.hi() {
            x - iv.hi()
        } else {
            Dyadic::zero()
        }
    };
    let dx = gap(&a.re, &z.re);
    let dy = gap(&a.im, &z.im);
    let d2 = &dx.square()? + &dy.square()?;
    d2.sqrt_ceil_at(prec as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn bx(a: &str, b: &str, c: &str, e: &str) -> ComplexBox {
        ComplexBox::new(d(a), d(b), d(c), d(e)).unwrap()
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(Interval::new(d("1"), d("0")).is_err());
        assert!(ComplexBox::new(d("0"), d("1"), d("2"), d("1")).is_err());
    }

    #[test]
    fn box_mul_examples() {
        let i = ComplexBox::point(&DyadicComplex::from_i64(0, 1));
        assert_eq!(i.mul(&i).unwrap(), ComplexBox::point(&DyadicComplex::from_i64(-1, 0)));

        let unit = bx("0", "1", "0", "1");
        let p = unit.mul(&unit).unwrap();
        assert_eq!(p, bx("-1", "1", "0", "2"));

        let a = bx("-0.5", "3", "1.25", "2");
        assert_eq!(a.mul(&ComplexBox::one()).unwrap(), a);
    }

    #[test]
    fn sqr_is_tighter_than_mul() {
        let a = bx("-1", "1", "-0.5", "2");
        let s = a.sqr().unwrap();
        let m = a.mul(&a).unwrap();
        assert!(m.contains_box(&s));
        assert_eq!(s.re, Interval::new(d("-4"), d("1")).unwrap());
    }

    #[test]
    fn distance_examples() {
        let unit = bx("0", "1", "0", "1");
        let z = DyadicComplex::from_i64(2, 0);
        assert_eq!(box_point_distance(&unit, &z, 20).unwrap(), d("1"));
        let inside = DyadicComplex::new(d("0.5"), d("0.25"));
        assert_eq!(box_point_distance(&unit, &inside, 20).unwrap(), Dyadic::zero());
        let corner = DyadicComplex::from_i64(2, 2);
        let dist = box_point_distance(&unit, &corner, 24).unwrap();
        assert!(dist.square().unwrap() >= d("2"));
        assert!(dist.to_f64() < 1.4142136 + 1e-7);
    }

    #[test]
    fn modulus_bounds() {
        let a = bx("-3", "1", "2", "4");
        assert_eq!(a.max_modulus_sq().unwrap(), d("25"));
        assert_eq!(a.min_modulus_sq().unwrap(), d("4"));
        assert!(!a.contains_zero());
    }

    #[test]
    fn split_covers_parent() {
        let a = bx("-1", "3", "0.5", "1.5");
        let q = a.split4();
        let mut h = q[0].clone();
        for b in &q[1..] {
            h = h.hull(b);
        }
        assert_eq!(h, a);
        assert_eq!(q[3].re_lo(), &d("1"));
    }
}
