//! Orbit enclosures over boxes.
//!
//! [`iterate_enclosure`] is the plain interval iteration: Horner evaluation of
//! the whole box at every step. It is inclusion-monotone, which makes it the
//! reference for soundness tests.
//!
//! [`AffineOrbit`] is the workhorse of the subdivision engines. It keeps the
//! image of a box `X` with center `c0` in the form
//!
//! ```text
//! p^j(z) in C + J (z - c0) + E      for every z in X,
//! ```
//!
//! where `C`, `J`, `E` are thin boxes. One step expands `p` in a Taylor series
//! at the exact center of `C`; the linear part is carried in `J` and only the
//! nonlinear remainder is wrapped into `E`.

use alloc::vec::Vec;

use crate::dyadic::{Dyadic, DyadicComplex, DyadicResult};
use crate::error::{Error, Result};
use crate::interval::ComplexBox;
use crate::outer::escape_radius;
use crate::poly::{PolynomialOracle, PreparedPoly};

/// Result of iterating a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IterateOutcome {
    /// Encloses `p^k(z)` for every `z` in the box.
    Enclosure(ComplexBox),
    /// The whole enclosure of `p^j` lies outside the closed escape disk, `j`
    /// the first such index (`0` when the input box is already outside).
    Escaped(u32),
}

/// Encloses `p^k` over `x`, or certifies escape, using the escape radius of `p`.
pub fn iterate_enclosure(p: &PolynomialOracle, x: &ComplexBox, k: u32, prec: u32) -> Result<IterateOutcome> {
    if k == 0 {
        return Err(Error::Precondition("iterate count must be at least 1".into()));
    }
    let er = escape_radius(p)?;
    let pp = p.prepare(prec)?;
    iterate_prepared(&pp, &er.b, x, k)
}

/// [`iterate_enclosure`] with a prepared polynomial and an explicit radius `b`
/// (which must carry the growth property).
pub fn iterate_prepared(pp: &PreparedPoly, b: &Dyadic, x: &ComplexBox, k: u32) -> Result<IterateOutcome> {
    let b_sq = b.square()?;
    let mut cur = x.clone();
    for j in 0..=k {
        if cur.min_modulus_sq()? > b_sq {
            return Ok(IterateOutcome::Escaped(j));
        }
        if j == k {
            break;
        }
        cur = pp.eval(&cur)?;
    }
    Ok(IterateOutcome::Enclosure(cur))
}

/// `|z|^2` for an exact point.
fn norm_sq(z: &DyadicComplex) -> DyadicResult<Dyadic> {
    z.norm_sq()
}

/// `Im(conj(a) * b)`, the cross product of two plane vectors.
fn cross(a: &DyadicComplex, b: &DyadicComplex) -> DyadicResult<Dyadic> {
    Ok(&a.re.checked_mul(&b.im)? - &a.im.checked_mul(&b.re)?)
}

/// `Re(conj(a) * b)`.
fn dot(a: &DyadicComplex, b: &DyadicComplex) -> DyadicResult<Dyadic> {
    Ok(&a.re.checked_mul(&b.re)? + &a.im.checked_mul(&b.im)?)
}

/// Whether the squared distance from the origin to segment `[a, b]` exceeds `t`.
fn segment_far(a: &DyadicComplex, b: &DyadicComplex, t: &Dyadic) -> DyadicResult<bool> {
    let ab = b - a;
    let len_sq = norm_sq(&ab)?;
    // Foot of the perpendicular from 0 lies inside the segment iff
    // 0 <= <-a, ab> <= |ab|^2.
    let proj = -dot(a, &ab)?;
    if len_sq.is_zero() || proj.is_negative() || proj > len_sq {
        return Ok(norm_sq(a)? > *t && norm_sq(b)? > *t);
    }
    let c = cross(a, &ab)?;
    Ok(c.square()? > t.checked_mul(&len_sq)?)
}

/// Affine-form enclosure of the orbit of a box.
#[derive(Debug, Clone)]
pub struct AffineOrbit<'a> {
    pp: &'a PreparedPoly,
    /// Half-widths of `U = X - c0`.
    u: ComplexBox,
    u_rad: Dyadic,
    c: ComplexBox,
    j: ComplexBox,
    e: ComplexBox,
    steps: u32,
}

impl<'a> AffineOrbit<'a> {
    pub fn new(pp: &'a PreparedPoly, x: &ComplexBox) -> DyadicResult<Self> {
        let c0 = x.center();
        let u = x.sub(&ComplexBox::point(&c0));
        let u_rad = u.half_diagonal_upper(pp.prec() as i64)?;
        Ok(AffineOrbit {
            pp,
            u,
            u_rad,
            c: ComplexBox::point(&c0),
            j: ComplexBox::one(),
            e: ComplexBox::zero(),
            steps: 0,
        })
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// The derivative box `J`; encloses `(p^j)'` only in the sense of the
    /// affine representation, not pointwise.
    pub fn linear_part(&self) -> &ComplexBox {
        &self.j
    }

    pub fn step(&mut self) -> DyadicResult<()> {
        let prec = self.pp.prec();
        let cs = self.c.center();
        let t = self.pp.taylor_at(&cs)?;
        let delta = self.c.sub(&ComplexBox::point(&cs));
        let w = self.j.mul(&self.u)?.add(&self.e).add(&delta).round_out(prec);
        let mut rest = ComplexBox::zero();
        if t.len() > 2 {
            let mut acc = t[t.len() - 1].clone();
            for ti in t[2..t.len() - 1].iter().rev() {
                acc = acc.mul(&w)?.add(ti).round_out(prec);
            }
            rest = acc.mul(&w.sqr()?)?;
        }
        let t1 = t.get(1).cloned().unwrap_or_else(ComplexBox::zero);
        self.e = t1.mul(&self.e.add(&delta))?.add(&rest).round_out(prec);
        self.j = t1.mul(&self.j)?.round_out(prec);
        self.c = t[0].round_out(prec);
        self.steps += 1;
        Ok(())
    }

    /// Bounding box of the current enclosure.
    pub fn hull(&self) -> DyadicResult<ComplexBox> {
        Ok(self.c.add(&self.j.mul(&self.u)?).add(&self.e))
    }

    /// Bounding box of `C - c0 + (J - 1) U + E`, which encloses `p^j(z) - z`.
    pub fn displacement_hull(&self, c0: &DyadicComplex) -> DyadicResult<ComplexBox> {
        let jm1 = self.j.sub(&ComplexBox::one());
        Ok(self.c.sub(&ComplexBox::point(c0)).add(&jm1.mul(&self.u)?).add(&self.e))
    }

    /// Upper bound on the distance from the exact affine part to the enclosure.
    fn slack(&self) -> DyadicResult<Dyadic> {
        let prec = self.pp.prec() as i64;
        let rc = self.c.half_diagonal_upper(prec)?;
        let rj = self.j.half_diagonal_upper(prec)?;
        let re = self.e.mag_upper(prec)?;
        Ok(&(&rc + &rj.checked_mul(&self.u_rad)?) + &re)
    }

    /// Images of the corners of `U` under the exact affine part, shifted by `-q`.
    fn corner_images(&self, q: &DyadicComplex) -> DyadicResult<(DyadicComplex, DyadicComplex, Vec<DyadicComplex>)> {
        let a = &self.c.center() - q;
        let js = self.j.center();
        let mut out = Vec::with_capacity(4);
        for corner in self.u.corners() {
            out.push(&a + &js.checked_mul(&corner)?);
        }
        Ok((a, js, out))
    }

    /// Certifies `|z - q| <= r` (or `< r` when `strict`) on the whole enclosure.
    pub fn inside_disk(&self, q: &DyadicComplex, r: &Dyadic, strict: bool) -> DyadicResult<bool> {
        let slack = self.slack()?;
        let room = r - &slack;
        if room.is_negative() || (strict && room.is_zero()) {
            return Ok(false);
        }
        let room_sq = room.square()?;
        let (_, _, corners) = self.corner_images(q)?;
        for z in &corners {
            let n = norm_sq(z)?;
            if n > room_sq || (strict && n == room_sq) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Certifies `|z - q| > r` on the whole enclosure.
    pub fn outside_disk(&self, q: &DyadicComplex, r: &Dyadic) -> DyadicResult<bool> {
        let slack = self.slack()?;
        let t = (r + &slack).square()?;
        let (a, js, corners) = self.corner_images(q)?;
        // The exact affine image of U is a parallelogram; it must not contain 0.
        if js.is_zero() {
            if a.is_zero() {
                return Ok(false);
            }
        } else {
            // 0 = a + js u  iff  u = -a conj(js) / |js|^2.
            let n = norm_sq(&js)?;
            let conj = DyadicComplex::new(js.re.clone(), -&js.im);
            let v = (-&a).checked_mul(&conj)?;
            let rx = self.u.re.hi().checked_mul(&n)?;
            let ry = self.u.im.hi().checked_mul(&n)?;
            if v.re.abs() <= rx && v.im.abs() <= ry {
                return Ok(false);
            }
        }
        for i in 0..4 {
            if !segment_far(&corners[i], &corners[(i + 1) % 4], &t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rough size of the nonlinear remainder relative to the linear part;
    /// infinite when the linear part vanishes.
    pub fn nonlinearity(&self) -> f64 {
        let e = self.e.mag_upper(32).map(|d| d.to_f64()).unwrap_or(f64::INFINITY);
        let j = self.j.center();
        let (jr, ji) = j.to_f64();
        let lin = libm::sqrt(jr * jr + ji * ji) * self.u_rad.to_f64();
        if lin > 0.0 {
            e / lin
        } else {
            f64::INFINITY
        }
    }

    /// Diameter of the bounding box exceeds `limit`.
    pub fn wider_than(&self, limit: &Dyadic) -> DyadicResult<bool> {
        let h = self.hull()?;
        Ok(h.diameter_sq()? > limit.square()?)
    }
}

/// Working precision for iterating `k` steps of a degree-`d` map inside the
/// disk of radius `b` while keeping rounding below `2^-tol_bits`.
pub fn orbit_precision(degree: usize, b: &Dyadic, k: u32, tol_bits: u32) -> u32 {
    // |p'| <= d b^(d-1) (1 + small) on the escape disk.
    let lip = libm::log2(degree as f64) + (degree as f64 - 1.0) * libm::log2(b.to_f64().max(1.0)) + 0.5;
    let growth = libm::ceil(k as f64 * lip) as u32;
    (tol_bits + 24 + growth).max(64)
}

/// The orbit of a box through `k` steps, for callers that only need the
/// final bounding box of the affine form.
pub fn affine_hull_after(pp: &PreparedPoly, x: &ComplexBox, k: u32) -> DyadicResult<ComplexBox> {
    let mut orbit = AffineOrbit::new(pp, x)?;
    for _ in 0..k {
        orbit.step()?;
    }
    orbit.hull()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn pt(re: i64, im: i64) -> ComplexBox {
        ComplexBox::point(&DyadicComplex::from_i64(re, im))
    }

    #[test]
    fn iterate_examples() {
        let sq = PolynomialOracle::from_i64(&[0, 0, 1]).unwrap();
        // 2 -> 4 with b = 2 is already outside after one step.
        assert_eq!(iterate_enclosure(&sq, &pt(2, 0), 3, 40).unwrap(), IterateOutcome::Escaped(1));
        assert_eq!(iterate_enclosure(&sq, &pt(3, 0), 3, 40).unwrap(), IterateOutcome::Escaped(0));
        let p = PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(
            iterate_enclosure(&p, &pt(0, 0), 2, 40).unwrap(),
            IterateOutcome::Enclosure(pt(2, 0))
        );
        // With a large explicit radius the orbit 2 -> 4 -> 16 -> 256 stays enclosed.
        let pp = sq.prepare(40).unwrap();
        assert_eq!(
            iterate_prepared(&pp, &d("1000"), &pt(2, 0), 3).unwrap(),
            IterateOutcome::Enclosure(pt(256, 0))
        );
    }

    #[test]
    fn affine_form_contains_sampled_orbits() {
        let p = PolynomialOracle::from_i64(&[0, -3, 0, 1]).unwrap();
        let pp = p.prepare(80).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let x0 = Dyadic::from_parts(rng.gen_range(-2000i64..2000), -10).unwrap();
            let y0 = Dyadic::from_parts(rng.gen_range(-200i64..200), -10).unwrap();
            let w = Dyadic::pow2(-rng.gen_range(6..12)).unwrap();
            let bx = ComplexBox::new(x0.clone(), &x0 + &w, y0.clone(), &y0 + &w).unwrap();
            let mut orbit = AffineOrbit::new(&pp, &bx).unwrap();
            let mut pts: Vec<DyadicComplex> = bx.corners().to_vec();
            pts.push(bx.center());
            for _ in 0..4 {
                orbit.step().unwrap();
                for z in pts.iter_mut() {
                    let z2 = z.checked_mul(z).unwrap();
                    let z3 = z2.checked_mul(z).unwrap();
                    *z = &z3 - &z.scale(&d("3")).unwrap();
                }
                let h = orbit.hull().unwrap();
                for z in &pts {
                    assert!(h.contains_point(z));
                }
            }
        }
    }

    #[test]
    fn disk_tests() {
        let sq = PolynomialOracle::from_i64(&[0, 0, 1]).unwrap();
        let pp = sq.prepare(60).unwrap();
        let small = ComplexBox::new(d("-0.25"), d("0.25"), d("-0.25"), d("0.25")).unwrap();
        let mut o = AffineOrbit::new(&pp, &small).unwrap();
        o.step().unwrap();
        // z^2 over |z| <= sqrt(2)/4 stays within 1/8; the enclosure within 1/4.
        assert!(o.inside_disk(&DyadicComplex::zero(), &d("0.25"), false).unwrap());
        assert!(!o.outside_disk(&DyadicComplex::zero(), &d("0.015625")).unwrap());
        let far = ComplexBox::new(d("1.5"), d("1.75"), d("-0.125"), d("0.125")).unwrap();
        let mut o = AffineOrbit::new(&pp, &far).unwrap();
        o.step().unwrap();
        assert!(o.outside_disk(&DyadicComplex::zero(), &d("2")).unwrap());
        assert!(!o.inside_disk(&DyadicComplex::zero(), &d("2"), false).unwrap());
    }
}
