//! Floating-point search for approximate periodic points.
//!
//! Nothing here is rigorous. The candidates only seed the certified
//! isolation, which accepts them when the certified count is complete.

use alloc::vec::Vec;

use num_complex::Complex64 as C;

use crate::interval::ComplexBox;
use crate::poly::PreparedPoly;

pub(crate) struct FloatMap {
    coeffs: Vec<C>,
}

impl FloatMap {
    pub(crate) fn new(pp: &PreparedPoly) -> Self {
        let coeffs = pp
            .coefficients()
            .iter()
            .map(|b| {
                let (re, im) = b.center().to_f64();
                C::new(re, im)
            })
            .collect();
        FloatMap { coeffs }
    }

    fn eval_d(&self, z: C) -> (C, C) {
        let mut v = C::new(0.0, 0.0);
        let mut d = C::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    }

    fn taylor(&self, c: C) -> Vec<C> {
        let mut b = self.coeffs.clone();
        let d = b.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                b[j] = b[j] + b[j + 1] * c;
            }
        }
        b
    }

    /// `(p^n(z) - z, (p^n)'(z) - 1)`.
    fn fixed_point_residual(&self, n: u32, z: C) -> (C, C) {
        let mut w = z;
        let mut d = C::new(1.0, 0.0);
        for _ in 0..n {
            let (v, dv) = self.eval_d(w);
            d *= dv;
            w = v;
        }
        (w - z, d - 1.0)
    }
}

enum Verdict {
    NoRoot,
    Split,
    Newton,
}

fn screen(map: &FloatMap, n: u32, b: f64, c0: C, u: f64) -> Verdict {
    let (mut c, mut j, mut e) = (c0, C::new(1.0, 0.0), 0.0f64);
    for step in 0..=n {
        let r = j.norm() * u + e;
        if !r.is_finite() {
            return Verdict::Split;
        }
        if c.norm() - r > b {
            return Verdict::NoRoot;
        }
        if step == n {
            break;
        }
        if r > 4.0 * b {
            return Verdict::Split;
        }
        let t = map.taylor(c);
        let mut rest = 0.0;
        let mut rp = r * r;
        for ti in &t[2..] {
            rest += ti.norm() * rp;
            rp *= r;
        }
        e = t[1].norm() * e + rest;
        j *= t[1];
        c = t[0];
    }
    let slack = (j - 1.0).norm() * u + e;
    if (c - c0).norm() > 1.01 * slack + 1e-300 {
        return Verdict::NoRoot;
    }
    if e > 0.1 * j.norm() * u {
        Verdict::Split
    } else {
        Verdict::Newton
    }
}

fn newton(map: &FloatMap, n: u32, z0: C) -> Option<C> {
    let mut z = z0;
    let mut prev = f64::INFINITY;
    for _ in 0..80 {
        let (f, df) = map.fixed_point_residual(n, z);
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        let s = step.norm();
        let scale = 1.0 + z.norm();
        // Converged, or stalled at the rounding noise floor.
        if s <= 1e-14 * scale || (s >= prev / 2.0 && s <= 1e-7 * scale) {
            return Some(z);
        }
        prev = s;
    }
    None
}

/// Approximate solutions of `p^n(z) = z` in `region`, one per quadtree cell
/// on which `p^n(z) - z` looks linear.
pub(crate) fn candidates(pp: &PreparedPoly, n: u32, b: f64, region: &ComplexBox, min_half: f64) -> Vec<C> {
    let map = FloatMap::new(pp);
    let [x0, x1, y0, y1] = region.to_f64();
    let mut frontier = Vec::from([(C::new((x0 + x1) / 2.0, (y0 + y1) / 2.0), (x1 - x0) / 2.0, (y1 - y0) / 2.0)]);
    let mut found = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (c, hx, hy) in frontier {
            let u = libm::hypot(hx, hy);
            let split = match screen(&map, n, b, c, u) {
                Verdict::NoRoot => false,
                Verdict::Newton => match newton(&map, n, c) {
                    Some(z) if (z - c).norm() <= u => {
                        found.push(z);
                        false
                    }
                    _ => true,
                },
                Verdict::Split => true,
            };
            if split {
                {
                    if hx.max(hy) <= min_half {
                        continue;
                    }
                    let (qx, qy) = (hx / 2.0, hy / 2.0);
                    for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                        next.push((c + C::new(sx * qx, sy * qy), qx, qy));
                    }
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<C> = Vec::with_capacity(found.len());
    for z in found {
        let tol = 1e-10 * (1.0 + z.norm());
        let dup = out.iter().rev().take_while(|w| z.re - w.re <= tol).any(|w| (z - w).norm() <= tol);
        if !dup {
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::poly::PolynomialOracle;
    use core::f64::consts::PI;

    #[test]
    fn finds_every_chebyshev_periodic_point() {
        // Solutions of T_{2^n}(x) = x are 2 cos(2 pi j / (2^n -+ 1)).
        let p = PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap();
        let pp = p.prepare(96).unwrap();
        let r = Dyadic::from_i64(8);
        let region = ComplexBox::new(-&r, r.clone(), -&r, r.clone()).unwrap();
        let n = 10u32;
        let found = candidates(&pp, n, 4.0, &region, 4e-12);
        let mut exact = Vec::new();
        for m in [1023.0f64, 1025.0] {
            for j in 0..=512 {
                exact.push(2.0 * libm::cos(2.0 * PI * j as f64 / m));
            }
        }
        exact.sort_by(|a, b| a.total_cmp(b));
        exact.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(exact.len(), 1024);
        assert_eq!(found.len(), 1024);
        for x in exact {
            assert!(found.iter().any(|z| (z.re - x).abs() < 1e-9 && z.im.abs() < 1e-9), "missing {x}");
        }
    }
}
