//! Classification of periodic points and the census of repelling cycles.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::interval::ComplexBox;
use crate::orbit::{orbit_precision, AffineOrbit};
use crate::outer::escape_radius;
use crate::par::par_map;
use crate::poly::{PolynomialOracle, PreparedPoly};
use crate::roots::{contract, isolate_periodic, krawczyk, FixedPointTarget, RootBox, RootTarget};

/// A disk `B(center, radius)` whose image under `p^period` is certified to
/// lie strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrapDisk {
    pub center: DyadicComplex,
    pub radius: Dyadic,
    pub period: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertKind {
    Repelling,
    Attracting,
}

impl CertKind {
    pub fn label(self) -> &'static str {
        match self {
            CertKind::Repelling => "repelling",
            CertKind::Attracting => "attracting",
        }
    }
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Certificate that a periodic point `alpha` with `|center - alpha| <= radius`
/// exists and is repelling or attracting.
///
/// `derivative_bound` is a lower bound `L > 1` (repelling) or an upper bound
/// `U < 1` (attracting) on `|(p^period)'(alpha)|`; `second_bound` bounds
/// `|(p^period)''|` on the square of half-side `radius` around `center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCertificate {
    pub kind: CertKind,
    pub period: u32,
    pub center: DyadicComplex,
    pub radius: Dyadic,
    pub derivative_bound: Dyadic,
    pub second_bound: Dyadic,
    /// Working precision of the evaluation.
    pub prec: u32,
}

impl OrbitCertificate {
    pub fn square(&self) -> ComplexBox {
        ComplexBox::square(&self.center, &self.radius)
    }

    /// Canonical order: by period, then lexicographically by center.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.period
            .cmp(&other.period)
            .then_with(|| self.center.lex_cmp(&other.center))
            .then_with(|| self.radius.cmp(&other.radius))
    }

    /// Re-checks every claim of the certificate against `p`.
    ///
    /// Uniqueness of the periodic point is re-established with plain interval
    /// iteration; the derivative bounds are recomputed at the stored precision.
    pub fn verify(&self, p: &PolynomialOracle) -> Result<bool> {
        if self.period == 0 || !self.radius.is_positive() {
            return Ok(false);
        }
        let pp = p.prepare(self.prec)?;
        let sq = self.square();
        let plain = PlainFixedPoint { pp: &pp, n: self.period };
        if !encloses_unique_root(&plain, &self.center, &self.radius, &sq)? {
            return Ok(false);
        }
        let b = bounds(&pp, self.period, &self.center, &self.radius, self.prec)?;
        if b.second > self.second_bound {
            return Ok(false);
        }
        let one = Dyadic::one();
        let spread = self.radius.checked_mul(&self.second_bound)?;
        Ok(match self.kind {
            CertKind::Repelling => {
                self.derivative_bound > one && &b.deriv_lower - &spread >= self.derivative_bound
            }
            CertKind::Attracting => {
                self.derivative_bound < one && &b.deriv_upper + &spread <= self.derivative_bound
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnresolvedReason {
    /// The box holds a zero of multiplicity greater than one.
    Multiple(u64),
    /// Neither inequality certified up to this precision.
    Budget { last_prec: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Certified(OrbitCertificate),
    Unresolved(UnresolvedReason),
}

/// `p^n(z) - z` evaluated by plain interval iteration.
struct PlainFixedPoint<'a> {
    pp: &'a PreparedPoly,
    n: u32,
}

impl RootTarget for PlainFixedPoint<'_> {
    fn eval(&self, x: &ComplexBox) -> Result<ComplexBox> {
        let mut z = x.clone();
        for _ in 0..self.n {
            z = self.pp.eval(&z)?;
        }
        Ok(z.sub(x))
    }

    fn deriv(&self, x: &ComplexBox) -> Result<ComplexBox> {
        let prec = self.pp.prec();
        let mut z = x.clone();
        let mut d = ComplexBox::one();
        for _ in 0..self.n {
            d = d.mul(&self.pp.eval_derivative(&z)?)?.round_out(prec);
            z = self.pp.eval(&z)?;
        }
        Ok(d.sub(&ComplexBox::one()))
    }

    fn known_total(&self, _region: &ComplexBox) -> Option<u64> {
        None
    }
}

/// Krawczyk certifies a unique zero in `sq`, and it lies within `radius` of `center`.
fn encloses_unique_root<T: RootTarget>(t: &T, center: &DyadicComplex, radius: &Dyadic, sq: &ComplexBox) -> Result<bool> {
    let Some(k) = krawczyk(t, sq)? else {
        return Ok(false);
    };
    if !sq.strictly_contains_box(&k) {
        return Ok(false);
    }
    let r2 = radius.square()?;
    for c in k.corners() {
        if (&c - center).norm_sq()? > r2 {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Bounds {
    deriv_lower: Dyadic,
    deriv_upper: Dyadic,
    second: Dyadic,
}

/// `|Q'(center)|` and a bound on `|Q''|` over the square, `Q = p^n`.
fn bounds(pp: &PreparedPoly, n: u32, center: &DyadicComplex, radius: &Dyadic, prec: u32) -> Result<Bounds> {
    let res = i64::from(prec);
    let mut z = ComplexBox::point(center);
    let mut d = ComplexBox::one();
    for _ in 0..n {
        d = d.mul(&pp.eval_derivative(&z)?)?.round_out(prec);
        z = pp.eval(&z)?;
    }
    // D' = p'(z) D, S' = p''(z) D^2 + p'(z) S along the enclosed orbit.
    let sq = ComplexBox::square(center, radius);
    let mut orbit = AffineOrbit::new(pp, &sq)?;
    let mut dd = ComplexBox::one();
    let mut s = ComplexBox::zero();
    for _ in 0..n {
        let h = orbit.hull()?;
        let d1 = pp.eval_derivative(&h)?;
        let d2 = pp.eval_second(&h)?;
        s = d2.mul(&dd.sqr()?)?.add(&d1.mul(&s)?).round_out(prec);
        dd = d1.mul(&dd)?.round_out(prec);
        orbit.step()?;
    }
    Ok(Bounds {
        deriv_lower: d.mig_lower(res)?,
        deriv_upper: d.mag_upper(res)?,
        second: s.mag_upper(res)?,
    })
}

/// Maximum number of precision doublings while classifying one point.
pub const CLASSIFY_BUDGET: u32 = 8;

fn start_precision(p: &PolynomialOracle, n: u32, radius: &Dyadic) -> Result<u32> {
    let er = escape_radius(p)?;
    let bits = (-radius.msb()).max(0) as u32 + 16;
    Ok(orbit_precision(p.degree(), &er.b, n, bits))
}

/// Classifies the periodic point isolated by `root` as repelling or attracting.
pub fn classify_periodic(p: &PolynomialOracle, n: u32, root: &RootBox) -> Result<Classification> {
    if n == 0 {
        return Err(Error::Precondition("period must be at least 1".into()));
    }
    if root.count > 1 {
        return Ok(Classification::Unresolved(UnresolvedReason::Multiple(root.count)));
    }
    let mut bx = root.enclosure.clone();
    let mut prec = start_precision(p, n, &bx.width())?;
    for _ in 0..CLASSIFY_BUDGET {
        let t = FixedPointTarget::new(p, n, prec)?;
        let res = i64::from(prec);
        let center = bx.center();
        let radius = bx.half_diagonal_upper(res)?;
        let sq = ComplexBox::square(&center, &radius);
        if encloses_unique_root(&t, &center, &radius, &sq)? {
            let b = bounds(t.prepared(), n, &center, &radius, prec)?;
            let spread = radius.checked_mul(&b.second)?;
            let lower = (&b.deriv_lower - &spread).floor_at(res);
            let upper = (&b.deriv_upper + &spread).ceil_at(res);
            let one = Dyadic::one();
            let kind = if lower > one {
                Some((CertKind::Repelling, lower))
            } else if upper < one {
                Some((CertKind::Attracting, upper))
            } else {
                None
            };
            if let Some((kind, derivative_bound)) = kind {
                return Ok(Classification::Certified(OrbitCertificate {
                    kind,
                    period: n,
                    center,
                    radius,
                    derivative_bound,
                    second_bound: b.second,
                    prec,
                }));
            }
        }
        // Shrink the enclosure sixteenfold and retry at twice the precision.
        let target = bx.width().mul_pow2(-4)?;
        let t = FixedPointTarget::new(p, n, prec * 2)?;
        match contract(&t, bx.clone(), &target) {
            Ok(k) => bx = k,
            Err(Error::PrecisionExhausted(_)) => {
                if let Some(k) = krawczyk(&t, &bx)?.and_then(|k| k.intersection(&bx)) {
                    bx = k;
                }
            }
            Err(e) => return Err(e),
        }
        prec *= 2;
    }
    Ok(Classification::Unresolved(UnresolvedReason::Budget { last_prec: prec / 2 }))
}

/// A periodic point that could not be classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedPoint {
    pub period: u32,
    pub root: RootBox,
    pub reason: UnresolvedReason,
}

/// Certified periodic points of periods `1..=periods_done`, each listed once
/// under its smallest period.
#[derive(Debug, Clone)]
pub struct PeriodicCensus {
    poly: PolynomialOracle,
    eps: Dyadic,
    region: ComplexBox,
    pub periods_done: u32,
    pub repelling: Vec<OrbitCertificate>,
    pub attracting: Vec<OrbitCertificate>,
    pub unresolved: Vec<UnresolvedPoint>,
    /// Total multiplicity isolated at each period.
    pub root_counts: Vec<u64>,
    /// Enclosures of every point seen so far, bucketed by grid cell.
    seen: Vec<(u32, ComplexBox)>,
    buckets: BTreeMap<(i64, i64), Vec<usize>>,
    bucket_shift: i64,
}

impl PeriodicCensus {
    pub fn new(p: &PolynomialOracle, eps: &Dyadic, region: &ComplexBox) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::Precondition("eps must be positive".into()));
        }
        let er = escape_radius(p)?;
        let b = &er.b;
        let disk = ComplexBox::new(-b, b.clone(), -b, b.clone())?;
        if !region.contains_box(&disk) {
            return Err(Error::Precondition("region must contain the escape disk".into()));
        }
        Ok(PeriodicCensus {
            poly: p.clone(),
            eps: eps.clone(),
            region: region.clone(),
            periods_done: 0,
            repelling: Vec::new(),
            attracting: Vec::new(),
            unresolved: Vec::new(),
            root_counts: Vec::new(),
            seen: Vec::new(),
            buckets: BTreeMap::new(),
            // Buckets of side 2^(msb(eps) + 2) exceed every enclosure.
            bucket_shift: -(eps.msb() + 2),
        })
    }

    pub fn poly(&self) -> &PolynomialOracle {
        &self.poly
    }

    pub fn eps(&self) -> &Dyadic {
        &self.eps
    }

    fn bucket_range(&self, bx: &ComplexBox) -> Option<[(i64, i64); 2]> {
        let s = self.bucket_shift;
        Some([
            (bx.re_lo().floor_scaled_i64(s)?, bx.re_hi().floor_scaled_i64(s)?),
            (bx.im_lo().floor_scaled_i64(s)?, bx.im_hi().floor_scaled_i64(s)?),
        ])
    }

    /// Index of an earlier point of period dividing `n` whose enclosure meets `bx`.
    fn duplicate_of(&self, n: u32, bx: &ComplexBox) -> Option<usize> {
        let [(x0, x1), (y0, y1)] = self.bucket_range(bx)?;
        for x in x0..=x1 {
            for y in y0..=y1 {
                for &i in self.buckets.get(&(x, y)).into_iter().flatten() {
                    let (k, ref other) = self.seen[i];
                    if n % k == 0 && other.intersects(bx) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn remember(&mut self, n: u32, bx: ComplexBox) {
        let idx = self.seen.len();
        if let Some([(x0, x1), (y0, y1)]) = self.bucket_range(&bx) {
            for x in x0..=x1 {
                for y in y0..=y1 {
                    self.buckets.entry((x, y)).or_default().push(idx);
                }
            }
        }
        self.seen.push((n, bx));
    }

    /// Isolates and classifies the periodic points of period `n = periods_done + 1`.
    pub fn extend_once(&mut self) -> Result<()> {
        let n = self.periods_done + 1;
        let roots = isolate_periodic(&self.poly, n, &self.region, &self.eps)?;
        self.root_counts.push(roots.iter().map(|r| r.count).sum());
        let fresh: Vec<RootBox> = roots
            .into_iter()
            .filter(|r| self.duplicate_of(n, &r.enclosure).is_none())
            .collect();
        let poly = &self.poly;
        let verdicts = par_map(&fresh, |r| classify_periodic(poly, n, r));
        for (root, v) in fresh.into_iter().zip(verdicts) {
            match v? {
                Classification::Certified(cert) => {
                    self.remember(n, cert.square().hull(&root.enclosure));
                    match cert.kind {
                        CertKind::Repelling => self.repelling.push(cert),
                        CertKind::Attracting => self.attracting.push(cert),
                    }
                }
                Classification::Unresolved(reason) => {
                    self.remember(n, root.enclosure.clone());
                    self.unresolved.push(UnresolvedPoint { period: n, root, reason });
                }
            }
        }
        self.repelling.sort_by(|a, b| a.canonical_cmp(b));
        self.attracting.sort_by(|a, b| a.canonical_cmp(b));
        self.periods_done = n;
        Ok(())
    }

    pub fn extend_to(&mut self, max_period: u32) -> Result<()> {
        while self.periods_done < max_period {
            self.extend_once()?;
        }
        Ok(())
    }

    /// Repelling certificates whose period divides `n`.
    pub fn repelling_dividing(&self, n: u32) -> impl Iterator<Item = &OrbitCertificate> {
        self.repelling.iter().filter(move |c| n % c.period == 0)
    }
}

/// Certifies the repelling periodic points of periods `1..=max_period`.
pub fn enumerate_repelling(p: &PolynomialOracle, max_period: u32, eps: &Dyadic, region: &ComplexBox) -> Result<PeriodicCensus> {
    if max_period == 0 {
        return Err(Error::Precondition("max_period must be at least 1".into()));
    }
    let mut census = PeriodicCensus::new(p, eps, region)?;
    census.extend_to(max_period)?;
    Ok(census)
}

/// Largest grid used to cover a candidate trap disk.
const TRAP_GRID_LOG: u32 = 6;
/// Smallest candidate radius is `2^-TRAP_RADIUS_STEPS`.
const TRAP_RADIUS_STEPS: i64 = 40;

fn trap_holds(pp: &PreparedPoly, m: u32, center: &DyadicComplex, radius: &Dyadic, grid_log: u32) -> Result<bool> {
    let g = 1i64 << grid_log;
    let side = radius.mul_pow2(1 - i64::from(grid_log))?;
    let r2 = radius.square()?;
    let origin = DyadicComplex::new(&center.re - radius, &center.im - radius);
    let mut cells = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let lo_re = &origin.re + &side.checked_mul(&Dyadic::from_i64(i))?;
            let lo_im = &origin.im + &side.checked_mul(&Dyadic::from_i64(j))?;
            let cell = ComplexBox::new(lo_re.clone(), &lo_re + &side, lo_im.clone(), &lo_im + &side)?;
            // Only cells meeting the closed disk matter.
            let near = DyadicComplex::new(
                clamp(&center.re, cell.re_lo(), cell.re_hi()),
                clamp(&center.im, cell.im_lo(), cell.im_hi()),
            );
            if (&near - center).norm_sq()? <= r2 {
                cells.push(cell);
            }
        }
    }
    let ok = par_map(&cells, |cell| -> Result<bool> {
        let mut orbit = AffineOrbit::new(pp, cell)?;
        for _ in 0..m {
            orbit.step()?;
        }
        Ok(orbit.inside_disk(center, radius, true)?)
    });
    for v in ok {
        if !v? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn clamp(x: &Dyadic, lo: &Dyadic, hi: &Dyadic) -> Dyadic {
    x.clone().max(lo.clone()).min(hi.clone())
}

/// Finds a dyadic disk around an attracting periodic point that `p^period`
/// maps strictly into itself.
pub fn find_trap_disk(p: &PolynomialOracle, cert: &OrbitCertificate) -> Result<TrapDisk> {
    if cert.kind != CertKind::Attracting {
        return Err(Error::Precondition("trap disks need an attracting certificate".into()));
    }
    let m = cert.period;
    let pp = p.prepare(cert.prec)?;
    for j in 0..=TRAP_RADIUS_STEPS {
        let radius = Dyadic::pow2(-j)?;
        if radius <= cert.radius.mul_pow2(1)? {
            break;
        }
        for grid_log in 0..=TRAP_GRID_LOG {
            if trap_holds(&pp, m, &cert.center, &radius, grid_log)? {
                return Ok(TrapDisk {
                    center: cert.center.clone(),
                    radius,
                    period: m,
                });
            }
        }
    }
    Err(Error::Resource("no trap disk found within budget".into()))
}

impl TrapDisk {
    /// Re-checks the trap property on a `2^grid_log`-square grid.
    pub fn verify(&self, p: &PolynomialOracle, prec: u32, grid_log: u32) -> Result<bool> {
        let pp = p.prepare(prec)?;
        trap_holds(&pp, self.period, &self.center, &self.radius, grid_log)
    }
}
