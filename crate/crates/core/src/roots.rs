//! Certified isolation of the zeros of `f = q` or `f = p^n(z) - z`.
//!
//! A quadtree over the search region discards boxes on which `f` provably has
//! no zero and runs the Krawczyk test on every surviving box, inflated by half
//! its width so that zeros lying on subdivision lines are still caught. A
//! Krawczyk image strictly inside the inflated box proves a unique simple zero
//! there; iterating the operator contracts it to the requested size.
//!
//! Boxes that reach the minimum size unresolved are merged into clusters whose
//! zero count comes from the winding number of `f` along the cluster
//! boundary. Every run finishes with a conservation check: certified zeros
//! plus cluster counts must equal the total number of zeros in the region.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::interval::{ComplexBox, Interval};
use crate::orbit::{orbit_precision, AffineOrbit};
use crate::outer::escape_radius;
use crate::par::par_map;
use crate::poly::{PolynomialOracle, PreparedPoly};

/// Boxes of diameter at most `eps` each holding `count` zeros (with multiplicity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBox {
    pub enclosure: ComplexBox,
    pub count: u64,
}

/// Quick verdict on a box.
#[derive(Debug, Clone)]
pub enum Screen {
    NoRoot,
    /// Possibly a zero; carries `f(X)` when it was cheap enough to compute.
    Maybe(Option<ComplexBox>),
    /// Possibly a zero, but `f` is too far from linear on the box for a
    /// Newton-type test to succeed.
    Coarse,
}

/// A function whose zeros are isolated.
pub trait RootTarget: Sync {
    /// Encloses `f` over `x`.
    fn eval(&self, x: &ComplexBox) -> Result<ComplexBox>;
    /// Encloses `f'` over `x`.
    fn deriv(&self, x: &ComplexBox) -> Result<ComplexBox>;
    /// Total zero count in `region` when known a priori.
    fn known_total(&self, region: &ComplexBox) -> Option<u64>;

    fn screen(&self, x: &ComplexBox) -> Result<Screen> {
        let f = self.eval(x)?;
        if f.contains_zero() {
            Ok(Screen::Maybe(Some(f)))
        } else {
            Ok(Screen::NoRoot)
        }
    }
}

/// `f = q` for a polynomial oracle.
pub struct PolyTarget {
    pp: PreparedPoly,
    cauchy: Dyadic,
}

impl PolyTarget {
    pub fn new(q: &PolynomialOracle, prec: u32) -> Result<Self> {
        let pp = q.prepare(prec)?;
        let lead = q.leading_lower_bound()?;
        let boxes = q.coefficient_boxes(32)?;
        let mut top = Dyadic::zero();
        for c in &boxes[..boxes.len() - 1] {
            top = top.max(c.mag_upper(32)?);
        }
        // Every zero satisfies |z| < 1 + max_{i<d} |a_i| / |a_d|.
        let cauchy = &Dyadic::one() + &top.div_ceil_at(&lead, 16)?;
        Ok(PolyTarget { pp, cauchy })
    }
}

impl RootTarget for PolyTarget {
    fn eval(&self, x: &ComplexBox) -> Result<ComplexBox> {
        Ok(self.pp.eval(x)?)
    }

    fn deriv(&self, x: &ComplexBox) -> Result<ComplexBox> {
        Ok(self.pp.eval_derivative(x)?)
    }

    fn known_total(&self, region: &ComplexBox) -> Option<u64> {
        let c = &self.cauchy;
        let sq = ComplexBox::new(-c, c.clone(), -c, c.clone()).ok()?;
        region.contains_box(&sq).then_some(self.pp.degree() as u64)
    }
}

/// `f = p^n(z) - z`, evaluated by iterating `p` in affine form; boxes whose
/// orbit leaves the escape disk hold no periodic point.
pub struct FixedPointTarget {
    pp: PreparedPoly,
    n: u32,
    b: Dyadic,
    wrap_limit: Dyadic,
    degree: usize,
}

impl FixedPointTarget {
    pub fn new(p: &PolynomialOracle, n: u32, prec: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("period must be at least 1".into()));
        }
        let er = escape_radius(p)?;
        Ok(FixedPointTarget {
            pp: p.prepare(prec)?,
            n,
            wrap_limit: er.b.mul_pow2(2)?,
            b: er.b,
            degree: p.degree(),
        })
    }

    pub fn escape(&self) -> &Dyadic {
        &self.b
    }

    pub fn prepared(&self) -> &PreparedPoly {
        &self.pp
    }

    /// Encloses `(p^n)'` over `x` by the chain rule along enclosed orbits.
    pub fn iterate_derivative(&self, x: &ComplexBox) -> Result<ComplexBox> {
        let prec = self.pp.prec();
        let mut orbit = AffineOrbit::new(&self.pp, x)?;
        let mut d = ComplexBox::one();
        for _ in 0..self.n {
            let z = orbit.hull()?;
            d = d.mul(&self.pp.eval_derivative(&z)?)?.round_out(prec);
            orbit.step()?;
        }
        Ok(d)
    }
}

impl RootTarget for FixedPointTarget {
    fn eval(&self, x: &ComplexBox) -> Result<ComplexBox> {
        let mut orbit = AffineOrbit::new(&self.pp, x)?;
        for _ in 0..self.n {
            orbit.step()?;
        }
        Ok(orbit.displacement_hull(&x.center())?)
    }

    fn deriv(&self, x: &ComplexBox) -> Result<ComplexBox> {
        Ok(self.iterate_derivative(x)?.sub(&ComplexBox::one()))
    }

    fn known_total(&self, region: &ComplexBox) -> Option<u64> {
        // All periodic points lie in the open escape disk.
        let b = &self.b;
        let sq = ComplexBox::new(-b, b.clone(), -b, b.clone()).ok()?;
        if !region.contains_box(&sq) {
            return None;
        }
        (self.degree as u64).checked_pow(self.n)
    }

    fn screen(&self, x: &ComplexBox) -> Result<Screen> {
        let origin = DyadicComplex::zero();
        let mut orbit = AffineOrbit::new(&self.pp, x)?;
        for j in 0..=self.n {
            if orbit.outside_disk(&origin, &self.b)? {
                return Ok(Screen::NoRoot);
            }
            if j == self.n {
                break;
            }
            if orbit.wider_than(&self.wrap_limit)? {
                return Ok(Screen::Maybe(None));
            }
            orbit.step()?;
        }
        let f = orbit.displacement_hull(&x.center())?;
        if !f.contains_zero() {
            Ok(Screen::NoRoot)
        } else if orbit.nonlinearity() > NEWTON_NONLINEARITY {
            Ok(Screen::Coarse)
        } else {
            Ok(Screen::Maybe(Some(f)))
        }
    }
}

/// Above this remainder-to-linear ratio the Krawczyk test is not attempted.
const NEWTON_NONLINEARITY: f64 = 0.25;

/// A point approximation of `1 / m`, or `None` for `m = 0`.
fn approx_inverse(m: &DyadicComplex) -> Option<DyadicComplex> {
    if m.is_zero() {
        return None;
    }
    let n2 = m.norm_sq().ok()?;
    let top = m.re.abs().max(m.im.abs()).msb();
    let res = 60 + top;
    let re = m.re.div_floor_at(&n2, res).ok()?;
    let im = (-&m.im).div_floor_at(&n2, res).ok()?;
    Some(DyadicComplex::new(re, im))
}

/// Krawczyk image `c - Y f(c) + (1 - Y f'(X)) (X - c)`; every zero of `f` in
/// `x` lies in it.
pub fn krawczyk<T: RootTarget + ?Sized>(t: &T, x: &ComplexBox) -> Result<Option<ComplexBox>> {
    let c = x.center();
    let cb = ComplexBox::point(&c);
    let fc = t.eval(&cb)?;
    let dfx = t.deriv(x)?;
    let Some(y) = approx_inverse(&t.deriv(&cb)?.center()) else {
        return Ok(None);
    };
    let yb = ComplexBox::point(&y);
    let lin = ComplexBox::one().sub(&yb.mul(&dfx)?);
    let k = cb.sub(&yb.mul(&fc)?).add(&lin.mul(&x.sub(&cb))?);
    Ok(Some(k))
}

/// `x` grown by a quarter of its width on every side.
fn inflate_half(x: &ComplexBox) -> Result<ComplexBox> {
    Ok(x.inflate(&x.width().mul_pow2(-2)?))
}

#[derive(Debug, Clone)]
struct Certified {
    k: ComplexBox,
    /// Box in which the zero is unique.
    unique_in: ComplexBox,
}

enum Outcome {
    Discard,
    Certified(Certified),
    Split,
    Unresolved,
}

fn process<T: RootTarget>(t: &T, x: &ComplexBox, min_size: &Dyadic) -> Result<Outcome> {
    let small = x.width() <= *min_size;
    let fallback = if small { Outcome::Unresolved } else { Outcome::Split };
    match t.screen(x)? {
        Screen::NoRoot => Ok(Outcome::Discard),
        Screen::Maybe(None) | Screen::Coarse => Ok(fallback),
        Screen::Maybe(Some(_)) => {
            let xp = inflate_half(x)?;
            match krawczyk(t, &xp)? {
                Some(k) if xp.strictly_contains_box(&k) => Ok(Outcome::Certified(Certified { k, unique_in: xp })),
                Some(k) if !k.intersects(&xp) => Ok(Outcome::Discard),
                _ => Ok(fallback),
            }
        }
    }
}

/// A smaller certified enclosure inside `k`, which must hold a unique zero:
/// tries a box around the Newton point, then overlapping quarters.
fn shrink<T: RootTarget>(t: &T, k: &ComplexBox) -> Result<Option<ComplexBox>> {
    let c = k.center();
    let mut candidates = Vec::new();
    if let Some(y) = approx_inverse(&t.deriv(&ComplexBox::point(&c))?.center()) {
        let fc = t.eval(&ComplexBox::point(&c))?.center();
        let newton = &c - &y.checked_mul(&fc)?;
        candidates.push(ComplexBox::point(&newton).inflate(&k.width().mul_pow2(-2)?));
    }
    for q in k.split4() {
        candidates.push(inflate_half(&q)?);
    }
    for b in candidates {
        let Some(b) = b.intersection(k) else {
            continue;
        };
        if let Some(kb) = krawczyk(t, &b)? {
            if b.strictly_contains_box(&kb) {
                return Ok(Some(kb));
            }
        }
    }
    Ok(None)
}

/// Iterates the Krawczyk operator until the enclosure is at most `target` wide.
pub(crate) fn contract<T: RootTarget>(t: &T, mut k: ComplexBox, target: &Dyadic) -> Result<ComplexBox> {
    for _ in 0..200 {
        if k.width() <= *target {
            return Ok(k);
        }
        let next = krawczyk(t, &k)?
            .and_then(|n| n.intersection(&k))
            .ok_or_else(|| Error::PrecisionExhausted("Krawczyk contraction lost the root".into()))?;
        // Wide boxes contract slowly before the quadratic regime; a step
        // gaining less than 1/64 counts as a stall.
        if next.width().mul_pow2(6)? > k.width().checked_mul(&Dyadic::from_i64(63))? {
            if next.width() <= *target {
                return Ok(next);
            }
            k = shrink(t, &next)?
                .ok_or_else(|| Error::PrecisionExhausted("Krawczyk contraction stalled".into()))?;
            continue;
        }
        k = next;
    }
    Err(Error::PrecisionExhausted("Krawczyk contraction did not converge".into()))
}

fn same_root<T: RootTarget>(t: &T, a: &Certified, b: &Certified) -> Result<bool> {
    if !a.k.intersects(&b.k) {
        return Ok(false);
    }
    if b.unique_in.strictly_contains_box(&a.k) || a.unique_in.strictly_contains_box(&b.k) {
        return Ok(true);
    }
    let h = inflate_half(&a.k.hull(&b.k))?;
    match krawczyk(t, &h)? {
        Some(k) if h.strictly_contains_box(&k) => Ok(true),
        _ => Err(Error::PrecisionExhausted("overlapping zero enclosures".into())),
    }
}

fn to_f64_pair(z: &DyadicComplex, shift: i64) -> (f64, f64) {
    (z.re.to_f64_scaled(shift), z.im.to_f64_scaled(shift))
}

/// Scale shift bringing the box into the normal `f64` range.
fn box_shift(f: &ComplexBox) -> i64 {
    let m = [f.re_lo(), f.re_hi(), f.im_lo(), f.im_hi()]
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| d.msb())
        .max()
        .unwrap_or(0);
    -m
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Angular width of a box seen from the origin (the box must avoid 0).
fn angular_span(f: &ComplexBox) -> f64 {
    let s = box_shift(f);
    let (cx, cy) = to_f64_pair(&f.center(), s);
    let base = libm::atan2(cy, cx);
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 0.0;
    for c in f.corners() {
        let (x, y) = to_f64_pair(&c, s);
        let a = wrap_angle(libm::atan2(y, x) - base);
        lo = lo.min(a);
        hi = hi.max(a);
    }
    hi - lo
}

fn point_arg<T: RootTarget>(t: &T, z: &DyadicComplex) -> Result<Option<f64>> {
    let f = t.eval(&ComplexBox::point(z))?;
    if f.contains_zero() {
        return Ok(None);
    }
    let (x, y) = to_f64_pair(&f.center(), box_shift(&f));
    Ok(Some(libm::atan2(y, x)))
}

/// Winding number of `f` along the boundary of `r`, or `None` when `f` could
/// not be bounded away from zero on the boundary.
pub fn winding_number<T: RootTarget>(t: &T, r: &ComplexBox) -> Result<Option<i64>> {
    let [a, b, c, d] = r.corners();
    let mut total = 0.0f64;
    for (from, to) in [(a.clone(), b.clone()), (b, c.clone()), (c, d.clone()), (d, a)] {
        let mut stack = vec![(from, to, 0u32)];
        while let Some((p, q, depth)) = stack.pop() {
            let seg = ComplexBox::from_intervals(
                Interval::spanning(p.re.clone(), q.re.clone()),
                Interval::spanning(p.im.clone(), q.im.clone()),
            );
            let f = t.eval(&seg)?;
            if f.contains_zero() || angular_span(&f) > PI / 2.0 {
                if depth >= 48 {
                    return Ok(None);
                }
                let mid = DyadicComplex::new(
                    (&p.re + &q.re).mul_pow2(-1)?,
                    (&p.im + &q.im).mul_pow2(-1)?,
                );
                // Push the second half first so segments are consumed in order.
                stack.push((mid.clone(), q, depth + 1));
                stack.push((p, mid, depth + 1));
                continue;
            }
            let (Some(ap), Some(aq)) = (point_arg(t, &p)?, point_arg(t, &q)?) else {
                return Ok(None);
            };
            total += wrap_angle(aq - ap);
        }
    }
    let w = libm::round(total / (2.0 * PI));
    if (total - 2.0 * PI * w).abs() > 0.5 {
        return Err(Error::PrecisionExhausted("winding number not integral".into()));
    }
    Ok(Some(w as i64))
}

/// Groups boxes into connected components (closed boxes that touch).
fn clusters(boxes: &[ComplexBox]) -> Vec<Vec<usize>> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| boxes[i].re_lo().cmp(boxes[j].re_lo()));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j].re_lo() > boxes[i].re_hi() {
                break;
            }
            if boxes[i].intersects(&boxes[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    groups
}

/// Ratio between `eps` and the smallest box the quadtree will create.
const MIN_SIZE_SHIFT: i64 = 10;
/// Upper bound on live quadtree boxes.
const MAX_FRONTIER: usize = 1 << 22;

/// One isolation attempt at the target's fixed precision.
pub fn isolate_with_target<T: RootTarget>(t: &T, region: &ComplexBox, eps: &Dyadic) -> Result<Vec<RootBox>> {
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let min_size = eps.mul_pow2(-MIN_SIZE_SHIFT)?;
    let mut certified = Vec::new();
    let mut unresolved = Vec::new();
    let mut frontier = vec![region.clone()];
    while !frontier.is_empty() {
        if frontier.len() > MAX_FRONTIER {
            return Err(Error::Resource("root isolation frontier too large".into()));
        }
        let outcomes = par_map(&frontier, |x| process(t, x, &min_size));
        let mut next = Vec::new();
        for (x, o) in frontier.iter().zip(outcomes) {
            match o? {
                Outcome::Discard => {}
                Outcome::Certified(c) => certified.push(c),
                Outcome::Split => next.extend(x.split4()),
                Outcome::Unresolved => unresolved.push(x.clone()),
            }
        }
        frontier = next;
    }
    finish(t, certified, unresolved, region, eps, &min_size)
}

/// Contracts and merges certified zeros, counts unresolved clusters and
/// checks conservation against the region's total.
fn finish<T: RootTarget>(
    t: &T,
    mut certified: Vec<Certified>,
    unresolved: Vec<ComplexBox>,
    region: &ComplexBox,
    eps: &Dyadic,
    min_size: &Dyadic,
) -> Result<Vec<RootBox>> {
    // Contract, then merge enclosures of the same zero.
    let tiny = eps.mul_pow2(-3)?;
    let contracted = par_map(&certified, |c| contract(t, c.k.clone(), &tiny));
    for (c, k) in certified.iter_mut().zip(contracted) {
        c.k = k?;
    }
    certified.sort_by(|a, b| a.k.canonical_cmp(&b.k));
    let mut unique: Vec<Certified> = Vec::new();
    let mut sorted: Vec<usize> = (0..certified.len()).collect();
    sorted.sort_by(|&i, &j| certified[i].k.re_lo().cmp(certified[j].k.re_lo()));
    let mut dropped = vec![false; certified.len()];
    for (pos, &i) in sorted.iter().enumerate() {
        if dropped[i] {
            continue;
        }
        for &j in &sorted[pos + 1..] {
            if certified[j].k.re_lo() > certified[i].k.re_hi() {
                break;
            }
            if !dropped[j] && same_root(t, &certified[i], &certified[j])? {
                dropped[j] = true;
            }
        }
    }
    for (i, c) in certified.into_iter().enumerate() {
        if dropped[i] {
            continue;
        }
        if region.contains_box(&c.k) {
            unique.push(c);
        } else if c.k.intersects(region) {
            return Err(Error::BoundaryAmbiguity);
        }
    }

    let mut folded = vec![false; unique.len()];
    let mut out: Vec<RootBox> = Vec::new();

    let pad = min_size.mul_pow2(-2)?;
    let eps_sq = eps.square()?;
    for group in clusters(&unresolved) {
        let mut hull = unresolved[group[0]].clone();
        for &i in &group[1..] {
            hull = hull.hull(&unresolved[i]);
        }
        let r = hull.inflate(&pad);
        if !region.strictly_contains_box(&r) {
            return Err(Error::BoundaryAmbiguity);
        }
        if r.diameter_sq()? > eps_sq {
            return Err(Error::PrecisionExhausted(format!(
                "unresolved cluster of {} boxes wider than eps",
                group.len()
            )));
        }
        let mut inside = 0i64;
        let mut members = Vec::new();
        for (i, c) in unique.iter().enumerate() {
            if r.contains_box(&c.k) {
                inside += 1;
                members.push(i);
            } else if r.intersects(&c.k) {
                return Err(Error::PrecisionExhausted("certified zero on a cluster boundary".into()));
            }
        }
        let w = winding_number(t, &r)?
            .ok_or_else(|| Error::PrecisionExhausted("zero on a cluster boundary".into()))?;
        let count = w - inside;
        if count < 0 {
            return Err(Error::PrecisionExhausted("negative cluster count".into()));
        }
        if count > 0 {
            // Certified zeros inside the cluster box are folded into it.
            for i in members {
                folded[i] = true;
            }
            out.push(RootBox {
                enclosure: r,
                count: (count + inside) as u64,
            });
        }
    }

    for (c, f) in unique.iter().zip(folded) {
        if !f {
            out.push(RootBox {
                enclosure: c.k.clone(),
                count: 1,
            });
        }
    }

    let total = match t.known_total(region) {
        Some(n) => n,
        None => {
            let w = winding_number(t, region)?.ok_or(Error::BoundaryAmbiguity)?;
            u64::try_from(w).map_err(|_| Error::PrecisionExhausted("negative winding number".into()))?
        }
    };
    let found: u64 = out.iter().map(|r| r.count).sum();
    if found != total {
        return Err(Error::PrecisionExhausted(format!("found {found} zeros, expected {total}")));
    }
    out.sort_by(|a, b| a.enclosure.canonical_cmp(&b.enclosure));
    for w in out.windows(2) {
        if w[0].enclosure.intersects(&w[1].enclosure) {
            return Err(Error::PrecisionExhausted("zero enclosures overlap".into()));
        }
    }
    Ok(out)
}

/// Number of precision doublings tried before giving up.
pub const PRECISION_ESCALATIONS: u32 = 4;

/// Retries `run` at doubling precision while it reports precision exhaustion.
pub fn with_escalation<R>(start: u32, mut run: impl FnMut(u32) -> Result<R>) -> Result<R> {
    let mut prec = start;
    let mut last = None;
    for _ in 0..=PRECISION_ESCALATIONS {
        match run(prec) {
            Err(Error::PrecisionExhausted(msg)) => last = Some(msg),
            other => return other,
        }
        prec *= 2;
    }
    Err(Error::Resource(format!(
        "root isolation failed up to {} bits: {}",
        prec / 2,
        last.unwrap_or_default()
    )))
}

fn eps_bits(eps: &Dyadic) -> u32 {
    (-eps.msb()).max(0) as u32 + MIN_SIZE_SHIFT as u32
}

/// Isolates the zeros of `q` in `region` into boxes of diameter at most `eps`.
pub fn isolate_roots(q: &PolynomialOracle, region: &ComplexBox, eps: &Dyadic) -> Result<Vec<RootBox>> {
    let start = (eps_bits(eps) + 48).max(64);
    with_escalation(start, |prec| {
        let t = PolyTarget::new(q, prec)?;
        isolate_with_target(&t, region, eps)
    })
}

/// Certifies a unique zero near the approximation `z0`, trying boxes of
/// growing radius up to `max_radius`.
fn certify_near<T: RootTarget>(t: &T, z0: &DyadicComplex, max_radius: &Dyadic, floor_bits: i64) -> Result<Option<Certified>> {
    let point = ComplexBox::point(z0);
    let f = t.eval(&point)?.center();
    let df = t.deriv(&point)?.center();
    let (fr, fi) = f.to_f64();
    let (dr, di) = df.to_f64();
    let step = libm::hypot(fr, fi) / libm::hypot(dr, di);
    let mut e = if step.is_finite() && step > 0.0 {
        libm::ilogb(step) as i64 + 3
    } else {
        -floor_bits
    };
    e = e.max(-floor_bits);
    while let Ok(r) = Dyadic::pow2(e) {
        if r > *max_radius {
            break;
        }
        let sq = ComplexBox::square(z0, &r);
        if let Some(k) = krawczyk(t, &sq)? {
            if sq.strictly_contains_box(&k) {
                return Ok(Some(Certified { k, unique_in: sq }));
            }
        }
        e += 4;
    }
    Ok(None)
}

/// Smallest cell of the floating-point search, relative to the escape radius.
const SEED_MIN_RELATIVE: f64 = 1e-12;

/// Certifies floating-point candidates; succeeds only when the certified
/// zeros account for the whole known total.
fn isolate_seeded(t: &FixedPointTarget, region: &ComplexBox, eps: &Dyadic) -> Result<Option<Vec<RootBox>>> {
    let Some(total) = t.known_total(region) else {
        return Ok(None);
    };
    let min_size = eps.mul_pow2(-MIN_SIZE_SHIFT)?;
    let b = t.b.to_f64();
    let seeds = crate::seed::candidates(t.prepared(), t.n, b, region, b * SEED_MIN_RELATIVE);
    if (seeds.len() as u64) < total {
        return Ok(None);
    }
    let max_radius = eps.mul_pow2(-4)?;
    let floor_bits = i64::from(t.prepared().prec()) / 2;
    let attempts = par_map(&seeds, |z| -> Result<Option<Certified>> {
        let z = DyadicComplex::new(
            Dyadic::from_f64(z.re).unwrap_or_default(),
            Dyadic::from_f64(z.im).unwrap_or_default(),
        );
        certify_near(t, &z, &max_radius, floor_bits)
    });
    let mut certified = Vec::with_capacity(attempts.len());
    for a in attempts {
        match a? {
            Some(c) => certified.push(c),
            None => return Ok(None),
        }
    }
    match finish(t, certified, Vec::new(), region, eps, &min_size) {
        Ok(v) => Ok(Some(v)),
        Err(Error::PrecisionExhausted(_) | Error::BoundaryAmbiguity) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Isolates the solutions of `p^n(z) = z` in `region`.
///
/// Floating-point candidates are certified first; the full quadtree runs only
/// when they do not account for every solution.
pub fn isolate_periodic(p: &PolynomialOracle, n: u32, region: &ComplexBox, eps: &Dyadic) -> Result<Vec<RootBox>> {
    let er = escape_radius(p)?;
    let start = orbit_precision(p.degree(), &er.b, n, eps_bits(eps) + 8);
    with_escalation(start, |prec| {
        let t = FixedPointTarget::new(p, n, prec)?;
        if let Some(roots) = isolate_seeded(&t, region, eps)? {
            return Ok(roots);
        }
        isolate_with_target(&t, region, eps)
    })
}
