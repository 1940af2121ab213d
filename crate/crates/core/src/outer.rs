//! The escape radius and outer approximations of `p^-k(D)` by adaptive,
//! certified quadtree subdivision.

use alloc::vec::Vec;

use crate::cellset::CellSet;
use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::interval::ComplexBox;
use crate::orbit::{orbit_precision, AffineOrbit};
use crate::par::par_map;
use crate::periodic::TrapDisk;
use crate::poly::{PolynomialOracle, PreparedPoly};

/// A radius `b` with the certified growth property `|z| >= b => |p(z)| >= 2|z|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeRadius {
    pub b: Dyadic,
    /// Lower bound on `|a_d|` used in the certificate.
    pub leading_lower: Dyadic,
    /// Upper bound on `sum_{i<d} |a_i|` used in the certificate.
    pub tail_upper: Dyadic,
}

impl EscapeRadius {
    /// Re-checks `|a_d| b - sum_{i<d} |a_i| >= 2` from the stored bounds. For
    /// `|z| >= b >= 1` this gives `|p(z)| >= |z|^(d-1) (|a_d| b - A) >= 2|z|`.
    pub fn verify(&self) -> bool {
        match self.leading_lower.checked_mul(&self.b) {
            Ok(lb) => self.b >= Dyadic::one() && &lb - &self.tail_upper >= Dyadic::from_i64(2),
            Err(_) => false,
        }
    }

    /// Exponent `e` of the smallest power of two `2^e >= b`.
    pub fn frame_exponent(&self) -> i64 {
        let e = self.b.msb();
        if Dyadic::pow2(e).map(|p| p == self.b).unwrap_or(false) {
            e
        } else {
            e + 1
        }
    }

    /// The grid-aligned square `[-2^e, 2^e]^2` containing `[-b, b]^2`.
    pub fn frame(&self) -> ComplexBox {
        let s = Dyadic::pow2(self.frame_exponent()).expect("moderate exponent");
        ComplexBox::new(-&s, s.clone(), -&s, s).expect("ordered")
    }
}

/// `b = max(1, (2 + sum_{i<d} |a_i|) / |a_d|)` with certified bounds, rounded
/// up to a multiple of `2^-16`.
pub fn escape_radius(p: &PolynomialOracle) -> Result<EscapeRadius> {
    if p.degree() < 2 {
        return Err(Error::Precondition("escape radius needs degree at least 2".into()));
    }
    let leading_lower = p.leading_lower_bound()?;
    let boxes = p.coefficient_boxes(32)?;
    let mut tail_upper = Dyadic::zero();
    for c in &boxes[..boxes.len() - 1] {
        tail_upper = &tail_upper + &c.mag_upper(32)?;
    }
    let num = &tail_upper + &Dyadic::from_i64(2);
    let b = num.div_ceil_at(&leading_lower, 16)?.max(Dyadic::one());
    let er = EscapeRadius {
        b,
        leading_lower,
        tail_upper,
    };
    if !er.verify() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    Ok(er)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellClass {
    In,
    Bnd,
    Out,
}

impl CellClass {
    pub fn label(self) -> &'static str {
        match self {
            CellClass::In => "IN",
            CellClass::Bnd => "BND",
            CellClass::Out => "OUT",
        }
    }
}

/// A quadtree cell `[ix, ix+1] x [iy, iy+1]` scaled by `2^-depth`; `depth`
/// may be negative for cells larger than one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadCell {
    pub depth: i32,
    pub ix: i64,
    pub iy: i64,
}

impl QuadCell {
    pub fn to_box(&self) -> ComplexBox {
        let g = |k: i64| Dyadic::from_parts(k, -(self.depth as i64)).expect("grid coordinate");
        ComplexBox::new(g(self.ix), g(self.ix + 1), g(self.iy), g(self.iy + 1)).expect("ordered")
    }

    pub fn children(&self) -> [QuadCell; 4] {
        let (x, y, d) = (2 * self.ix, 2 * self.iy, self.depth + 1);
        [
            QuadCell { depth: d, ix: x, iy: y },
            QuadCell { depth: d, ix: x + 1, iy: y },
            QuadCell { depth: d, ix: x, iy: y + 1 },
            QuadCell { depth: d, ix: x + 1, iy: y + 1 },
        ]
    }

    /// Index range of this cell at a finer depth.
    fn span_at(&self, depth: u32) -> (i64, i64, i64) {
        let sh = depth as i64 - self.depth as i64;
        (self.ix << sh, self.iy << sh, 1i64 << sh)
    }
}

/// Quadtree leaves of `[-2^e, 2^e]^2`, each classified IN / OUT / BND.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedGrid {
    /// Depth of the finest (BND) leaves; their side is at most `tolerance / 2`.
    pub depth: u32,
    pub frame: ComplexBox,
    pub k: u32,
    pub tolerance: Dyadic,
    /// Leaves in canonical order.
    pub leaves: Vec<(QuadCell, CellClass)>,
}

impl ClassifiedGrid {
    pub fn count(&self, class: CellClass) -> usize {
        self.leaves.iter().filter(|(_, c)| *c == class).count()
    }

    /// Leaves of the given classes as a cell set at the finest depth.
    pub fn cells_of(&self, classes: &[CellClass]) -> Result<CellSet> {
        let mut cells = Vec::new();
        for (q, c) in &self.leaves {
            if !classes.contains(c) {
                continue;
            }
            let (x, y, n) = q.span_at(self.depth);
            for dx in 0..n {
                for dy in 0..n {
                    cells.push((x + dx, y + dy));
                }
            }
        }
        CellSet::new(self.depth, cells, Some(self.frame.clone()))
    }

    /// The union of IN and BND leaves: the outer approximation.
    pub fn covering_set(&self) -> Result<CellSet> {
        self.cells_of(&[CellClass::In, CellClass::Bnd])
    }

    /// Classes of all leaves containing `z` (several on shared edges).
    pub fn classes_at(&self, z: &DyadicComplex) -> Vec<CellClass> {
        let mut out: Vec<CellClass> = self
            .leaves
            .iter()
            .filter(|(q, _)| q.to_box().contains_point(z))
            .map(|(_, c)| *c)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Verdict of a per-cell classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    In,
    Out,
    Undecided,
}

/// Smallest `l` with `2^-l <= tol / 2`.
pub fn leaf_depth(tol: &Dyadic) -> Result<u32> {
    if !tol.is_positive() {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let half = tol.mul_pow2(-1)?;
    let mut l: i64 = -half.msb();
    while Dyadic::pow2(-l)? > half {
        l += 1;
    }
    u32::try_from(l.max(0)).map_err(|_| Error::Resource("tolerance too small".into()))
}

/// The four quadrants of `[-2^e, 2^e]^2`.
fn root_cells(frame_exponent: i64) -> [QuadCell; 4] {
    let d = -(frame_exponent as i32);
    [
        QuadCell { depth: d, ix: -1, iy: -1 },
        QuadCell { depth: d, ix: 0, iy: -1 },
        QuadCell { depth: d, ix: -1, iy: 0 },
        QuadCell { depth: d, ix: 0, iy: 0 },
    ]
}

/// Subdivides the frame of `er` until every leaf is IN, OUT or of side
/// `2^-depth` (then BND). Leaves of `prior` that are OUT stay OUT; its other
/// leaves are re-examined.
pub fn subdivide<F>(
    frame_exponent: i64,
    depth: u32,
    prior: Option<&[(QuadCell, CellClass)]>,
    classify: F,
) -> Result<Vec<(QuadCell, CellClass)>>
where
    F: Fn(&ComplexBox) -> Result<Verdict> + Sync + Send,
{
    let mut leaves = Vec::new();
    let mut frontier: Vec<QuadCell> = match prior {
        Some(prev) => {
            let mut f = Vec::new();
            for (q, c) in prev {
                if *c == CellClass::Out {
                    leaves.push((*q, *c));
                } else {
                    f.push(*q);
                }
            }
            f
        }
        None => root_cells(frame_exponent).to_vec(),
    };
    while !frontier.is_empty() {
        let verdicts = par_map(&frontier, |q| classify(&q.to_box()));
        let mut next = Vec::new();
        for (q, v) in frontier.iter().zip(verdicts) {
            match v? {
                Verdict::In => leaves.push((*q, CellClass::In)),
                Verdict::Out => leaves.push((*q, CellClass::Out)),
                Verdict::Undecided if q.depth >= depth as i32 => leaves.push((*q, CellClass::Bnd)),
                Verdict::Undecided => next.extend(q.children()),
            }
        }
        frontier = next;
    }
    leaves.sort_unstable_by(|a, b| {
        let (ba, bb) = (a.0.to_box(), b.0.to_box());
        ba.canonical_cmp(&bb).then(a.0.depth.cmp(&b.0.depth))
    });
    Ok(leaves)
}

/// Classifies one cell for `p^-k(D)` minus the basins of the trap disks.
pub fn classify_preimage(pp: &PreparedPoly, b: &Dyadic, traps: &[TrapDisk], k: u32, x: &ComplexBox) -> Result<Verdict> {
    let origin = DyadicComplex::zero();
    let mut orbit = AffineOrbit::new(pp, x)?;
    for j in 0..=k {
        if orbit.outside_disk(&origin, b)? {
            return Ok(Verdict::Out);
        }
        for t in traps {
            if orbit.inside_disk(&t.center, &t.radius, true)? {
                return Ok(Verdict::Out);
            }
        }
        if j == k {
            break;
        }
        if orbit.wider_than(b)? {
            return Ok(Verdict::Undecided);
        }
        orbit.step()?;
    }
    if orbit.inside_disk(&origin, b, false)? {
        Ok(Verdict::In)
    } else {
        Ok(Verdict::Undecided)
    }
}

/// Options shared by the outer approximation entry points.
#[derive(Debug, Clone, Default)]
pub struct OuterOptions<'a> {
    pub traps: &'a [TrapDisk],
    /// A grid for `k - 1` (same tolerance) to refine instead of starting over.
    pub prior: Option<&'a ClassifiedGrid>,
}

/// `D_k`: IN cells satisfy `p^k(cell) ⊆ D`, OUT cells escape, BND cells are
/// undecided at side `<= tol / 2`.
pub fn preimage_approx(p: &PolynomialOracle, er: &EscapeRadius, k: u32, tol: &Dyadic) -> Result<ClassifiedGrid> {
    preimage_approx_with(p, er, k, tol, &OuterOptions::default())
}

/// Like [`preimage_approx`], additionally marking OUT every cell whose orbit
/// enters one of the trap disks within `k` steps.
pub fn complement_preimage_approx(
    p: &PolynomialOracle,
    traps: &[TrapDisk],
    k: u32,
    tol: &Dyadic,
) -> Result<ClassifiedGrid> {
    let er = escape_radius(p)?;
    preimage_approx_with(p, &er, k, tol, &OuterOptions { traps, prior: None })
}

pub fn preimage_approx_with(
    p: &PolynomialOracle,
    er: &EscapeRadius,
    k: u32,
    tol: &Dyadic,
    opts: &OuterOptions<'_>,
) -> Result<ClassifiedGrid> {
    let depth = leaf_depth(tol)?;
    let frame = er.frame();
    let prec = orbit_precision(p.degree(), &er.b, k, depth + 8);
    let pp = p.prepare(prec)?;
    let prior = opts
        .prior
        .filter(|g| g.depth == depth && g.frame == frame && g.k <= k)
        .map(|g| g.leaves.as_slice());
    let traps = opts.traps;
    let leaves = subdivide(er.frame_exponent(), depth, prior, |x| {
        classify_preimage(&pp, &er.b, traps, k, x)
    })?;
    Ok(ClassifiedGrid {
        depth,
        frame,
        k,
        tolerance: tol.clone(),
        leaves,
    })
}

/// Cells whose orbit is certified to enter the closed disk `B(center, radius)`
/// within `k` steps (IN), certified to escape first (OUT), or neither (BND).
pub fn entry_approx(
    p: &PolynomialOracle,
    er: &EscapeRadius,
    center: &DyadicComplex,
    radius: &Dyadic,
    k: u32,
    tol: &Dyadic,
) -> Result<ClassifiedGrid> {
    let depth = leaf_depth(tol)?;
    let frame = er.frame();
    if !radius.is_positive() {
        let leaves = root_cells(er.frame_exponent()).into_iter().map(|q| (q, CellClass::Out)).collect();
        return Ok(ClassifiedGrid {
            depth,
            frame,
            k,
            tolerance: tol.clone(),
            leaves,
        });
    }
    let prec = orbit_precision(p.degree(), &er.b, k, depth + 8);
    let pp = p.prepare(prec)?;
    let origin = DyadicComplex::zero();
    let leaves = subdivide(er.frame_exponent(), depth, None, |x| {
        let mut orbit = AffineOrbit::new(&pp, x)?;
        for j in 0..=k {
            if orbit.inside_disk(center, radius, false)? {
                return Ok(Verdict::In);
            }
            if orbit.outside_disk(&origin, &er.b)? {
                return Ok(Verdict::Out);
            }
            if j == k || orbit.wider_than(&er.b)? {
                break;
            }
            orbit.step()?;
        }
        Ok(Verdict::Undecided)
    })?;
    Ok(ClassifiedGrid {
        depth,
        frame,
        k,
        tolerance: tol.clone(),
        leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn escape_radius_examples() {
        let b = |c: &[i64]| escape_radius(&PolynomialOracle::from_i64(c).unwrap()).unwrap().b;
        assert_eq!(b(&[0, 0, 1]), d("2"));
        assert_eq!(b(&[-2, 0, 1]), d("4"));
        assert_eq!(b(&[0, -3, 0, 1]), d("5"));
        let c = escape_radius(&PolynomialOracle::parse("0.25+0.5i,0,1").unwrap()).unwrap();
        // 2 + |c| with |c| = sqrt(5)/4, up to the rounding of the certified bound.
        assert!(c.b >= d("2.5") && c.b <= d("2.5625"));
        assert!(c.verify());
        assert!(escape_radius(&PolynomialOracle::from_i64(&[1, 1]).unwrap()).is_err());
    }

    #[test]
    fn frame_is_power_of_two() {
        let er = escape_radius(&PolynomialOracle::from_i64(&[0, -3, 0, 1]).unwrap()).unwrap();
        assert_eq!(er.frame_exponent(), 3);
        let er = escape_radius(&PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap()).unwrap();
        assert_eq!(er.frame_exponent(), 2);
    }

    #[test]
    fn leaf_depths() {
        assert_eq!(leaf_depth(&d("0.0625")).unwrap(), 5);
        assert_eq!(leaf_depth(&d("3*2^-6")).unwrap(), 6);
    }

    #[test]
    fn z_squared_one_preimage_is_disk_sqrt2() {
        let p = PolynomialOracle::from_i64(&[0, 0, 1]).unwrap();
        let er = escape_radius(&p).unwrap();
        let tol = d("0.0625");
        let g = preimage_approx(&p, &er, 1, &tol).unwrap();
        let set = g.covering_set().unwrap();
        let r = 2f64.sqrt();
        for &(x, y) in set.cells() {
            let c = set.cell_center(x, y).to_f64();
            let dist = (c.0 * c.0 + c.1 * c.1).sqrt();
            assert!(dist <= r + tol.to_f64(), "cell at {c:?} too far out");
        }
        // Every grid point well inside the disk is covered by an IN cell.
        for i in -20..=20i64 {
            for j in -20..=20i64 {
                let z = DyadicComplex::new(Dyadic::from_parts(i, -4).unwrap(), Dyadic::from_parts(j, -4).unwrap());
                let (fx, fy) = z.to_f64();
                if (fx * fx + fy * fy).sqrt() < r - 0.1 {
                    assert!(set.contains_point(&z));
                }
            }
        }
    }
}
