//! Finite unions of closed dyadic grid squares.
//!
//! A [`CellSet`] at depth `l` holds cells `[ix 2^-l, (ix+1) 2^-l] x
//! [iy 2^-l, (iy+1) 2^-l]` as a sorted, duplicate-free list of `(ix, iy)`.
//! Two sets describe the same union at the same depth iff their encodings are
//! equal. Sets of different depth are compared by refining to the finer one.

use alloc::format;
use alloc::vec::Vec;

use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::interval::ComplexBox;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    depth: u32,
    cells: Vec<(i64, i64)>,
    frame: ComplexBox,
}

/// Largest supported depth; keeps all index arithmetic inside `i64`.
pub const MAX_DEPTH: u32 = 40;

fn grid(k: i64, depth: u32) -> Dyadic {
    Dyadic::from_parts(k, -(depth as i64)).expect("grid coordinate in range")
}

fn floor_index(x: &Dyadic, depth: u32) -> Result<i64> {
    x.floor_scaled_i64(depth as i64)
        .ok_or_else(|| Error::Resource(format!("coordinate too large for depth {depth}")))
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::Resource(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    Ok(())
}

impl CellSet {
    /// Builds a set from arbitrary cells (sorted and deduplicated here). The
    /// frame defaults to the bounding box of the cells.
    pub fn new(depth: u32, mut cells: Vec<(i64, i64)>, frame: Option<ComplexBox>) -> Result<Self> {
        check_depth(depth)?;
        cells.sort_unstable();
        cells.dedup();
        let mut set = CellSet {
            depth,
            cells,
            frame: ComplexBox::zero(),
        };
        set.frame = set.bounding_box().unwrap_or_else(ComplexBox::zero);
        match frame {
            Some(f) => set.with_frame(f),
            None => Ok(set),
        }
    }

    pub fn empty(depth: u32, frame: ComplexBox) -> Self {
        CellSet {
            depth,
            cells: Vec::new(),
            frame,
        }
    }

    /// Replaces the frame; it must contain every cell.
    pub fn with_frame(mut self, frame: ComplexBox) -> Result<Self> {
        if let Some(bb) = self.bounding_box() {
            if !frame.contains_box(&bb) {
                return Err(Error::Precondition("frame does not contain all cells".into()));
            }
        }
        self.frame = frame;
        Ok(self)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cells(&self) -> &[(i64, i64)] {
        &self.cells
    }

    pub fn frame(&self) -> &ComplexBox {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn side(&self) -> Dyadic {
        grid(1, self.depth)
    }

    pub fn cell_box(&self, ix: i64, iy: i64) -> ComplexBox {
        ComplexBox::new(
            grid(ix, self.depth),
            grid(ix + 1, self.depth),
            grid(iy, self.depth),
            grid(iy + 1, self.depth),
        )
        .expect("ordered grid coordinates")
    }

    pub fn cell_center(&self, ix: i64, iy: i64) -> DyadicComplex {
        DyadicComplex::new(grid(2 * ix + 1, self.depth + 1), grid(2 * iy + 1, self.depth + 1))
    }

    pub fn contains_cell(&self, cell: (i64, i64)) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Whether `z` lies in the union (cells are closed).
    pub fn contains_point(&self, z: &DyadicComplex) -> bool {
        let (Ok(ix), Ok(iy)) = (floor_index(&z.re, self.depth), floor_index(&z.im, self.depth)) else {
            return false;
        };
        // A point on a grid line belongs to the cells on both sides.
        let on_x = grid(ix, self.depth) == z.re;
        let on_y = grid(iy, self.depth) == z.im;
        let xs: &[i64] = if on_x { &[ix, ix - 1] } else { &[ix] };
        let ys: &[i64] = if on_y { &[iy, iy - 1] } else { &[iy] };
        xs.iter().any(|&x| ys.iter().any(|&y| self.contains_cell((x, y))))
    }

    /// Bounding box of the union, `None` when empty.
    pub fn bounding_box(&self) -> Option<ComplexBox> {
        let first = self.cells.first()?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.0, first.0, first.1, first.1);
        for &(x, y) in &self.cells {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        ComplexBox::new(
            grid(x0, self.depth),
            grid(x1 + 1, self.depth),
            grid(y0, self.depth),
            grid(y1 + 1, self.depth),
        )
        .ok()
    }

    /// The same union expressed at a finer depth.
    pub fn refine_to(&self, depth: u32) -> Result<CellSet> {
        if depth < self.depth {
            return Err(Error::Precondition("cannot refine to a coarser depth".into()));
        }
        check_depth(depth)?;
        let sh = depth - self.depth;
        let n = 1i64 << sh;
        let mut cells = Vec::with_capacity(self.cells.len() * (n * n) as usize);
        for &(x, y) in &self.cells {
            for dx in 0..n {
                for dy in 0..n {
                    cells.push(((x << sh) + dx, (y << sh) + dy));
                }
            }
        }
        cells.sort_unstable();
        Ok(CellSet {
            depth,
            cells,
            frame: self.frame.clone(),
        })
    }

    /// Cells of a fine depth `depth >= self.depth`: whether the fine cell lies
    /// in the union.
    fn covers_fine(&self, depth: u32, cell: (i64, i64)) -> bool {
        let sh = depth - self.depth;
        self.contains_cell((cell.0 >> sh, cell.1 >> sh))
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        let depth = self.depth.max(other.depth);
        let a = self.refine_to(depth)?;
        let b = other.refine_to(depth)?;
        let mut cells = a.cells;
        cells.extend(b.cells);
        CellSet::new(depth, cells, Some(self.frame.hull(&other.frame)))
    }

    /// Cells of `self` (refined to the common depth) not covered by `other`.
    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        let depth = self.depth.max(other.depth);
        let a = self.refine_to(depth)?;
        let cells = a.cells.into_iter().filter(|&c| !other.covers_fine(depth, c)).collect();
        CellSet::new(depth, cells, Some(self.frame.clone()))
    }

    /// Covers the union of the closed disks `B(c, r)` by every grid cell that
    /// meets one of them.
    pub fn from_disks(disks: &[(DyadicComplex, Dyadic)], depth: u32) -> Result<CellSet> {
        check_depth(depth)?;
        let side = grid(1, depth);
        let mut cells = Vec::new();
        for (c, r) in disks {
            if !r.is_positive() {
                return Err(Error::Precondition("disk radius must be positive".into()));
            }
            if side.mul_pow2(2)? > *r {
                return Err(Error::Precondition(format!(
                    "depth {depth} too coarse for radius {}",
                    r.to_decimal_string()
                )));
            }
            let r2 = r.square()?;
            let y0 = floor_index(&(&c.im - r), depth)?;
            let y1 = floor_index(&(&c.im + r), depth)?;
            let x0 = floor_index(&(&c.re - r), depth)?;
            let x1 = floor_index(&(&c.re + r), depth)?;
            for iy in y0..=y1 {
                let dy = gap(&c.im, iy, depth);
                let dy2 = dy.square()?;
                if dy2 > r2 {
                    continue;
                }
                for ix in x0..=x1 {
                    let dx = gap(&c.re, ix, depth);
                    if &dx.square()? + &dy2 <= r2 {
                        cells.push((ix, iy));
                    }
                }
            }
        }
        CellSet::new(depth, cells, None)
    }

    /// Every cell within distance `r` of the union: contains the exact
    /// `r`-neighborhood, contained in the `(r + diagonal)`-neighborhood.
    pub fn neighborhood(&self, r: &Dyadic) -> Result<CellSet> {
        if r.is_negative() {
            return Err(Error::Precondition("neighborhood radius must be non-negative".into()));
        }
        if r.is_zero() || self.is_empty() {
            return Ok(self.clone());
        }
        // Offsets (dx, dy) whose cell lies within distance r of the origin cell:
        // (max(|dx|-1, 0)^2 + max(|dy|-1, 0)^2) * side^2 <= r^2.
        let scaled = r.mul_pow2(self.depth as i64)?;
        let limit = scaled.square()?;
        let reach = scaled
            .floor_scaled_i64(0)
            .ok_or_else(|| Error::Resource("neighborhood radius too large".into()))?
            + 1;
        let mut stencil = Vec::new();
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                let a = (dx.abs() - 1).max(0);
                let b = (dy.abs() - 1).max(0);
                if Dyadic::from_i64(a * a + b * b) <= limit {
                    stencil.push((dx, dy));
                }
            }
        }
        let mut cells = Vec::with_capacity(self.cells.len() * stencil.len());
        for &(x, y) in &self.cells {
            for &(dx, dy) in &stencil {
                cells.push((x + dx, y + dy));
            }
        }
        let mut out = CellSet::new(self.depth, cells, None)?;
        out.frame = out.frame.hull(&self.frame);
        Ok(out)
    }

    /// Whether the union of `self` lies inside the union of `other`.
    pub fn contained_in(&self, other: &CellSet) -> bool {
        if self.depth >= other.depth {
            return self.cells.iter().all(|&c| other.covers_fine(self.depth, c));
        }
        let sh = other.depth - self.depth;
        let n = 1i64 << sh;
        self.cells.iter().all(|&(x, y)| {
            (0..n).all(|dx| (0..n).all(|dy| other.contains_cell(((x << sh) + dx, (y << sh) + dy))))
        })
    }

    /// Upper bound on the Hausdorff distance between the two unions, within
    /// half a cell diagonal (at the finer depth) of the true value.
    pub fn hausdorff_upper(&self, other: &CellSet) -> Result<Dyadic> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        let depth = self.depth.max(other.depth);
        let a = directed(self, other, depth)?;
        let b = directed(other, self, depth)?;
        Ok(a.max(b))
    }
}

/// Distance from `x` to the grid interval `[k, k+1] * 2^-depth`.
fn gap(x: &Dyadic, k: i64, depth: u32) -> Dyadic {
    let lo = grid(k, depth);
    let hi = grid(k + 1, depth);
    if *x < lo {
        &lo - x
    } else if *x > hi {
        x - &hi
    } else {
        Dyadic::zero()
    }
}

/// Columns of a sorted cell list: `(ix, start, end)` ranges.
fn columns(cells: &[(i64, i64)]) -> Vec<(i64, usize, usize)> {
    let mut out: Vec<(i64, usize, usize)> = Vec::new();
    for (i, &(x, _)) in cells.iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.0 == x => last.2 = i + 1,
            _ => out.push((x, i, i + 1)),
        }
    }
    out
}

/// Squared distance, in units of `(2^-(depth+1))^2`, from a half-integer
/// point (given in those units) to the nearest cell of `b`.
struct Nearest<'a> {
    b: &'a CellSet,
    cols: Vec<(i64, usize, usize)>,
    /// Side of a `b` cell in half-units of the fine depth.
    unit: i128,
}

impl<'a> Nearest<'a> {
    fn new(b: &'a CellSet, depth: u32) -> Self {
        Nearest {
            b,
            cols: columns(&b.cells),
            unit: 2i128 << (depth - b.depth),
        }
    }

    fn axis_gap(&self, p: i128, k: i64) -> i128 {
        let lo = k as i128 * self.unit;
        let hi = lo + self.unit;
        if p < lo {
            lo - p
        } else if p > hi {
            p - hi
        } else {
            0
        }
    }

    fn column_best(&self, col: &(i64, usize, usize), py: i128) -> i128 {
        let ys = &self.b.cells[col.1..col.2];
        let target = py.div_euclid(self.unit) as i64;
        let pos = ys.partition_point(|&(_, y)| y < target);
        let mut best = i128::MAX;
        for i in [pos.wrapping_sub(1), pos, pos + 1] {
            if let Some(&(_, y)) = ys.get(i) {
                best = best.min(self.axis_gap(py, y));
            }
        }
        best
    }

    fn dist_sq(&self, px: i128, py: i128) -> i128 {
        let target = px.div_euclid(self.unit) as i64;
        let start = self.cols.partition_point(|c| c.0 < target);
        let mut best = i128::MAX;
        // Walk outward in both directions while the column gap can still win.
        let mut i = start;
        while i < self.cols.len() {
            let gx = self.axis_gap(px, self.cols[i].0);
            if gx.saturating_mul(gx) >= best {
                break;
            }
            let gy = self.column_best(&self.cols[i], py);
            best = best.min(gx * gx + gy * gy);
            i += 1;
        }
        let mut i = start;
        while i > 0 {
            i -= 1;
            let gx = self.axis_gap(px, self.cols[i].0);
            if gx.saturating_mul(gx) >= best {
                break;
            }
            let gy = self.column_best(&self.cols[i], py);
            best = best.min(gx * gx + gy * gy);
        }
        best
    }
}

/// `sup_{x in a} dist(x, b)` bound, with `a` refined to `depth`.
fn directed(a: &CellSet, b: &CellSet, depth: u32) -> Result<Dyadic> {
    let near = Nearest::new(b, depth);
    let sh = depth - a.depth;
    let n = 1i64 << sh;
    let mut worst: i128 = -1;
    for &(x, y) in &a.cells {
        for dx in 0..n {
            for dy in 0..n {
                let c = ((x << sh) + dx, (y << sh) + dy);
                if b.covers_fine(depth, c) {
                    continue;
                }
                let d2 = near.dist_sq(2 * c.0 as i128 + 1, 2 * c.1 as i128 + 1);
                worst = worst.max(d2);
            }
        }
    }
    if worst < 0 {
        return Ok(Dyadic::zero());
    }
    // Center distance plus half the diagonal of a fine cell.
    let d2 = Dyadic::from_parts(worst, -2 * (depth as i64 + 1))?;
    let center = d2.sqrt_ceil_at(depth as i64 + 8)?;
    let half_diag = Dyadic::from_parts(2, -2 * (depth as i64 + 1))?.sqrt_ceil_at(depth as i64 + 8)?;
    Ok(&center + &half_diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn single(depth: u32, c: (i64, i64)) -> CellSet {
        CellSet::new(depth, vec![c], None).unwrap()
    }

    #[test]
    fn from_disks_sandwich() {
        let s = CellSet::from_disks(&[(DyadicComplex::zero(), d("1"))], 3).unwrap();
        // Every lattice point of the unit disk is covered.
        for i in -8..=8i64 {
            for j in -8..=8i64 {
                if i * i + j * j <= 64 {
                    assert!(s.contains_point(&DyadicComplex::new(grid(i, 3), grid(j, 3))));
                }
            }
        }
        // Every cell corner is within 1 + sqrt(2)/8 of the origin.
        let lim = d("1.1875");
        for &(x, y) in s.cells() {
            for z in s.cell_box(x, y).corners() {
                assert!(z.norm_sq().unwrap() <= lim.square().unwrap());
            }
        }
        assert!(CellSet::from_disks(&[], 4).unwrap().is_empty());
        assert!(CellSet::from_disks(&[(DyadicComplex::zero(), d("0.25"))], 2).is_err());
    }

    #[test]
    fn tangent_disks_connect() {
        let s = CellSet::from_disks(
            &[(DyadicComplex::zero(), d("1")), (DyadicComplex::from_i64(2, 0), d("1"))],
            3,
        )
        .unwrap();
        assert!(s.contains_point(&DyadicComplex::from_i64(1, 0)));
        assert!(s.contains_cell((7, 0)) && s.contains_cell((8, 0)));
    }

    #[test]
    fn neighborhood_examples() {
        let s = single(4, (0, 0));
        assert_eq!(s.neighborhood(&Dyadic::zero()).unwrap(), s);
        let n = s.neighborhood(&d("1*2^-4")).unwrap();
        assert_eq!(n.len(), 21);
        assert!(s.contained_in(&n));
        assert!(CellSet::empty(4, ComplexBox::zero()).neighborhood(&d("1")).unwrap().is_empty());
    }

    #[test]
    fn containment_examples() {
        let a = CellSet::new(3, vec![(0, 0), (5, 5)], None).unwrap();
        assert!(a.contained_in(&a));
        assert!(!a.contained_in(&single(3, (0, 0))));
        // Mixed depths: a coarse cell equals its four children.
        let coarse = single(2, (1, 1));
        let fine = coarse.refine_to(4).unwrap();
        assert!(coarse.contained_in(&fine) && fine.contained_in(&coarse));
        let mut missing = fine.cells().to_vec();
        missing.pop();
        let partial = CellSet::new(4, missing, None).unwrap();
        assert!(!coarse.contained_in(&partial) && partial.contained_in(&coarse));
    }

    #[test]
    fn hausdorff_examples() {
        let a = CellSet::new(4, vec![(0, 0), (3, 2)], None).unwrap();
        assert_eq!(a.hausdorff_upper(&a).unwrap(), Dyadic::zero());
        let p = single(10, (0, 0));
        let q = single(10, (1024, 0));
        let h = p.hausdorff_upper(&q).unwrap().to_f64();
        let diag = 2f64.sqrt() / 1024.0;
        assert!((h - 1.0).abs() <= diag);
        let unit = CellSet::new(0, vec![(0, 0)], None).unwrap().refine_to(4).unwrap();
        let nb = unit.neighborhood(&d("0.5")).unwrap();
        let h = unit.hausdorff_upper(&nb).unwrap().to_f64();
        assert!((h - 0.5).abs() <= 2f64.sqrt() / 16.0);
        assert_eq!(a.hausdorff_upper(&CellSet::empty(4, ComplexBox::zero())), Err(Error::EmptySet));
    }

    #[test]
    fn difference_and_union() {
        let a = CellSet::new(3, vec![(0, 0), (1, 0), (2, 0)], None).unwrap();
        let b = single(3, (1, 0));
        let diff = a.difference(&b).unwrap();
        assert_eq!(diff.cells(), &[(0, 0), (2, 0)]);
        assert_eq!(diff.union(&b).unwrap().cells(), a.cells());
    }
}
