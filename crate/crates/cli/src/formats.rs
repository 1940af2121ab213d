//! Text and raster encodings of the computed objects.

use std::fmt::Write;

use certjulia_core::cellset::CellSet;
use certjulia_core::outer::EscapeRadius;
use certjulia_core::periodic::{OrbitCertificate, PeriodicCensus, UnresolvedReason};
use certjulia_core::render::{RadiusBound, RenderResult};
use certjulia_core::{ComplexBox, Dyadic};

/// Pixel value of a cell in the output set.
pub const PIXEL_IN: u8 = 255;
pub const PIXEL_BND: u8 = 128;
pub const PIXEL_OUT: u8 = 0;

fn frame_string(f: &ComplexBox) -> String {
    format!("{},{},{},{}", f.re_lo(), f.re_hi(), f.im_lo(), f.im_hi())
}

/// `key=value` provenance of a render run.
pub fn provenance(r: &RenderResult, poly: &str) -> String {
    let rho = r
        .conditional_on_rho
        .as_ref()
        .map(|d| d.to_string())
        .unwrap_or_else(|| "none".into());
    format!(
        "# poly={poly} m={} k={} periods={} max_k={} max_period={} max_depth={} status={} conditional_on_rho={rho}",
        r.m,
        r.k,
        r.periods,
        r.budgets.max_k,
        r.budgets.max_period,
        r.budgets.max_depth,
        r.status.label(),
    )
}

/// Header line, provenance line, then one `ix iy class` line per cell.
pub fn cell_list(set: &CellSet, poly: &str, provenance: &str, class: &str) -> String {
    let mut out = String::with_capacity(16 * set.len() + 256);
    let _ = writeln!(out, "depth={} frame={} poly={poly}", set.depth(), frame_string(set.frame()));
    let _ = writeln!(out, "{provenance}");
    for &(x, y) in set.cells() {
        let _ = writeln!(out, "{x} {y} {class}");
    }
    out
}

/// Grayscale raster of the set over its frame, one byte per cell, rows from
/// the top of the frame, plus the sidecar line describing it.
pub fn bitmap(set: &CellSet, value: u8) -> Result<(Vec<u8>, String), String> {
    let d = set.depth() as i64;
    let f = set.frame();
    let index = |x: &Dyadic| x.floor_scaled_i64(d).ok_or_else(|| "frame too large for a bitmap".to_string());
    let (x0, x1) = (index(f.re_lo())?, index(f.re_hi())?);
    let (y0, y1) = (index(f.im_lo())?, index(f.im_hi())?);
    let (w, h) = ((x1 - x0).max(0) as usize, (y1 - y0).max(0) as usize);
    if w.saturating_mul(h) > 1 << 30 {
        return Err(format!("bitmap of {w}x{h} pixels is too large"));
    }
    let mut px = vec![PIXEL_OUT; w * h];
    for &(x, y) in set.cells() {
        let col = (x - x0) as usize;
        let row = (y1 - 1 - y) as usize;
        px[row * w + col] = value;
    }
    let sidecar = format!(
        "width={w} height={h} depth={} frame={} order=row-major-top-down\n",
        set.depth(),
        frame_string(f)
    );
    Ok((px, sidecar))
}

fn certificate_line(out: &mut String, c: &OrbitCertificate) {
    let _ = writeln!(
        out,
        "{} {} {} {} {} {} {}",
        c.period,
        c.center.re,
        c.center.im,
        c.radius,
        c.kind.label(),
        c.derivative_bound,
        c.second_bound
    );
}

/// Certificates sorted by period then center; unclassified points and root
/// counts follow as comments.
pub fn certificates(census: &PeriodicCensus, poly: &str) -> String {
    let mut out = String::new();
    let counts: Vec<String> = census.root_counts.iter().map(u64::to_string).collect();
    let _ = writeln!(
        out,
        "# poly={poly} max_period={} eps={} root_counts={}",
        census.periods_done,
        census.eps(),
        counts.join(",")
    );
    let _ = writeln!(out, "# period center_re center_im radius kind derivative_bound second_bound");
    let mut all: Vec<&OrbitCertificate> = census.repelling.iter().chain(&census.attracting).collect();
    all.sort_by(|a, b| a.canonical_cmp(b));
    for c in all {
        certificate_line(&mut out, c);
    }
    for u in &census.unresolved {
        let reason = match u.reason {
            UnresolvedReason::Multiple(k) => format!("multiple={k}"),
            UnresolvedReason::Budget { last_prec } => format!("budget prec={last_prec}"),
        };
        let b = &u.root.enclosure;
        let _ = writeln!(out, "# unresolved {} {} {} {reason}", u.period, u.root.count, frame_string(b));
    }
    out
}

pub fn estimate(bounds: &[RadiusBound]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# orbit of the critical point -lambda/2 of z^2 + lambda z, lambda = exp(2 pi i golden)"
    );
    let _ = writeln!(out, "# j q_j s_j (upper bound on min |z_i| over i = 0..q_j) s_j_decimal");
    for b in bounds {
        let _ = writeln!(out, "{} {} {} {}", b.j, b.q, b.s, b.s.to_decimal_string());
    }
    out
}

pub fn escape(er: &EscapeRadius, poly: &str) -> String {
    format!(
        "poly={poly}\nb={}\nleading_lower={}\ntail_upper={}\nframe={}\n",
        er.b,
        er.leading_lower,
        er.tail_upper,
        frame_string(&er.frame())
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> ComplexBox {
        ComplexBox::new(
            Dyadic::from_i64(-1),
            Dyadic::from_i64(1),
            Dyadic::from_i64(-1),
            Dyadic::from_i64(1),
        )
        .unwrap()
    }

    #[test]
    fn cell_list_layout() {
        let s = CellSet::new(1, vec![(0, 0), (-2, 1)], Some(frame())).unwrap();
        let text = cell_list(&s, "0,0,1", "# m=1", "IN");
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "depth=1 frame=-1,1,-1,1 poly=0,0,1");
        assert_eq!(lines[1], "# m=1");
        assert_eq!(&lines[2..], ["-2 1 IN", "0 0 IN"]);
    }

    #[test]
    fn bitmap_rows_run_top_down() {
        let s = CellSet::new(1, vec![(-2, 1), (1, -2)], Some(frame())).unwrap();
        let (px, side) = bitmap(&s, PIXEL_IN).unwrap();
        assert_eq!(px.len(), 16);
        assert_eq!(px[0], PIXEL_IN);
        assert_eq!(px[15], PIXEL_IN);
        assert_eq!(px.iter().filter(|&&v| v == PIXEL_OUT).count(), 14);
        assert!(side.starts_with("width=4 height=4 depth=1 frame=-1,1,-1,1"));
    }
}
