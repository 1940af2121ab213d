//! The render loops: the sandwich algorithm for filled Julia sets without
//! interior, its Siegel variant with a known inner radius, and the
//! golden-mean inner-radius estimator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::cellset::CellSet;
use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::{Error, Result};
use crate::inner::{census_for, inner_cover_from, InnerCover};
use crate::interval::ComplexBox;
use crate::outer::{
    entry_approx, escape_radius, leaf_depth, preimage_approx_with, CellClass, ClassifiedGrid, OuterOptions,
};
use crate::par::join;
use crate::poly::PolynomialOracle;
use crate::transcendental::{rotation, RotationAngle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub max_k: u32,
    pub max_period: u32,
    pub max_depth: u32,
}

impl Budgets {
    pub const DEFAULT_MAX_K: u32 = 64;
    pub const DEFAULT_MAX_PERIOD: u32 = 12;
    pub const DEFAULT_EXTRA_DEPTH: u32 = 16;

    pub fn for_precision(m: u32) -> Self {
        Budgets {
            max_k: Self::DEFAULT_MAX_K,
            max_period: Self::DEFAULT_MAX_PERIOD,
            max_depth: m + Self::DEFAULT_EXTRA_DEPTH,
        }
    }

    fn check(&self) -> Result<()> {
        if self.max_k == 0 || self.max_period == 0 || self.max_depth == 0 {
            return Err(Error::Precondition("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStatus {
    Certified,
    BudgetExhausted,
}

impl RenderStatus {
    pub fn label(self) -> &'static str {
        match self {
            RenderStatus::Certified => "certified",
            RenderStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// One iteration of a render loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDiagnostic {
    pub k: u32,
    pub periods: u32,
    pub outer_cells: usize,
    pub inner_cells: usize,
    /// Outer cells not covered by the inner set.
    pub uncovered: usize,
    /// Upper bound on the Hausdorff distance between outer and inner sets;
    /// `None` while the inner set is empty.
    pub gap: Option<Dyadic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderResult {
    pub status: RenderStatus,
    /// The certified output, present exactly when `status` is `Certified`.
    pub output: Option<CellSet>,
    pub m: u32,
    /// Iterations used.
    pub k: u32,
    /// Periods whose points were certified.
    pub periods: u32,
    pub budgets: Budgets,
    pub diagnostics: Vec<StepDiagnostic>,
    /// Periodic points that could not be classified.
    pub unresolved: usize,
    /// Why the loop stopped without certifying.
    pub cause: Option<String>,
    /// The trusted inner radius this result depends on, if any.
    pub conditional_on_rho: Option<Dyadic>,
}

impl RenderResult {
    fn exhausted(m: u32, budgets: Budgets, cause: String) -> Self {
        RenderResult {
            status: RenderStatus::BudgetExhausted,
            output: None,
            m,
            k: 0,
            periods: 0,
            budgets,
            diagnostics: Vec::new(),
            unresolved: 0,
            cause: Some(cause),
            conditional_on_rho: None,
        }
    }
}

fn is_budget_error(e: &Error) -> bool {
    matches!(e, Error::Resource(_) | Error::PrecisionExhausted(_) | Error::Dyadic(_))
}

fn step_diagnostic(k: u32, periods: u32, outer: &CellSet, inner: &CellSet) -> Result<StepDiagnostic> {
    let gap = if inner.is_empty() || outer.is_empty() {
        None
    } else {
        Some(outer.hausdorff_upper(inner)?)
    };
    Ok(StepDiagnostic {
        k,
        periods,
        outer_cells: outer.len(),
        inner_cells: inner.len(),
        uncovered: outer.difference(inner)?.len(),
        gap,
    })
}

/// Certified `2^-m` approximation of a filled Julia set with empty interior.
///
/// At step `k` the inner cover uses periods `1..=min(k, max_period)` and the
/// outer set is `p^-k(D)` at tolerance `2^-(m+3)`. The first time the outer
/// set lies inside the inner cover, the inner cover is returned.
pub fn render_filled_julia(p: &PolynomialOracle, m: u32, budgets: Budgets) -> Result<RenderResult> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    budgets.check()?;
    let tol = Dyadic::pow2(-(m as i64 + 3))?;
    let depth = leaf_depth(&tol)?;
    if depth > budgets.max_depth {
        return Ok(RenderResult::exhausted(
            m,
            budgets,
            format!("grid depth {depth} exceeds max depth {}", budgets.max_depth),
        ));
    }
    let er = escape_radius(p)?;
    let mut census = census_for(p, m)?;
    let mut prior: Option<ClassifiedGrid> = None;
    let mut result = RenderResult::exhausted(m, budgets, String::new());
    result.cause = None;

    for k in 1..=budgets.max_k {
        let periods = k.min(budgets.max_period);
        let opts = OuterOptions {
            traps: &[],
            prior: prior.as_ref(),
        };
        let (inner, outer) = join(
            || -> Result<InnerCover> {
                census.extend_to(periods)?;
                inner_cover_from(&census, m)
            },
            || preimage_approx_with(p, &er, k, &tol, &opts),
        );
        result.unresolved = census.unresolved.len();
        let (inner, outer) = match (inner, outer) {
            (Ok(i), Ok(o)) => (i, o),
            (Err(e), _) | (_, Err(e)) => {
                if is_budget_error(&e) {
                    result.cause = Some(format!("step {k}: {e}"));
                    return Ok(result);
                }
                return Err(e);
            }
        };
        let d = outer.covering_set()?;
        result.diagnostics.push(step_diagnostic(k, census.periods_done, &d, &inner.cover)?);
        result.k = k;
        result.periods = census.periods_done;
        if !inner.is_empty() && d.contained_in(&inner.cover) {
            result.status = RenderStatus::Certified;
            result.output = Some(inner.cover);
            return Ok(result);
        }
        prior = Some(outer);
    }
    result.cause = Some(format!(
        "outer set not inside inner cover after {} steps",
        budgets.max_k
    ));
    Ok(result)
}

/// Inputs of the Siegel render and the golden-mean estimator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelParams {
    pub angle: RotationAngle,
    /// Trusted inner radius of the Siegel disk, `0 <= rho < 1`.
    pub rho: Option<Dyadic>,
    /// Convergent index for the estimator.
    pub n: u32,
}

/// Render of the filled Julia set of `z^2 + exp(2 pi i theta) z` given its
/// Siegel disk inner radius `rho`, at precision index `n`.
///
/// `B_k` holds the cells certified to enter `B(0, rho - 2^-k)` within `k`
/// steps. Once `D_k` lies within `2^-(n+1)` of `B_k`, the output is the
/// `2^-(n+1)`-neighborhood of `D_k - B_k`.
pub fn render_siegel_with_radius(sp: &SiegelParams, n: u32, budgets: Budgets) -> Result<RenderResult> {
    let rho = sp
        .rho
        .clone()
        .ok_or_else(|| Error::Precondition("the Siegel render needs an inner radius".into()))?;
    if rho.is_negative() || rho >= Dyadic::one() {
        return Err(Error::Precondition("rho must lie in [0, 1)".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    budgets.check()?;
    let p = PolynomialOracle::siegel_quadratic(sp.angle.clone());
    let tol = Dyadic::pow2(-(n as i64 + 3))?;
    let reach = Dyadic::pow2(-(n as i64 + 1))?;
    let depth = leaf_depth(&tol)?;
    let mut result = RenderResult::exhausted(n, budgets, String::new());
    result.cause = None;
    result.conditional_on_rho = Some(rho.clone());
    if let RotationAngle::Dyadic(t) = &sp.angle {
        result.cause = Some(format!(
            "rotation number {} is rational: no Siegel disk, certification withheld",
            t.to_decimal_string()
        ));
        return Ok(result);
    }
    if depth > budgets.max_depth {
        result.cause = Some(format!("grid depth {depth} exceeds max depth {}", budgets.max_depth));
        return Ok(result);
    }
    let er = escape_radius(&p)?;
    let origin = DyadicComplex::zero();
    let mut prior: Option<ClassifiedGrid> = None;

    for k in 1..=budgets.max_k {
        let w = &rho - &Dyadic::pow2(-(k as i64))?;
        let opts = OuterOptions {
            traps: &[],
            prior: prior.as_ref(),
        };
        let (outer, entry) = join(
            || preimage_approx_with(&p, &er, k, &tol, &opts),
            || entry_approx(&p, &er, &origin, &w, k, &tol),
        );
        let (outer, entry) = match (outer, entry) {
            (Ok(o), Ok(e)) => (o, e),
            (Err(e), _) | (_, Err(e)) => {
                if is_budget_error(&e) {
                    result.cause = Some(format!("step {k}: {e}"));
                    return Ok(result);
                }
                return Err(e);
            }
        };
        let d = outer.covering_set()?;
        let b = entry.cells_of(&[CellClass::In])?;
        result.diagnostics.push(step_diagnostic(k, 0, &d, &b)?);
        result.k = k;
        if !b.is_empty() && d.contained_in(&b.neighborhood(&reach)?) {
            let rest = d.difference(&b)?;
            result.status = RenderStatus::Certified;
            result.output = Some(rest.neighborhood(&reach)?);
            return Ok(result);
        }
        prior = Some(outer);
    }
    result.cause = Some(format!(
        "outer set not within the inner neighborhood after {} steps",
        budgets.max_k
    ));
    Ok(result)
}

/// Largest convergent index accepted by the estimator.
pub const GOLDEN_MAX_INDEX: u32 = 16;
const GOLDEN_ESCALATIONS: u32 = 8;

/// One term of the golden-mean estimator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusBound {
    pub j: u32,
    /// Fibonacci denominator of the `j`-th convergent.
    pub q: u64,
    /// Upper bound on the least distance from `0` of the first `q + 1`
    /// critical orbit points.
    pub s: Dyadic,
}

/// Denominators `q_1 = 1, q_2 = 2, q_3 = 3, q_4 = 5, ...` of the convergents
/// of the golden mean.
pub fn fibonacci_denominators(n: u32) -> Vec<u64> {
    let (mut a, mut b) = (1u64, 2u64);
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(a);
        let c = a + b;
        a = b;
        b = c;
    }
    out
}

/// Certified upper bounds `s_1 >= ... >= s_n` on the distance from the Siegel
/// fixed point `0` to the orbit of the critical point `-lambda/2` of
/// `z^2 + lambda z`, `lambda = exp(2 pi i theta)` with `theta` the golden
/// mean, taken over the first `q_j + 1` orbit points.
pub fn golden_inner_radius_upper(n: u32, prec: u32) -> Result<Vec<RadiusBound>> {
    if n == 0 || n > GOLDEN_MAX_INDEX {
        return Err(Error::Precondition(format!("n must lie in 1..={GOLDEN_MAX_INDEX}")));
    }
    let qs = fibonacci_denominators(n);
    let steps = *qs.last().expect("n >= 1");
    let mut prec = prec.max(32);
    for _ in 0..=GOLDEN_ESCALATIONS {
        if let Some(out) = golden_attempt(&qs, steps, prec)? {
            return Ok(out);
        }
        prec *= 2;
    }
    Err(Error::Resource(format!("golden orbit needs more than {prec} bits")))
}

fn golden_attempt(qs: &[u64], steps: u64, prec: u32) -> Result<Option<Vec<RadiusBound>>> {
    let p = PolynomialOracle::siegel_quadratic(RotationAngle::Golden);
    let pp = p.prepare(prec)?;
    let lambda = rotation(&RotationAngle::Golden, prec)?;
    let mut z: ComplexBox = lambda.mul_pow2(-1)?.neg();
    let limit = Dyadic::pow2(-((prec / 2) as i64))?;
    let mag_prec = prec as i64;
    let mut best = z.mag_upper(mag_prec)?;
    let mut out = Vec::with_capacity(qs.len());
    let mut next = 0;
    for i in 1..=steps {
        z = pp.eval(&z)?;
        if z.width() > limit {
            return Ok(None);
        }
        best = best.min(z.mag_upper(mag_prec)?);
        while next < qs.len() && qs[next] == i {
            out.push(RadiusBound {
                j: next as u32 + 1,
                q: qs[next],
                s: best.clone(),
            });
            next += 1;
        }
    }
    Ok(Some(out))
}

/// Plain-text account of a render run: per-step sizes and gaps, the gap
/// trend and the unresolved classifications met.
pub fn certify_hypothesis_diagnostics(result: &RenderResult) -> String {
    if result.diagnostics.is_empty() {
        return String::new();
    }
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", result.status.label());
    if let Some(cause) = &result.cause {
        let _ = writeln!(out, "cause: {cause}");
    }
    let _ = writeln!(out, "step periods outer inner uncovered gap");
    for d in &result.diagnostics {
        let gap = d
            .gap
            .as_ref()
            .map(|g| g.to_decimal_string())
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            d.k, d.periods, d.outer_cells, d.inner_cells, d.uncovered, gap
        );
    }
    let _ = writeln!(out, "gap trend: {}", gap_trend(&result.diagnostics).describe());
    let _ = writeln!(out, "unresolved periodic points: {}", result.unresolved);
    out
}

/// Shape of the gap sequence over a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapTrend {
    Undefined,
    /// The last quarter of the run varies by at most an eighth of its final value.
    Stable { last: Dyadic },
    Shrinking { first: Dyadic, last: Dyadic },
    Growing { first: Dyadic, last: Dyadic },
}

impl GapTrend {
    fn describe(&self) -> String {
        match self {
            GapTrend::Undefined => "undefined (inner set always empty)".into(),
            GapTrend::Stable { last } if last.is_positive() => {
                format!("stable positive gap near {}", last.to_decimal_string())
            }
            GapTrend::Stable { last } => format!("stable at {}", last.to_decimal_string()),
            GapTrend::Shrinking { first, last } => format!(
                "shrinking toward 0, from {} to {}",
                first.to_decimal_string(),
                last.to_decimal_string()
            ),
            GapTrend::Growing { first, last } => format!(
                "growing, from {} to {}",
                first.to_decimal_string(),
                last.to_decimal_string()
            ),
        }
    }
}

pub fn gap_trend(diagnostics: &[StepDiagnostic]) -> GapTrend {
    let gaps: Vec<&Dyadic> = diagnostics.iter().filter_map(|d| d.gap.as_ref()).collect();
    let (Some(&first), Some(&last)) = (gaps.first(), gaps.last()) else {
        return GapTrend::Undefined;
    };
    let window = &gaps[gaps.len() - (gaps.len() / 4).max(2).min(gaps.len())..];
    let lo = window.iter().copied().min().expect("non-empty");
    let hi = window.iter().copied().max().expect("non-empty");
    let slack = last.mul_pow2(-3).unwrap_or_else(|_| Dyadic::zero());
    if gaps.len() >= 2 && &(hi - lo) <= &slack {
        GapTrend::Stable { last: last.clone() }
    } else if last < first {
        GapTrend::Shrinking {
            first: first.clone(),
            last: last.clone(),
        }
    } else if gaps.len() < 2 || last == first {
        GapTrend::Stable { last: last.clone() }
    } else {
        GapTrend::Growing {
            first: first.clone(),
            last: last.clone(),
        }
    }
}
