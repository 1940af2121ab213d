//! Runs a validated config and writes its outputs atomically.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use certjulia_core::inner::census_for;
use certjulia_core::outer::escape_radius;
use certjulia_core::render::{
    certify_hypothesis_diagnostics, golden_inner_radius_upper, render_filled_julia, render_siegel_with_radius,
    RenderResult, RenderStatus, SiegelParams,
};

use crate::config::{RunConfig, Subcommand, DEFAULT_POINTS_M};
use crate::formats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;

/// Working precision of the golden-mean estimator; raised automatically.
const ESTIMATE_PREC: u32 = 128;

#[derive(Debug)]
pub enum DispatchError {
    Compute(certjulia_core::Error),
    Io(io::Error),
    Output(String),
}

impl std::fmt::Display for DispatchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DispatchError::Compute(e) => write!(f, "{e}"),
            DispatchError::Io(e) => write!(f, "i/o error: {e}"),
            DispatchError::Output(e) => f.write_str(e),
        }
    }
}

impl From<certjulia_core::Error> for DispatchError {
    fn from(e: certjulia_core::Error) -> Self {
        DispatchError::Compute(e)
    }
}

impl From<io::Error> for DispatchError {
    fn from(e: io::Error) -> Self {
        DispatchError::Io(e)
    }
}

/// Files to publish together, or text for stdout when no path is set.
#[derive(Default)]
struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
    stdout: Option<String>,
}

impl Outputs {
    fn text(&mut self, path: Option<&PathBuf>, body: String) {
        match path {
            Some(p) => self.files.push((p.clone(), body.into_bytes())),
            None => self.stdout = Some(body),
        }
    }

    /// Writes every file to a temporary sibling first and renames only once
    /// all of them are complete.
    fn publish(self) -> io::Result<()> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, bytes) in &self.files {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            staged.push((tmp, path));
        }
        for (tmp, path) in staged {
            tmp.persist(path).map_err(|e| e.error)?;
        }
        if let Some(s) = self.stdout {
            io::stdout().write_all(s.as_bytes())?;
        }
        Ok(())
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn render_outputs(cfg: &RunConfig, r: &RenderResult, poly: &str) -> Result<(Outputs, i32), DispatchError> {
    let out = cfg.out.as_ref().expect("validated: render needs --out");
    let prov = formats::provenance(r, poly);
    let mut o = Outputs::default();
    match (&r.status, &r.output) {
        (RenderStatus::Certified, Some(set)) => {
            o.files
                .push((out.clone(), formats::cell_list(set, poly, &prov, "IN").into_bytes()));
            if let Some(b) = &cfg.bitmap {
                let (px, sidecar) = formats::bitmap(set, formats::PIXEL_IN).map_err(DispatchError::Output)?;
                o.files.push((b.clone(), px));
                o.files.push((with_suffix(b, ".txt"), format!("{sidecar}{prov}\n").into_bytes()));
            }
            Ok((o, EXIT_OK))
        }
        _ => {
            let report = certify_hypothesis_diagnostics(r);
            let cause = r.cause.as_deref().unwrap_or("budget exhausted");
            let body = format!("{prov}\n# {cause}\n{report}");
            o.files.push((with_suffix(out, ".diag"), body.into_bytes()));
            Ok((o, EXIT_NOT_CERTIFIED))
        }
    }
}

fn run(cfg: &RunConfig) -> Result<(Outputs, i32), DispatchError> {
    let poly_desc = cfg.poly_desc.clone().unwrap_or_default();
    match cfg.command {
        Subcommand::Render => {
            let p = cfg.poly.as_ref().expect("validated");
            let m = cfg.m.expect("validated");
            let r = render_filled_julia(p, m, cfg.budgets)?;
            render_outputs(cfg, &r, &poly_desc)
        }
        Subcommand::SiegelRender => {
            let sp = SiegelParams {
                angle: cfg.angle.clone().expect("validated"),
                rho: cfg.rho.clone(),
                n: cfg.n.unwrap_or(1),
            };
            let r = render_siegel_with_radius(&sp, cfg.m.expect("validated"), cfg.budgets)?;
            render_outputs(cfg, &r, &poly_desc)
        }
        Subcommand::Points => {
            let p = cfg.poly.as_ref().expect("validated");
            let mut census = census_for(p, cfg.m.unwrap_or(DEFAULT_POINTS_M))?;
            census.extend_to(cfg.budgets.max_period)?;
            let mut o = Outputs::default();
            o.text(cfg.out.as_ref(), formats::certificates(&census, &poly_desc));
            Ok((o, EXIT_OK))
        }
        Subcommand::SiegelEstimate => {
            let bounds = golden_inner_radius_upper(cfg.n.expect("validated"), ESTIMATE_PREC)?;
            let mut o = Outputs::default();
            o.text(cfg.out.as_ref(), formats::estimate(&bounds));
            Ok((o, EXIT_OK))
        }
        Subcommand::Escape => {
            let er = escape_radius(cfg.poly.as_ref().expect("validated"))?;
            let mut o = Outputs::default();
            o.text(cfg.out.as_ref(), formats::escape(&er, &poly_desc));
            Ok((o, EXIT_OK))
        }
    }
}

/// Runs `cfg` on a pool of `cfg.workers` threads and returns the exit code.
pub fn dispatch(cfg: &RunConfig) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} workers: {e}", cfg.workers);
            return EXIT_FAILURE;
        }
    };
    let result = pool.install(|| run(cfg));
    match result {
        Ok((outputs, code)) => match outputs.publish() {
            Ok(()) => {
                if code == EXIT_NOT_CERTIFIED {
                    eprintln!("not certified within budget; diagnostics written");
                }
                code
            }
            Err(e) => {
                eprintln!("error: writing output: {e}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}
