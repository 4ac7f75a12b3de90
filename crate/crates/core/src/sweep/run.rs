use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use thiserror::Error;

use super::config::{SweepAxis, SweepConfig};
use super::csv::{fit_header, fmt_g17, render, ResultRow, SCHEMA_VERSION};
use crate::bloch::canonical_flux;
use crate::ed::InteractingSsh;
use crate::error::Error;
use crate::models::{
    build_band_model, lookup, LatticeKind, ModelKind, TwoBandModel, ZeroCondition,
};
use crate::scan::{
    flux_samples_with_critical, least_squares, FidelityEngine, PointResult, SystemSize,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure at {sample}: {source}")]
    Numerical {
        sample: String,
        #[source]
        source: Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SweepError {
    /// Process exit status: 2 for configuration and I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Numerical { .. } => 3,
            _ => 2,
        }
    }

    fn at(sample: String, source: Error) -> Self {
        if source.is_numerical() {
            SweepError::Numerical { sample, source }
        } else {
            SweepError::Config(format!("{source} (at {sample})"))
        }
    }
}

/// A registry model ready to evaluate.
pub enum Engine {
    Band(Box<dyn TwoBandModel>),
    Interacting(InteractingSsh),
}

impl Engine {
    pub fn build(model: &str, params: &BTreeMap<String, f64>) -> crate::Result<Self> {
        let entry = lookup(model)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model `{model}`")))?;
        match entry.kind {
            ModelKind::Band(_) => Ok(Engine::Band(build_band_model(model, params)?)),
            ModelKind::Interacting => {
                let u = params
                    .get("u")
                    .copied()
                    .or_else(|| entry.param("u").map(|p| p.default))
                    .unwrap_or(0.0);
                Ok(Engine::Interacting(InteractingSsh { u }))
            }
        }
    }
}

impl FidelityEngine for Engine {
    fn engine_name(&self) -> &str {
        match self {
            Engine::Band(m) => m.name(),
            Engine::Interacting(e) => e.engine_name(),
        }
    }

    fn lattice_kind(&self) -> LatticeKind {
        match self {
            Engine::Band(m) => m.lattice(),
            Engine::Interacting(e) => e.lattice_kind(),
        }
    }

    fn evaluate(
        &self,
        a: f64,
        b: f64,
        size: SystemSize,
        phi: f64,
        phi_y: f64,
    ) -> crate::Result<PointResult> {
        match self {
            Engine::Band(m) => m.as_ref().evaluate(a, b, size, phi, phi_y),
            Engine::Interacting(e) => e.evaluate(a, b, size, phi, phi_y),
        }
    }

    fn critical_momenta(&self, a: f64, b: f64) -> crate::Result<ZeroCondition> {
        match self {
            Engine::Band(m) => m.as_ref().critical_momenta(a, b),
            Engine::Interacting(e) => e.critical_momenta(a, b),
        }
    }

    fn alpha_prime(
        &self,
        a: f64,
        b: f64,
        size: SystemSize,
        phi: f64,
        phi_y: f64,
    ) -> crate::Result<f64> {
        match self {
            Engine::Band(m) => m.as_ref().alpha_prime(a, b, size, phi, phi_y),
            Engine::Interacting(e) => e.alpha_prime(a, b, size, phi, phi_y),
        }
    }
}

/// Straight-line fit of α against 1/(mode count) for one series of a size sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub model: String,
    pub param: f64,
    pub param_tilde: f64,
    pub ly: usize,
    pub phi: f64,
    pub phi_y: f64,
    pub n_points: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

impl FitRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            SCHEMA_VERSION,
            self.model,
            fmt_g17(self.param),
            fmt_g17(self.param_tilde),
            self.ly,
            fmt_g17(self.phi),
            fmt_g17(self.phi_y),
            self.n_points,
            fmt_g17(self.slope),
            fmt_g17(self.intercept),
            fmt_g17(self.r2),
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    pub fits: Vec<FitRow>,
}

impl SweepOutcome {
    pub fn exact_zero_rows(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| r.exact_zero)
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    b: f64,
    size: SystemSize,
    phi: f64,
    injected: bool,
}

fn describe(config: &SweepConfig, p: &Point) -> String {
    format!(
        "{} {}={} {}_tilde={} size={} phi={} ({}pi)",
        config.model,
        config.entry().driving,
        fmt_g17(config.param),
        config.entry().driving,
        fmt_g17(p.b),
        p.size,
        fmt_g17(p.phi),
        fmt_g17(p.phi / std::f64::consts::PI),
    )
}

fn system_size(config: &SweepConfig, extent: usize) -> SystemSize {
    match config.ly {
        Some(ly) => SystemSize::Honeycomb { lx: extent, ly },
        None => SystemSize::Chain(extent),
    }
}

fn canonical(config: &SweepConfig, phi: f64) -> Result<f64, SweepError> {
    canonical_flux(phi).map_err(|e| SweepError::Config(format!("{e} in `{}`", config.model)))
}

/// Sample points in output order: sizes, then fluxes, then second-point values
/// for a parameter sweep; sizes, then second-point values, then fluxes for a
/// flux sweep; fluxes, then second-point values, then sizes for a size sweep.
fn points(config: &SweepConfig, engine: &Engine) -> Result<Vec<Point>, SweepError> {
    let a = config.param;
    let mut out = Vec::new();
    match config.axis {
        SweepAxis::Param => {
            for &l in &config.sizes {
                for &phi in &config.phis {
                    let phi = canonical(config, phi)?;
                    for &b in &config.samples {
                        out.push(Point {
                            b,
                            size: system_size(config, l),
                            phi,
                            injected: false,
                        });
                    }
                }
            }
        }
        SweepAxis::Flux => {
            for &l in &config.sizes {
                let size = system_size(config, l);
                for &b in &config.param_tilde {
                    let merged = flux_samples_with_critical(engine, a, b, size, &config.samples)
                        .map_err(|e| {
                            SweepError::at(
                                describe(
                                    config,
                                    &Point {
                                        b,
                                        size,
                                        phi: f64::NAN,
                                        injected: false,
                                    },
                                ),
                                e,
                            )
                        })?;
                    out.extend(merged.into_iter().map(|(phi, injected)| Point {
                        b,
                        size,
                        phi,
                        injected,
                    }));
                }
            }
        }
        SweepAxis::Size => {
            for &phi in &config.phis {
                let phi = canonical(config, phi)?;
                for &b in &config.param_tilde {
                    for &l in &config.sizes {
                        out.push(Point {
                            b,
                            size: system_size(config, l),
                            phi,
                            injected: false,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn row(config: &SweepConfig, p: &Point, r: PointResult, alpha_prime: Option<f64>) -> ResultRow {
    let fixed = |k: &str| config.fixed_params.get(k).copied();
    let (lx, ly) = match p.size {
        SystemSize::Chain(l) => (l, 1),
        SystemSize::Honeycomb { lx, ly } => (lx, ly),
    };
    ResultRow {
        model: config.model.clone(),
        param: config.param,
        param_tilde: p.b,
        lx,
        ly,
        phi: p.phi,
        phi_y: config.phi_y,
        jv_over_2j: fixed("jv_over_2j"),
        t1: fixed("t1"),
        t2: fixed("t2"),
        m: fixed("m"),
        u: fixed("u"),
        fidelity: r.fidelity,
        alpha: r.alpha,
        alpha_prime,
        exact_zero: r.exact_zero,
        injected: p.injected,
    }
}

/// Evaluate every sample of `config`. Nothing is written.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome, SweepError> {
    let engine = Engine::build(&config.model, &config.fixed_params)
        .map_err(|e| SweepError::Config(e.to_string()))?;
    let pts = points(config, &engine)?;
    let a = config.param;
    let results: Vec<crate::Result<ResultRow>> = pts
        .par_iter()
        .map(|p| {
            let r = engine.evaluate(a, p.b, p.size, p.phi, config.phi_y)?;
            let ap = if config.alpha_prime && !r.exact_zero {
                Some(engine.alpha_prime(a, p.b, p.size, p.phi, config.phi_y)?)
            } else {
                None
            };
            Ok(row(config, p, r, ap))
        })
        .collect();
    let mut rows = Vec::with_capacity(pts.len());
    for (p, r) in pts.iter().zip(results) {
        rows.push(r.map_err(|e| SweepError::at(describe(config, p), e))?);
    }

    let mut fits = Vec::new();
    if config.axis == SweepAxis::Size && config.sizes.len() >= 3 {
        for (series, chunk) in rows.chunks(config.sizes.len()).enumerate() {
            let p = &pts[series * config.sizes.len()];
            if let Some(bad) = chunk.iter().find(|r| r.alpha.is_infinite()) {
                let modes = bad.lx * bad.ly;
                return Err(SweepError::at(
                    describe(config, p),
                    Error::DivergentPoint { size: modes },
                ));
            }
            let x: Vec<f64> = chunk.iter().map(|r| 1.0 / (r.lx * r.ly) as f64).collect();
            let y: Vec<f64> = chunk.iter().map(|r| r.alpha).collect();
            let (slope, intercept, r2) = least_squares(&x, &y, None)
                .map_err(|e| SweepError::Config(format!("{e} (at {})", describe(config, p))))?;
            fits.push(FitRow {
                model: config.model.clone(),
                param: config.param,
                param_tilde: p.b,
                ly: chunk[0].ly,
                phi: p.phi,
                phi_y: config.phi_y,
                n_points: chunk.len(),
                slope,
                intercept,
                r2,
            });
        }
    }
    Ok(SweepOutcome { rows, fits })
}

/// `<stem>_fit.csv` next to `path`.
pub fn fit_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_fit.csv"))
}

/// `<path>.meta`
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), SweepError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| SweepError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Run metadata; kept out of the data file so that file stays byte-identical across runs.
#[derive(Debug, Clone)]
pub struct RunMeta {
    pub command: String,
    pub workers: usize,
    pub wall_time: Duration,
}

/// Write the data CSV, the fit CSV for size sweeps and the metadata sidecar.
pub fn write_outputs(
    config: &SweepConfig,
    outcome: &SweepOutcome,
    meta: &RunMeta,
) -> Result<Vec<PathBuf>, SweepError> {
    let path = &config.output_path;
    write_file(path, &render(&outcome.rows))?;
    let mut written = vec![path.clone()];
    if !outcome.fits.is_empty() {
        let mut s = fit_header();
        s.push('\n');
        for f in &outcome.fits {
            s.push_str(&f.to_csv_line());
            s.push('\n');
        }
        let fp = fit_path(path);
        write_file(&fp, &s)?;
        written.push(fp);
    }
    let mut m = String::new();
    let _ = writeln!(m, "library = fidzero {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "schema_version = {SCHEMA_VERSION}");
    let _ = writeln!(m, "command = {}", meta.command);
    let _ = writeln!(m, "workers = {}", meta.workers);
    let _ = writeln!(m, "wall_time_s = {:.3}", meta.wall_time.as_secs_f64());
    let _ = writeln!(m, "rows = {}", outcome.rows.len());
    let _ = writeln!(m, "exact_zero_rows = {}", outcome.exact_zero_rows().count());
    let _ = writeln!(m, "\n# config\n{}", config.to_config_text());
    write_file(&meta_path(path), &m)?;
    Ok(written)
}

/// One-line report of the run, listing where exact zeros occurred.
pub fn summary(config: &SweepConfig, outcome: &SweepOutcome) -> String {
    let zeros: Vec<&ResultRow> = outcome.exact_zero_rows().collect();
    let mut s = format!(
        "{}: {} rows -> {}",
        config.model,
        outcome.rows.len(),
        config.output_path.display()
    );
    if zeros.is_empty() {
        s.push_str("; no exact zeros");
    } else {
        let shown: Vec<String> = zeros
            .iter()
            .take(5)
            .map(|r| {
                format!(
                    "({}_tilde={}, phi/pi={}, lx={})",
                    config.entry().driving,
                    fmt_g17(r.param_tilde),
                    fmt_g17(r.phi / std::f64::consts::PI),
                    r.lx
                )
            })
            .collect();
        let _ = write!(s, "; {} exact zeros at {}", zeros.len(), shown.join(" "));
        if zeros.len() > 5 {
            s.push_str(" ...");
        }
    }
    for f in &outcome.fits {
        let _ = write!(
            s,
            "; slope({}_tilde={}) = {}",
            config.entry().driving,
            fmt_g17(f.param_tilde),
            fmt_g17(f.slope)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::parse_config;
    use std::f64::consts::PI;

    fn config(text: &str) -> SweepConfig {
        parse_config(text, None).unwrap()
    }

    #[test]
    fn param_sweep_zero_pattern() {
        let c = config(
            "[model]\nname = ssh\ngamma = 0.5\n[system]\nL = 9\nphi = 0, 0.9pi, pi\n[sweep]\naxis = param\nstart = 0.1\nstop = 2.0\ncount = 200\n[output]\npath = a.csv\n",
        );
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.rows.len(), 600);
        for r in &out.rows {
            assert_eq!(r.exact_zero, r.phi == PI && r.param_tilde > 1.0, "{r:?}");
        }
    }

    #[test]
    fn flux_sweep_marks_injected_rows() {
        let c = config(
            "[model]\nname = creutz\ntheta = 0.3\ntheta_tilde = -0.3\njv_over_2j = 0.6\n[system]\nL = 10\n[sweep]\naxis = flux\nstart = 0\nstop = 1.99pi\ncount = 200\n[output]\npath = b.csv\n",
        );
        let out = run_sweep(&c).unwrap();
        let injected: Vec<&ResultRow> = out.rows.iter().filter(|r| r.injected).collect();
        assert_eq!(injected.len(), 2);
        assert!(injected
            .iter()
            .all(|r| r.exact_zero && r.alpha.is_infinite()));
        assert!(out.rows.windows(2).all(|w| w[0].phi <= w[1].phi));
    }

    #[test]
    fn size_sweep_fits_each_series() {
        let c = config(
            "[model]\nname = ssh\ngamma = 0.5\ngamma_tilde = 0.8, 1.5\n[system]\nphi = 0\n[sweep]\naxis = size\nsamples = 101, 201, 301, 401\n[output]\npath = c.csv\n",
        );
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.rows.len(), 8);
        assert_eq!(out.fits.len(), 2);
        assert!(out.fits[0].slope.abs() < 0.01);
        assert!((out.fits[1].slope + 2f64.ln()).abs() < 0.02);
    }

    #[test]
    fn gapless_sample_is_numerical() {
        let c = config(
            "[model]\nname = ssh\ngamma = 0.5\n[system]\nL = 9\nphi = pi\n[sweep]\naxis = param\nsamples = 0.5, 1.0\n[output]\npath = d.csv\n",
        );
        let err = run_sweep(&c).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("gamma_tilde=1"), "{err}");
    }

    #[test]
    fn divergent_size_point_is_numerical() {
        let c = config(
            "[model]\nname = ssh\ngamma = 0.5\ngamma_tilde = 1.5\n[system]\nphi = pi\n[sweep]\naxis = size\nsamples = 9, 11, 13\n[output]\npath = e.csv\n",
        );
        assert_eq!(run_sweep(&c).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn file_names() {
        assert_eq!(
            fit_path(Path::new("out/fig1b.csv")),
            PathBuf::from("out/fig1b_fit.csv")
        );
        assert_eq!(
            meta_path(Path::new("out/fig1b.csv")),
            PathBuf::from("out/fig1b.csv.meta")
        );
    }

    #[test]
    fn summary_lists_zeros() {
        let c = config(
            "[model]\nname = ssh\ngamma = 0.5\n[system]\nL = 9\nphi = pi\n[sweep]\naxis = param\nsamples = 0.5, 1.5\n[output]\npath = f.csv\n",
        );
        let s = summary(&c, &run_sweep(&c).unwrap());
        assert!(
            s.contains("1 exact zeros at (gamma_tilde=1.5, phi/pi=1"),
            "{s}"
        );
    }
}
