use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use super::config::{linspace, parse_config, SweepConfig};
use super::csv::{fmt_g17, SCHEMA_VERSION};
use super::run::{run_sweep, write_outputs, RunMeta, SweepError};
use crate::models::haldane_critical_line;
use crate::scan::critical_flux_1d;

pub const FIGURE_IDS: [&str; 16] = [
    "1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b", "4c", "5a", "5b", "7a", "7b", "7c", "8a", "8b",
];

const SSH_SIZES: &str = "9, 19, 199, 999";
const CREUTZ_SIZES: &str = "10, 50, 500, 2000";

fn ssh_param(out: &str, sizes: &str, extra: &str) -> String {
    format!(
        "[model]\nname = ssh\ngamma = 0.5\n\n[system]\nL = {sizes}\nphi = pbc\n\n[sweep]\naxis = param\n{extra}\n\n[output]\npath = {out}\n"
    )
}

fn creutz(body: &str, out: &str) -> String {
    format!(
        "[model]\nname = creutz\ntheta = 0.3\njv_over_2j = 0.6\n{body}\n[output]\npath = {out}\n"
    )
}

fn haldane(lx: usize, out: &str) -> String {
    format!(
        "[model]\nname = haldane\ntheta = 0\nt1 = 1\nt2 = 1\nm = 4.5\n\n[system]\nlx = {lx}\nly = 4\nphi = 0, 2pi/3, 4pi/3\n\n[sweep]\naxis = param\nstart = -pi\nstop = pi\ncount = 401\n\n[output]\npath = {out}\n"
    )
}

/// Bundled config texts for one figure panel, in run order. Sample grids
/// step around exact gap closings and degenerate ground states.
pub fn figure_config_texts(id: &str) -> Option<Vec<String>> {
    let ssh_grid = "start = 0.01\nstop = 2\ncount = 200";
    let ssh_limits = |out: &str| {
        format!(
            "[model]\nname = ssh\ngamma = 0.5\ngamma_tilde = 0.8, 0.9, 1.3, 1.5\n\n[system]\nphi = pbc\n\n[sweep]\naxis = size\nstart = 101\nstop = 2001\ncount = 20\n\n[output]\npath = {out}\n"
        )
    };
    let creutz_grid = "start = -0.5pi\nstop = 0.5pi\ncount = 301";
    let texts = match id {
        "1a" => vec![ssh_param("fig1a.csv", SSH_SIZES, ssh_grid)],
        "1b" => vec![ssh_limits("fig1b.csv")],
        "2a" => vec![ssh_param("fig2a.csv", SSH_SIZES, ssh_grid), ssh_limits("fig2a_limits.csv")],
        "2b" => vec![ssh_param("fig2b.csv", SSH_SIZES, "start = 0.1\nstop = 2\ncount = 1901\nalpha_prime = true")],
        "3a" => vec![ssh_param("fig3a.csv", "9", "start = 0.1\nstop = 2\ncount = 200").replace(
            "phi = pbc",
            "phi = pbc, 0.9pi, apbc",
        )],
        "3b" => vec![
            "[model]\nname = ssh\ngamma = 0.5\ngamma_tilde = 1.5, 0.8\n\n[system]\nL = 9\n\n[sweep]\naxis = flux\nstart = 0\nstop = 1.99pi\ncount = 200\n\n[output]\npath = fig3b.csv\n"
                .to_string(),
        ],
        "4a" | "4b" => {
            let mut v = vec![creutz(
                &format!("\n[system]\nL = {CREUTZ_SIZES}\nphi = pbc\n\n[sweep]\naxis = param\n{creutz_grid}\n"),
                &format!("fig{id}.csv"),
            )];
            if id == "4b" {
                v.push(creutz(
                    "theta_tilde = -0.3, -0.1, 1.1, 1.5\n\n[system]\nphi = pbc\n\n[sweep]\naxis = size\nstart = 100\nstop = 2000\ncount = 20\n",
                    "fig4b_limits.csv",
                ));
            }
            v
        }
        "4c" => vec![creutz(
            &format!(
                "\n[system]\nL = {CREUTZ_SIZES}\nphi = pbc\n\n[sweep]\naxis = param\nstart = -1.5\nstop = 1.5\ncount = 3001\nalpha_prime = true\n"
            ),
            "fig4c.csv",
        )],
        "5a" => {
            let kc = (-0.6f64).acos();
            let (minus, plus) = (critical_flux_1d(-kc, 10), critical_flux_1d(kc, 10));
            vec![creutz(
                &format!(
                    "\n[system]\nL = 10\nphi = 0, 0.5pi, {}, {}\n\n[sweep]\naxis = param\nstart = -0.5pi\nstop = 0.5pi\ncount = 300\n",
                    fmt_g17(minus),
                    fmt_g17(plus)
                ),
                "fig5a.csv",
            )]
        }
        "5b" => vec![creutz(
            "theta_tilde = -0.3, 1.1\n\n[system]\nL = 10\n\n[sweep]\naxis = flux\nstart = 0\nstop = 1.99pi\ncount = 200\n",
            "fig5b.csv",
        )],
        "7a" => vec![haldane(4, "fig7a.csv")],
        "7b" => vec![haldane(6, "fig7b.csv")],
        "7c" => vec![haldane(8, "fig7c.csv")],
        "8a" => vec![
            "[model]\nname = ssh-interacting\ngamma = 0.2\nu = 0.1\n\n[system]\nL = 5\nphi = pbc, 0.9pi, apbc\n\n[sweep]\naxis = param\nstart = 0.005\nstop = 1.995\ncount = 200\n\n[output]\npath = fig8a.csv\n"
                .to_string(),
        ],
        "8b" => vec![
            "[model]\nname = ssh-interacting\ngamma = 0.2\nu = 0.1\ngamma_tilde = 2, 0.7\n\n[system]\nL = 5\n\n[sweep]\naxis = flux\nstart = 0\nstop = 1.99pi\ncount = 200\n\n[output]\npath = fig8b.csv\n"
                .to_string(),
        ],
        _ => return None,
    };
    Some(texts)
}

pub fn figure_configs(id: &str) -> Result<Vec<SweepConfig>, SweepError> {
    let texts = figure_config_texts(id).ok_or_else(|| {
        SweepError::Config(format!(
            "unknown figure `{id}`; expected one of {} or all",
            FIGURE_IDS.join(", ")
        ))
    })?;
    texts
        .iter()
        .map(|t| {
            parse_config(t, None)
                .map_err(|e| SweepError::Config(format!("bundled config for {id}: {e}")))
        })
        .collect()
}

/// Haldane phase boundary `M/t₂ = ±3√3 sin θ` over one period.
pub fn haldane_phase_boundary_csv() -> String {
    let mut s = String::from("schema_version,theta,m_over_t2_plus,m_over_t2_minus\n");
    for theta in linspace(-PI, PI, 401) {
        let (plus, minus) = haldane_critical_line(theta);
        s.push_str(&format!(
            "{SCHEMA_VERSION},{},{},{}\n",
            fmt_g17(theta),
            fmt_g17(plus),
            fmt_g17(minus)
        ));
    }
    s
}

/// Report for one reproduced panel.
#[derive(Debug, Clone)]
pub struct Reproduced {
    pub id: String,
    pub written: Vec<PathBuf>,
    pub summaries: Vec<String>,
}

/// Run every bundled config for `id` (or every panel for `all`) into `out_dir`.
pub fn reproduce(id: &str, out_dir: &Path, workers: usize) -> Result<Vec<Reproduced>, SweepError> {
    let ids: Vec<&str> = if id == "all" {
        FIGURE_IDS.to_vec()
    } else {
        vec![id]
    };
    let mut all = Vec::new();
    // validate every id before running anything
    let plans: Vec<(&str, Vec<SweepConfig>)> = ids
        .iter()
        .map(|&i| figure_configs(i).map(|c| (i, c)))
        .collect::<Result<_, _>>()?;
    for (id, configs) in plans {
        let mut rep = Reproduced {
            id: id.to_string(),
            written: Vec::new(),
            summaries: Vec::new(),
        };
        for mut config in configs {
            config.output_path = out_dir.join(&config.output_path);
            let start = std::time::Instant::now();
            let outcome = run_sweep(&config)?;
            let meta = RunMeta {
                command: format!("reproduce {id}"),
                workers,
                wall_time: start.elapsed(),
            };
            rep.written.extend(write_outputs(&config, &outcome, &meta)?);
            rep.summaries.push(super::run::summary(&config, &outcome));
        }
        if id.starts_with('7') {
            let path = out_dir.join("haldane_phase_boundary.csv");
            std::fs::create_dir_all(out_dir).map_err(|source| SweepError::Io {
                path: out_dir.to_path_buf(),
                source,
            })?;
            std::fs::write(&path, haldane_phase_boundary_csv()).map_err(|source| {
                SweepError::Io {
                    path: path.clone(),
                    source,
                }
            })?;
            rep.written.push(path);
        }
        all.push(rep);
    }
    Ok(all)
}
