//! Config-driven parameter, flux and size sweeps written as deterministic CSV.
//!
//! A config is a small sectioned `key = value` file:
//!
//! ```text
//! [model]
//! name = ssh
//! gamma = 0.5
//!
//! [system]
//! L = 9
//! phi = pbc, 0.9pi, apbc
//!
//! [sweep]
//! axis = param
//! start = 0.1
//! stop = 2.0
//! count = 200
//!
//! [output]
//! path = fig3a.csv
//! ```

mod config;
mod csv;
mod reproduce;
mod run;

pub use config::{linspace, parse_config, parse_real, SweepAxis, SweepConfig};
pub use csv::{fmt_g17, header, render, ResultRow, COLUMNS, FIT_COLUMNS, SCHEMA_VERSION};
pub use reproduce::{
    figure_config_texts, figure_configs, haldane_phase_boundary_csv, reproduce, Reproduced,
    FIGURE_IDS,
};
pub use run::{
    fit_path, meta_path, run_sweep, summary, write_outputs, Engine, FitRow, RunMeta, SweepError,
    SweepOutcome,
};
