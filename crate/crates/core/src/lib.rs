//! Ground-state fidelity of band insulators and an interacting chain under
//! twisted boundary conditions, with tooling to locate its exact zeros.

pub mod bloch;
pub mod ed;
pub mod error;
pub mod models;
pub mod scan;
pub mod sweep;

pub use error::{Error, Result};
