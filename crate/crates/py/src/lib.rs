//! Python bindings for the fidelity engines, flux scans and exact diagonalization.

use std::collections::BTreeMap;

use fidzero::bloch::{self, DVector, Momentum};
use fidzero::models::{registry, ModelKind};
use fidzero::scan::{self, FidelityEngine, SystemSize, Weighting};
use fidzero::sweep::Engine;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    pyfidzero,
    NumericalError,
    PyArithmeticError,
    "A computation hit a gapless mode, a degenerate ground state or a divergence."
);

fn to_py(e: fidzero::Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn size_of(lx: usize, ly: Option<usize>) -> SystemSize {
    match ly {
        Some(ly) => SystemSize::Honeycomb { lx, ly },
        None => SystemSize::Chain(lx),
    }
}

fn momentum_to_py(py: Python<'_>, k: Momentum) -> PyResult<Py<PyAny>> {
    Ok(match k {
        Momentum::Scalar(k) => k.into_pyobject(py)?.into_any().unbind(),
        Momentum::Pair(kx, ky) => (kx, ky).into_pyobject(py)?.into_any().unbind(),
    })
}

/// Overlap of the lower-band states of two Bloch vectors `(dx, dy, dz, d0)`.
#[pyfunction]
fn mode_fidelity(d: (f64, f64, f64, f64), d_tilde: (f64, f64, f64, f64)) -> PyResult<f64> {
    let a = DVector::new(d.0, d.1, d.2, d.3);
    let b = DVector::new(d_tilde.0, d_tilde.1, d_tilde.2, d_tilde.3);
    bloch::mode_fidelity(&a, &b).map_err(to_py)
}

/// Flux in `[0, 2π)` that puts momentum `kc` on a chain of `length` cells.
#[pyfunction]
fn critical_flux_1d(kc: f64, length: usize) -> f64 {
    scan::critical_flux_1d(kc, length)
}

/// Many-body fidelity of the interacting chain at half filling.
#[pyfunction]
fn mb_fidelity(l_cells: usize, u: f64, phi: f64, gamma: f64, gamma_tilde: f64) -> PyResult<f64> {
    fidzero::ed::mb_fidelity(l_cells, u, phi, gamma, gamma_tilde).map_err(to_py)
}

/// Registered models with their parameters and defaults.
#[pyfunction]
fn models(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    registry()
        .iter()
        .map(|entry| {
            let d = PyDict::new(py);
            d.set_item("name", entry.name)?;
            d.set_item("description", entry.description)?;
            let lattice = match entry.kind {
                ModelKind::Interacting => "chain (interacting)".to_string(),
                ModelKind::Band(l) => format!("{l:?}").to_lowercase(),
            };
            d.set_item("lattice", lattice)?;
            d.set_item("driving", entry.driving)?;
            let params: BTreeMap<&str, f64> =
                entry.params.iter().map(|p| (p.name, p.default)).collect();
            d.set_item("params", params)?;
            d.set_item("supports_alpha_prime", entry.supports_alpha_prime)?;
            Ok(d)
        })
        .collect()
}

/// A registered model. `a` and `b` are the two values of its driving parameter;
/// pass `ly` for the honeycomb lattice.
#[pyclass(frozen)]
struct Model {
    engine: Engine,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (name, **params))]
    fn new(name: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let params: BTreeMap<String, f64> = match params {
            Some(d) => d.extract()?,
            None => BTreeMap::new(),
        };
        Engine::build(name, &params)
            .map(|engine| Model { engine })
            .map_err(to_py)
    }

    #[getter]
    fn name(&self) -> &str {
        self.engine.engine_name()
    }

    fn __repr__(&self) -> String {
        format!("Model('{}')", self.engine.engine_name())
    }

    /// Returns `(fidelity, alpha, exact_zero)`.
    #[pyo3(signature = (a, b, lx, ly=None, phi=0.0, phi_y=0.0))]
    fn evaluate(
        &self,
        py: Python<'_>,
        a: f64,
        b: f64,
        lx: usize,
        ly: Option<usize>,
        phi: f64,
        phi_y: f64,
    ) -> PyResult<(f64, f64, bool)> {
        let r = py
            .detach(|| self.engine.evaluate(a, b, size_of(lx, ly), phi, phi_y))
            .map_err(to_py)?;
        Ok((r.fidelity, r.alpha, r.exact_zero))
    }

    #[pyo3(signature = (a, b, lx, ly=None, phi=0.0, phi_y=0.0))]
    fn alpha_prime(
        &self,
        a: f64,
        b: f64,
        lx: usize,
        ly: Option<usize>,
        phi: f64,
        phi_y: f64,
    ) -> PyResult<f64> {
        self.engine
            .alpha_prime(a, b, size_of(lx, ly), phi, phi_y)
            .map_err(to_py)
    }

    /// Momenta where the two Bloch vectors are antiparallel; empty when none exist.
    fn critical_momenta(&self, py: Python<'_>, a: f64, b: f64) -> PyResult<Vec<Py<PyAny>>> {
        let cond = self.engine.critical_momenta(a, b).map_err(to_py)?;
        cond.kc_list
            .into_iter()
            .map(|k| momentum_to_py(py, k))
            .collect()
    }

    #[pyo3(signature = (a, b, lx, ly=None))]
    fn critical_fluxes(&self, a: f64, b: f64, lx: usize, ly: Option<usize>) -> PyResult<Vec<f64>> {
        scan::critical_fluxes(&self.engine, a, b, size_of(lx, ly)).map_err(to_py)
    }

    /// α over the given fluxes plus every analytic critical flux, sorted by flux.
    #[pyo3(signature = (a, b, lx, phis, ly=None, phi_y=0.0))]
    fn scan_flux<'py>(
        &self,
        py: Python<'py>,
        a: f64,
        b: f64,
        lx: usize,
        phis: Vec<f64>,
        ly: Option<usize>,
        phi_y: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let s = py
            .detach(|| scan::scan_alpha_vs_flux(&self.engine, a, b, size_of(lx, ly), phi_y, &phis))
            .map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("phi", s.phis)?;
        d.set_item("fidelity", s.fidelities)?;
        d.set_item("alpha", s.alphas)?;
        d.set_item("exact_zero", s.exact_zero)?;
        d.set_item("injected", s.injected)?;
        d.set_item("diverged_at", s.diverged_at)?;
        Ok(d)
    }

    /// Line fit of α against 1/L. `sizes` holds chain lengths, or `(lx, ly)` pairs.
    #[pyo3(signature = (a, b, sizes, phi=0.0, phi_y=0.0, weighting="uniform"))]
    fn finite_size_fit<'py>(
        &self,
        py: Python<'py>,
        a: f64,
        b: f64,
        sizes: Vec<Bound<'py, PyAny>>,
        phi: f64,
        phi_y: f64,
        weighting: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let weighting = match weighting {
            "uniform" => Weighting::Uniform,
            "size" => Weighting::Size,
            other => {
                return Err(PyValueError::new_err(format!(
                    "weighting must be 'uniform' or 'size', got '{other}'"
                )))
            }
        };
        let sizes = sizes
            .iter()
            .map(|s| match s.extract::<(usize, usize)>() {
                Ok((lx, ly)) => Ok(SystemSize::Honeycomb { lx, ly }),
                Err(_) => Ok(SystemSize::Chain(s.extract::<usize>()?)),
            })
            .collect::<PyResult<Vec<_>>>()?;
        let fit = py
            .detach(|| scan::finite_size_fit(&self.engine, a, b, phi, phi_y, &sizes, weighting))
            .map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("slope", fit.slope)?;
        d.set_item("intercept", fit.intercept)?;
        d.set_item("r2", fit.r2)?;
        d.set_item("inv_sizes", fit.inv_sizes)?;
        d.set_item("alpha", fit.alphas)?;
        Ok(d)
    }
}

#[pymodule]
fn pyfidzero(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(mode_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(critical_flux_1d, m)?)?;
    m.add_function(wrap_pyfunction!(mb_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(models, m)?)?;
    m.add_class::<Model>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add("ZERO_TOL", bloch::ZERO_TOL)?;
    Ok(())
}
