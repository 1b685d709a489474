//! Python bindings: scheme configuration, single-interface reconstruction,
//! convergence and reconstruction studies, and benchmark runs.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use weno_core::harness::{self, RunOptions};
use weno_core::problems::{self, lookup};
use weno_core::stencil::Reconstructor;
use weno_core::time::StepPolicy;
use weno_core::{EpsilonPolicy, Error, SchemeConfig, Variant};

fn to_py(e: Error) -> PyErr {
    if e.is_solver_failure() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Reconstruction variant with its epsilon policy and exponent `p`.
#[pyclass(name = "SchemeConfig", module = "weno", frozen)]
struct PyScheme(SchemeConfig);

#[pymethods]
impl PyScheme {
    /// `eps` is `fixed:<value>` or `scaled:<m>`; omitted values take the
    /// variant's defaults.
    #[new]
    #[pyo3(signature = (variant = "ud5", eps = None, p = None))]
    fn new(variant: &str, eps: Option<&str>, p: Option<f64>) -> PyResult<Self> {
        let variant: Variant = variant.parse().map_err(to_py)?;
        let mut cfg = SchemeConfig::default_for(variant);
        if let Some(e) = eps {
            cfg = cfg.with_epsilon(e.parse::<EpsilonPolicy>().map_err(to_py)?);
        }
        if let Some(p) = p {
            cfg = cfg.with_p(p);
        }
        cfg.validate().map_err(to_py)?;
        Ok(PyScheme(cfg))
    }

    #[getter]
    fn variant(&self) -> String {
        self.0.variant.to_string()
    }

    #[getter]
    fn eps(&self) -> String {
        self.0.epsilon.to_string()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }

    /// Weights `(w0, w1, w2)` for the upwind window `f[i-2..=i+2]`.
    #[pyo3(signature = (window, dx = 1.0))]
    fn weights(&self, window: [f64; 5], dx: f64) -> PyResult<(f64, f64, f64)> {
        let w = Reconstructor::new(&self.0, dx).map_err(to_py)?.weights(&window);
        Ok((w[0], w[1], w[2]))
    }

    /// Interface value `fhat_{i+1/2}` from the window `f[i-2..=i+2]`.
    #[pyo3(signature = (window, dx = 1.0))]
    fn reconstruct(&self, window: [f64; 5], dx: f64) -> PyResult<f64> {
        Ok(Reconstructor::new(&self.0, dx).map_err(to_py)?.reconstruct(&window))
    }

    fn __repr__(&self) -> String {
        format!("SchemeConfig('{}', eps='{}', p={})", self.0.variant, self.0.epsilon, self.0.p)
    }
}

fn scheme_or(scheme: Option<PyRef<'_, PyScheme>>, default: SchemeConfig) -> SchemeConfig {
    scheme.map(|s| s.0).unwrap_or(default)
}

type Row = HashMap<&'static str, Option<f64>>;
type Columns = HashMap<&'static str, Vec<f64>>;

/// Names accepted by the other functions.
#[pyfunction]
fn problem_names() -> Vec<&'static str> {
    problems::NAMES.to_vec()
}

/// L1/Linf errors and orders against the exact solution, one dict per grid.
#[pyfunction]
#[pyo3(signature = (problem, scheme = None, ladder = None))]
fn convergence(problem: &str, scheme: Option<PyRef<'_, PyScheme>>, ladder: Option<Vec<usize>>) -> PyResult<Vec<Row>> {
    let spec = lookup(problem).map_err(to_py)?;
    let cfg = scheme_or(scheme, spec.scheme);
    let ladder = ladder.unwrap_or_else(|| spec.ladder.clone());
    let rows = harness::convergence_study(&spec, &cfg, &ladder, spec.integrator, &spec.step, |_| {}).map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| {
            HashMap::from([
                ("n", Some(r.n as f64)),
                ("l1_error", Some(r.l1_error)),
                ("l1_order", r.l1_order),
                ("linf_error", Some(r.linf_error)),
                ("linf_order", r.linf_order),
            ])
        })
        .collect())
}

/// Derivative errors left and right of the jump in `reconstruct-jump`.
#[pyfunction]
#[pyo3(signature = (scheme = None, ladder = None))]
fn reconstruct_study(scheme: Option<PyRef<'_, PyScheme>>, ladder: Option<Vec<usize>>) -> PyResult<Vec<Row>> {
    let spec = lookup("reconstruct-jump").map_err(to_py)?;
    let cfg = scheme_or(scheme, spec.scheme);
    let ladder = ladder.unwrap_or_else(|| spec.ladder.clone());
    let rows = harness::reconstruct_study(&spec, &cfg, &ladder, |x| spec.exact_derivative(x).expect("jump data"))
        .map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| {
            HashMap::from([
                ("n", Some(r.n as f64)),
                ("dx", Some(r.dx)),
                ("e_left", Some(r.e_left)),
                ("o_left", r.o_left),
                ("e_right", Some(r.e_right)),
                ("o_right", r.o_right),
            ])
        })
        .collect())
}

/// Evolves `problem` to its final time. Returns the run report plus the
/// final state as named columns (`x, u`, `x, rho, u, p` or `x, y, rho, u, v, p`).
/// A run that leaves the admissible set still returns, with
/// `report["completed"]` false and the last valid state.
#[pyfunction]
#[pyo3(signature = (problem, scheme = None, n = None, ny = None, cfl = None))]
fn run<'py>(
    py: Python<'py>,
    problem: &str,
    scheme: Option<PyRef<'_, PyScheme>>,
    n: Option<usize>,
    ny: Option<usize>,
    cfl: Option<f64>,
) -> PyResult<(Bound<'py, PyAny>, Columns)> {
    let spec = lookup(problem).map_err(to_py)?;
    let mut opts = RunOptions::from_spec(&spec);
    opts.scheme = scheme_or(scheme, spec.scheme);
    if let Some(n) = n {
        opts.n = n;
        if spec.is_2d() {
            opts.ny = Some(n);
        }
    }
    if ny.is_some() {
        opts.ny = ny;
    }
    if let Some(c) = cfl {
        opts.step = StepPolicy { snap_to_end: opts.step.snap_to_end, ..StepPolicy::cfl(c) };
    }
    opts.validate().map_err(to_py)?;
    let (report, outcome) = py.detach(|| harness::run_benchmark(&spec, &opts, None)).map_err(to_py)?;
    let json = serde_json::to_string(&report).map_err(|e| to_py(e.into()))?;
    let report = py.import("json")?.call_method1("loads", (json,))?;
    let (headers, rows) = outcome.solution.table();
    let columns = headers.iter().enumerate().map(|(k, &h)| (h, rows.iter().map(|r| r[k]).collect())).collect();
    Ok((report, columns))
}

#[pymodule(name = "weno")]
fn weno_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScheme>()?;
    m.add_function(wrap_pyfunction!(problem_names, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_study, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
