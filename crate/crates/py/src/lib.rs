//! Python bindings. Fields cross the boundary as flat row-major lists;
//! structured results become dicts.

use std::path::Path;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use chemoflux::config::Config;
use chemoflux::diagnostics::DiagnosticsRecord;
use chemoflux::ledger::{self, format_rational, parse_rational};
use chemoflux::model::ChiKappaModel;
use chemoflux::oracle;
use chemoflux::run;
use chemoflux::solver::{FieldState, Solver};
use chemoflux::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Instability { .. } | Error::NonConvergence { .. } | Error::Io(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// JSON value to the matching Python builtin.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serde_to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

/// `chi(c) = chi_offset + chi_slope c`, `kappa(c) = kappa_coeff c^kappa_power`.
#[pyclass(name = "Model", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: ChiKappaModel,
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(chi_offset: f64, chi_slope: f64, kappa_coeff: f64, kappa_power: f64) -> PyResult<Self> {
        let inner = ChiKappaModel::new(chi_offset, chi_slope, kappa_coeff, kappa_power).map_err(py_err)?;
        Ok(PyModel { inner })
    }

    fn chi(&self, c: f64) -> PyResult<f64> {
        self.inner.eval_chi(c).map_err(py_err)
    }

    fn kappa(&self, c: f64) -> PyResult<f64> {
        self.inner.eval_kappa(c).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!(
            "Model(chi_offset={}, chi_slope={}, kappa_coeff={}, kappa_power={})",
            m.chi_offset, m.chi_slope, m.kappa_coeff, m.kappa_power
        )
    }
}

/// A validated run configuration.
#[pyclass(name = "Config", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: Config,
}

#[pymethods]
impl PyConfig {
    /// Parse JSON text; relative paths resolve against `base_dir`.
    #[staticmethod]
    #[pyo3(signature = (text, base_dir = "."))]
    fn from_json(text: &str, base_dir: &str) -> PyResult<Self> {
        Ok(PyConfig {
            inner: Config::from_json(text, Path::new(base_dir)).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_path(path: &str) -> PyResult<Self> {
        Ok(PyConfig {
            inner: Config::from_path(Path::new(path)).map_err(py_err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.params.alpha
    }

    #[getter]
    fn tau(&self) -> u8 {
        self.inner.params.tau
    }

    #[getter]
    fn t_final(&self) -> f64 {
        self.inner.params.t_final
    }

    #[getter]
    fn resolution(&self) -> Vec<usize> {
        let d = &self.inner.params.domain;
        d.resolution[..d.dim].to_vec()
    }

    #[getter]
    fn model(&self) -> PyModel {
        PyModel { inner: self.inner.model }
    }

    /// Satisfied assumption clauses, e.g. `"weak {iii}, bounded {iii}; kappa' >= 1"`.
    fn classify(&self) -> PyResult<String> {
        Ok(run::classify(&self.inner).map_err(py_err)?.to_string())
    }
}

/// A stepping handle over one state, for interactive use.
#[pyclass(name = "Simulation", unsendable)]
struct PySimulation {
    solver: Solver,
    state: FieldState,
    previous: Option<DiagnosticsRecord>,
}

#[pymethods]
impl PySimulation {
    /// Start from the configuration's mollified initial data.
    #[new]
    fn new(config: &PyConfig) -> PyResult<Self> {
        let cfg = &config.inner;
        Ok(PySimulation {
            solver: Solver::new(cfg.params, cfg.model).map_err(py_err)?,
            state: run::initial_state(cfg).map_err(py_err)?,
            previous: None,
        })
    }

    #[getter]
    fn t(&self) -> f64 {
        self.state.t
    }

    fn stable_dt(&self) -> PyResult<f64> {
        self.solver.stable_dt(&self.state).map_err(py_err)
    }

    /// One step of `dt` (default: the stable step). Returns the step taken.
    #[pyo3(signature = (dt = None))]
    fn step(&mut self, dt: Option<f64>) -> PyResult<f64> {
        let dt = match dt {
            Some(dt) => dt,
            None => self.stable_dt()?,
        };
        let t = self.state.t + dt;
        self.state = self.solver.step(&self.state, dt).map_err(py_err)?;
        self.state.t = t;
        Ok(dt)
    }

    /// Step adaptively to exactly `t_end`; returns the number of steps.
    fn advance(&mut self, t_end: f64) -> PyResult<usize> {
        let (s, steps) = self.solver.advance(&self.state, t_end, None).map_err(py_err)?;
        self.state = s;
        Ok(steps)
    }

    fn n(&self) -> Vec<f64> {
        self.state.n.values().to_vec()
    }

    fn c(&self) -> Vec<f64> {
        self.state.c.values().to_vec()
    }

    fn u(&self) -> Vec<Vec<f64>> {
        self.state.u.components().iter().map(|c| c.values().to_vec()).collect()
    }

    /// Diagnostics of the current state; `d_accum` integrates over the
    /// states sampled through this method.
    fn diagnostics<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let rec = DiagnosticsRecord::from_state(&self.state, self.solver.params(), self.previous.as_ref())
            .map_err(py_err)?;
        let out = serde_to_py(py, &rec)?;
        self.previous = Some(rec);
        Ok(out)
    }
}

/// Full run without file output: `{"summary": {...}, "records": [...]}`.
#[pyfunction]
fn simulate<'py>(py: Python<'py>, config: &PyConfig) -> PyResult<Bound<'py, PyAny>> {
    let s = run::simulate(&config.inner).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("summary", serde_to_py(py, &s)?)?;
    out.set_item("passed", s.passed())?;
    out.set_item("records", serde_to_py(py, &s.records)?)?;
    Ok(out.into_any())
}

/// Full run writing diagnostics.csv, run.json and snapshots; returns `passed`.
#[pyfunction]
fn run_to_disk(config: &PyConfig) -> PyResult<bool> {
    Ok(run::run(&config.inner).map_err(py_err)?.passed())
}

/// Check every ledger entry at exact rationals given as strings (`"1/3"`).
#[pyfunction]
fn ledger_check<'py>(py: Python<'py>, alpha: &str, p: &str) -> PyResult<Bound<'py, PyList>> {
    let a = parse_rational(alpha).map_err(py_err)?;
    let p = parse_rational(p).map_err(py_err)?;
    let rows = PyList::empty(py);
    for e in ledger::build_ledger() {
        let c = ledger::check_entry(&e, &a, &p).map_err(py_err)?;
        let row = PyDict::new(py);
        row.set_item("id", &c.id)?;
        row.set_item("applicable", c.applicable)?;
        row.set_item("passed", c.passed())?;
        let bounds = PyList::empty(py);
        for b in &c.bounds {
            let bd = PyDict::new(py);
            bd.set_item("name", &b.name)?;
            bd.set_item("value", b.value.as_ref().map(format_rational))?;
            bd.set_item("interval", b.interval_text())?;
            bd.set_item("pass", b.pass)?;
            bounds.append(bd)?;
        }
        row.set_item("bounds", bounds)?;
        rows.append(row)?;
    }
    Ok(rows)
}

/// Lattice scan and scaling check of every entry.
#[pyfunction]
fn ledger_scan<'py>(py: Python<'py>, density: usize) -> PyResult<Bound<'py, PyList>> {
    let rows = PyList::empty(py);
    for e in ledger::build_ledger() {
        let s = ledger::scan_region(&e, density).map_err(py_err)?;
        let row = PyDict::new(py);
        row.set_item("id", &s.id)?;
        row.set_item("interior_points", s.interior_points)?;
        row.set_item("interior_pass", s.interior_pass)?;
        row.set_item("collar_points", s.collar_points)?;
        row.set_item("collar_inapplicable", s.collar_inapplicable)?;
        row.set_item("scaling", ledger::scaling_check(&e).to_string())?;
        rows.append(row)?;
    }
    Ok(rows)
}

#[pyfunction]
fn uniform_state_ode(n_bar: f64, c_bar: f64, model: &PyModel, t: f64) -> PyResult<f64> {
    oracle::uniform_state_ode(n_bar, c_bar, &model.inner, t).map_err(py_err)
}

#[pyfunction]
fn barenblatt(alpha: f64, mass: f64, dim: usize, t: f64, x: Vec<f64>) -> PyResult<f64> {
    if x.len() != dim {
        return Err(PyValueError::new_err(format!("x needs {dim} coordinates")));
    }
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(&x);
    oracle::barenblatt(alpha, mass, dim, t, p).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "chemoflux")]
fn chemoflux_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(run_to_disk, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_check, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_scan, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_state_ode, m)?)?;
    m.add_function(wrap_pyfunction!(barenblatt, m)?)?;
    Ok(())
}
