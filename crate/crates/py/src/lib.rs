//! Python bindings for the `ballproj` crate.
//!
//! Vectors cross the boundary as lists of floats; structured results
//! (regions, linear maps, coderivative sets, oracle reports) come back as
//! plain dicts with the same shape as the command-line JSON.

use ballproj::oracle::{self, SamplingScheme};
use ballproj::{CoderivativeSet, Vector, DEFAULT_SET_EPS, DEFAULT_TAU};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_pyerr(e: ballproj::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vector(coords: Vec<f64>) -> PyResult<Vector> {
    Vector::new(coords).map_err(to_pyerr)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) if !n.is_f64() => i.into_pyobject(py)?.into_any().unbind(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyTypeError::new_err(e.to_string()))?;
    json_to_py(py, &json)
}

/// Closed ball `B(center, radius)`.
#[pyclass(name = "Ball", module = "ballproj", frozen)]
struct PyBall {
    inner: ballproj::Ball,
}

#[pymethods]
impl PyBall {
    #[new]
    fn new(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        let inner = ballproj::Ball::new(vector(center)?, radius).map_err(to_pyerr)?;
        Ok(PyBall { inner })
    }

    #[getter]
    fn center(&self) -> Vec<f64> {
        self.inner.center().as_slice().to_vec()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    fn project(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let p = ballproj::try_project(&self.inner, &vector(x)?).map_err(to_pyerr)?;
        Ok(p.into_inner())
    }

    #[pyo3(signature = (x, tau = DEFAULT_TAU))]
    fn classify(&self, py: Python<'_>, x: Vec<f64>, tau: f64) -> PyResult<Py<PyAny>> {
        let region = ballproj::classify(&self.inner, &vector(x)?, tau).map_err(to_pyerr)?;
        to_py(py, &region)
    }

    /// `"up"` or `"down"` for a nonzero direction at a boundary point.
    #[pyo3(signature = (x, v, tau = DEFAULT_TAU))]
    fn direction_class(&self, x: Vec<f64>, v: Vec<f64>, tau: f64) -> PyResult<&'static str> {
        let class = ballproj::direction_class(&self.inner, &vector(x)?, &vector(v)?, tau).map_err(to_pyerr)?;
        Ok(match class {
            ballproj::DirectionClass::Up => "up",
            ballproj::DirectionClass::Down => "down",
        })
    }

    #[pyo3(signature = (x, u, tau = DEFAULT_TAU))]
    fn gateaux(&self, x: Vec<f64>, u: Vec<f64>, tau: f64) -> PyResult<Vec<f64>> {
        let g = ballproj::gateaux_with_tol(&self.inner, &vector(x)?, &vector(u)?, tau).map_err(to_pyerr)?;
        Ok(g.into_inner())
    }

    #[pyo3(signature = (x, y, tau = DEFAULT_TAU))]
    fn graphical(&self, x: Vec<f64>, y: Vec<f64>, tau: f64) -> PyResult<Vec<f64>> {
        let g = ballproj::graphical_with_tol(&self.inner, &vector(x)?, &vector(y)?, tau).map_err(to_pyerr)?;
        Ok(g.into_inner())
    }

    #[pyo3(signature = (x, tau = DEFAULT_TAU))]
    fn frechet_map(&self, py: Python<'_>, x: Vec<f64>, tau: f64) -> PyResult<Py<PyAny>> {
        let map = ballproj::frechet_map_with_tol(&self.inner, &vector(x)?, tau).map_err(to_pyerr)?;
        to_py(py, &map)
    }

    /// Regular coderivative as `{"tag": ...}` with `value` or `endpoints`.
    #[pyo3(signature = (x, y, tau = DEFAULT_TAU))]
    fn coderivative(&self, py: Python<'_>, x: Vec<f64>, y: Vec<f64>, tau: f64) -> PyResult<Py<PyAny>> {
        let set = ballproj::regular_coderivative(&self.inner, &vector(x)?, &vector(y)?, tau).map_err(to_pyerr)?;
        to_py(py, &set)
    }

    /// Whether `z` belongs to the coderivative at `x` applied to `y`.
    #[pyo3(signature = (x, y, z, eps = None, tau = DEFAULT_TAU))]
    fn is_member(&self, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, eps: Option<f64>, tau: f64) -> PyResult<bool> {
        let set = ballproj::regular_coderivative(&self.inner, &vector(x)?, &vector(y)?, tau).map_err(to_pyerr)?;
        let z = vector(z)?;
        self.inner.check_dim(&z).map_err(to_pyerr)?;
        let eps = eps.unwrap_or_else(|| set.default_eps());
        Ok(ballproj::set_membership(&set, &z, eps))
    }

    /// Limsup-quotient report for the candidate `z ∈ D̂*P(x)(y)`.
    #[pyo3(signature = (x, y, z, seed = 0, num_directions = 64))]
    fn limsup_quotient(
        &self,
        py: Python<'_>,
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<f64>,
        seed: u64,
        num_directions: usize,
    ) -> PyResult<Py<PyAny>> {
        let scheme = SamplingScheme {
            seed,
            num_directions,
            ..SamplingScheme::default()
        };
        let rep = ballproj::limsup_quotient(&self.inner, &vector(x)?, &vector(y)?, &vector(z)?, &scheme)
            .map_err(to_pyerr)?;
        to_py(py, &rep)
    }

    /// Difference quotients `(P(x+tu) − P(x))/t` along `steps`.
    fn fd_directional(&self, py: Python<'_>, x: Vec<f64>, u: Vec<f64>, steps: Vec<f64>) -> PyResult<Py<PyAny>> {
        let est = oracle::fd_directional(&self.inner, &vector(x)?, &vector(u)?, &steps).map_err(to_pyerr)?;
        to_py(py, &est)
    }

    fn __repr__(&self) -> String {
        format!("Ball(center={:?}, radius={})", self.inner.center().as_slice(), self.inner.radius())
    }
}

/// Geometric equality of two coderivative dicts.
#[pyfunction]
#[pyo3(signature = (a, b, eps = DEFAULT_SET_EPS))]
fn set_equal(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, eps: f64) -> PyResult<bool> {
    let parse = |obj: &Bound<'_, PyAny>| -> PyResult<CoderivativeSet> {
        let json = obj.py().import("json")?.call_method1("dumps", (obj,))?;
        let text: String = json.extract()?;
        serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
    };
    Ok(ballproj::set_equal(&parse(a)?, &parse(b)?, eps))
}

/// Runs a JSON request exactly like the command-line tool; returns
/// `(output_text, exit_code)`.
#[pyfunction]
fn handle_request(text: &str) -> (String, i32) {
    ballproj::request::handle(text)
}

#[pymodule]
#[pyo3(name = "ballproj")]
fn ballproj_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBall>()?;
    m.add_function(wrap_pyfunction!(set_equal, m)?)?;
    m.add_function(wrap_pyfunction!(handle_request, m)?)?;
    m.add("DEFAULT_TAU", DEFAULT_TAU)?;
    Ok(())
}
