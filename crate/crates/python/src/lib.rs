use pyo3::conversion::IntoPyObjectExt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use ricci_core::a49::{explicit_ric_a49, verify_identities as core_identities, verify_prop1 as core_prop1, PROP1_GRID};
use ricci_core::algebra::{self as alg, build_algebra, Family, LieAlgebraSpec, StructureTensor};
use ricci_core::curvature::{ricci_operator, RicciData};
use ricci_core::metric::{canonical_a49, orthonormal_frame, A49Params, InnerProduct};
use ricci_core::search::{a49_frame_search, realizability_search};
use ricci_core::signature::signature_index;
use ricci_core::table3::verify_table3 as core_table3;

fn value_err(e: ricci_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_bound_py_any(py)?,
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_bound_py_any(py)?,
            (_, Some(u)) => u.into_bound_py_any(py)?,
            _ => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py)?,
        },
        Value::String(s) => s.into_bound_py_any(py)?,
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, r: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(r).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn spec(family: &str, alpha: Option<f64>, beta: Option<f64>) -> PyResult<LieAlgebraSpec> {
    let mut s = LieAlgebraSpec::new(Family::from_alias(family).map_err(value_err)?);
    if let Some(a) = alpha {
        s = s.with("alpha", a);
    }
    if let Some(b) = beta {
        s = s.with("beta", b);
    }
    s.validate().map_err(value_err)?;
    Ok(s)
}

fn inner_product(dim: usize, metric: Option<Vec<Vec<f64>>>) -> PyResult<InnerProduct> {
    match metric {
        None => Ok(InnerProduct::identity(dim)),
        Some(rows) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(PyValueError::new_err(format!("metric must be {dim}x{dim}")));
            }
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            InnerProduct::from_row_major(dim, &flat).map_err(value_err)
        }
    }
}

/// Ricci operator of one metric: matrix, sorted eigenvalues, signature.
#[pyclass(frozen, get_all, module = "ricci_sig")]
struct Ricci {
    ric: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    signature: String,
    index: Option<u8>,
    scalar: f64,
}

impl From<RicciData> for Ricci {
    fn from(r: RicciData) -> Self {
        Ricci {
            ric: r.ric.row_iter().map(|row| row.iter().copied().collect()).collect(),
            index: signature_index(&r.signature).ok().map(|i| i.get()),
            signature: r.signature.to_string(),
            eigenvalues: r.eigenvalues,
            scalar: r.scalar,
        }
    }
}

#[pymethods]
impl Ricci {
    fn __repr__(&self) -> String {
        let index = self.index.map_or("None".to_string(), |i| i.to_string());
        format!("Ricci(signature='{}', index={index}, scalar={})", self.signature, self.scalar)
    }
}

/// A catalog Lie algebra with its parameters.
#[pyclass(frozen, module = "ricci_sig")]
struct Algebra {
    spec: LieAlgebraSpec,
    tensor: StructureTensor,
}

#[pymethods]
impl Algebra {
    #[new]
    #[pyo3(signature = (family, alpha=None, beta=None))]
    fn new(family: &str, alpha: Option<f64>, beta: Option<f64>) -> PyResult<Self> {
        let spec = spec(family, alpha, beta)?;
        let tensor = build_algebra(&spec).map_err(value_err)?;
        Ok(Algebra { spec, tensor })
    }

    #[getter]
    fn label(&self) -> String {
        self.spec.label()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// Nonzero `[e_i, e_j]` coefficients as 1-based `(i, j, k, value)`, `i < j`.
    fn brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        self.tensor
            .nonzero_brackets()
            .into_iter()
            .map(|(i, j, k, v)| (i + 1, j + 1, k + 1, v))
            .collect()
    }

    fn bracket(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<Vec<f64>> {
        alg::bracket(&self.tensor, &x, &y).map_err(value_err)
    }

    fn is_unimodular(&self) -> bool {
        alg::is_unimodular(&self.tensor)
    }

    #[pyo3(signature = (metric=None))]
    fn ricci(&self, metric: Option<Vec<Vec<f64>>>) -> PyResult<Ricci> {
        let q = inner_product(self.tensor.dim(), metric)?;
        let m = orthonormal_frame(&self.tensor, &q).map_err(value_err)?;
        Ok(ricci_operator(&m).into())
    }

    fn to_json(&self) -> String {
        alg::algebra_to_json(&self.tensor)
    }

    fn __repr__(&self) -> String {
        format!("Algebra('{}')", self.spec.label())
    }
}

/// `(alias, params, constraints)` for every family.
#[pyfunction]
fn catalog() -> Vec<(String, Vec<String>, Vec<String>)> {
    alg::list_catalog()
        .into_iter()
        .map(|e| {
            (
                e.family.alias().to_string(),
                e.params.iter().map(|p| p.to_string()).collect(),
                e.constraints.iter().map(|c| c.to_string()).collect(),
            )
        })
        .collect()
}

/// Ricci operator of the canonical `A4_9^beta` frame.
#[pyfunction]
#[pyo3(signature = (beta, a=1.0, b=1.0, c=0.0, d=0.0, f=0.0))]
fn a49_frame_ricci(beta: f64, a: f64, b: f64, c: f64, d: f64, f: f64) -> PyResult<Ricci> {
    let p = A49Params::new(a, b, c, d, f, beta).map_err(value_err)?;
    Ok(ricci_operator(&canonical_a49(&p).map_err(value_err)?).into())
}

/// Closed-form Ricci matrix of the canonical `A4_9^beta` frame.
#[pyfunction]
#[pyo3(signature = (beta, a=1.0, b=1.0, c=0.0, d=0.0, f=0.0))]
fn a49_explicit_ricci(beta: f64, a: f64, b: f64, c: f64, d: f64, f: f64) -> PyResult<Vec<Vec<f64>>> {
    let p = A49Params::new(a, b, c, d, f, beta).map_err(value_err)?;
    let m = explicit_ric_a49(&p).map_err(value_err)?;
    Ok(m.row_iter().map(|r| r.iter().copied().collect()).collect())
}

#[pyfunction]
#[pyo3(signature = (family, budget, seed, alpha=None, beta=None, frames=false))]
fn search<'py>(
    py: Python<'py>,
    family: &str,
    budget: u64,
    seed: u64,
    alpha: Option<f64>,
    beta: Option<f64>,
    frames: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let s = spec(family, alpha, beta)?;
    let rep = py
        .detach(|| {
            if frames {
                match (s.family, s.param("beta")) {
                    (Family::A49, Some(b)) => a49_frame_search(b, budget, seed),
                    _ => Err(ricci_core::Error::InvalidParams("frames need A4_9 with beta".into())),
                }
            } else {
                realizability_search(&s, budget, seed)
            }
        })
        .map_err(value_err)?;
    report(py, &rep)
}

#[pyfunction]
fn verify_table3<'py>(py: Python<'py>, budget: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| core_table3(budget, seed)).map_err(value_err)?;
    report(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (budget, seed, grid=None))]
fn verify_prop1<'py>(py: Python<'py>, budget: u64, seed: u64, grid: Option<Vec<f64>>) -> PyResult<Bound<'py, PyAny>> {
    let grid = grid.unwrap_or_else(|| PROP1_GRID.to_vec());
    let rep = py.detach(|| core_prop1(&grid, budget, seed)).map_err(value_err)?;
    report(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (seed, samples=1000))]
fn verify_identities<'py>(py: Python<'py>, seed: u64, samples: u64) -> PyResult<Bound<'py, PyAny>> {
    let rep = py.detach(|| core_identities(seed, samples)).map_err(value_err)?;
    report(py, &rep)
}

#[pymodule]
fn ricci_sig(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Ricci>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(a49_frame_ricci, m)?)?;
    m.add_function(wrap_pyfunction!(a49_explicit_ricci, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_table3, m)?)?;
    m.add_function(wrap_pyfunction!(verify_prop1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    Ok(())
}
