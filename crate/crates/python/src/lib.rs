//! Python bindings: exact series as `(exponent, coefficient)` string pairs,
//! high-precision reports as JSON-derived dicts.

use num_rational::BigRational;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use zhat::indefinite;
use zhat::modular;
use zhat::plumbing;
use zhat::surgery;
use zhat::{parse_exp, Error, Exp};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn exp_arg(s: &str) -> PyResult<Exp> {
    parse_exp(s).map_err(err)
}

fn big(e: Exp) -> BigRational {
    BigRational::new((*e.numer()).into(), (*e.denom()).into())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

/// Truncated q-series with rational exponents and coefficients.
#[pyclass(name = "QSeries", module = "pyzhat", skip_from_py_object)]
#[derive(Clone)]
struct PyQSeries {
    inner: zhat::QSeries,
}

#[pymethods]
impl PyQSeries {
    /// `terms` is a list of `(exponent, coefficient)` strings such as
    /// `("1/2", "-3")`.
    #[new]
    fn new(terms: Vec<(String, String)>, order: &str) -> PyResult<Self> {
        let mut s = zhat::QSeries::zero(exp_arg(order)?);
        for (e, c) in terms {
            let c: BigRational = c
                .parse()
                .map_err(|_| PyValueError::new_err(format!("bad coefficient {c:?}")))?;
            s.add_term(exp_arg(&e)?, c);
        }
        Ok(PyQSeries { inner: s })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyQSeries { inner: zhat::QSeries::from_json(&v).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn terms(&self) -> Vec<(String, String)> {
        self.inner.iter().map(|(e, c)| (e.to_string(), c.to_string())).collect()
    }

    #[getter]
    fn order(&self) -> String {
        self.inner.order().to_string()
    }

    fn coeff(&self, e: &str) -> PyResult<String> {
        Ok(self.inner.coeff(exp_arg(e)?).to_string())
    }

    fn truncate(&self, order: &str) -> PyResult<Self> {
        Ok(PyQSeries { inner: self.inner.truncate(exp_arg(order)?) })
    }

    fn shift(&self, e: &str) -> PyResult<Self> {
        Ok(PyQSeries { inner: self.inner.shift(exp_arg(e)?) })
    }

    fn invert(&self) -> PyResult<Self> {
        Ok(PyQSeries { inner: self.inner.invert().map_err(err)? })
    }

    fn __add__(&self, o: &PyQSeries) -> Self {
        PyQSeries { inner: self.inner.add(&o.inner) }
    }

    fn __sub__(&self, o: &PyQSeries) -> Self {
        PyQSeries { inner: self.inner.sub(&o.inner) }
    }

    fn __mul__(&self, o: &PyQSeries) -> Self {
        PyQSeries { inner: self.inner.mul(&o.inner) }
    }

    fn __neg__(&self) -> Self {
        PyQSeries { inner: self.inner.neg() }
    }

    fn __eq__(&self, o: &PyQSeries) -> bool {
        self.inner == o.inner
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QSeries({})", self.inner)
    }
}

/// Weighted plumbing graph.
#[pyclass(name = "PlumbingGraph", module = "pyzhat", skip_from_py_object)]
#[derive(Clone)]
struct PyPlumbingGraph {
    inner: plumbing::PlumbingGraph,
}

#[pymethods]
impl PyPlumbingGraph {
    #[new]
    #[pyo3(signature = (weights, edges=Vec::new()))]
    fn new(weights: Vec<i64>, edges: Vec<(i64, i64)>) -> PyResult<Self> {
        Ok(PyPlumbingGraph { inner: plumbing::PlumbingGraph::from_weights(&weights, &edges).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPlumbingGraph { inner: plumbing::PlumbingGraph::parse(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyPlumbingGraph { inner: plumbing::PlumbingGraph::load(std::path::Path::new(path)).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn weights(&self) -> Vec<i64> {
        self.inner.weights()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn adjacency(&self) -> Vec<Vec<i64>> {
        self.inner.adjacency_rows()
    }

    /// `(positive, negative, zero)` eigenvalue counts.
    fn inertia(&self) -> (usize, usize, usize) {
        let i = self.inner.inertia();
        (i.positives, i.negatives, i.zeros)
    }

    fn spinc_labels(&self) -> PyResult<Vec<Vec<i64>>> {
        Ok(self.inner.spinc_labels().map_err(err)?.iter().map(|l| l.to_i64()).collect())
    }

    fn three_star_params<'py>(&self, py: Python<'py>) -> PyResult<Py<PyAny>> {
        let t = self.inner.three_star_params().map_err(err)?;
        let v = serde_json::json!({
            "m": t.m.to_string(),
            "b": t.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "c": t.c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "d": t.d.to_string(),
            "prefactor_exponent": t.c_pref.to_string(),
            "sign": t.sign,
        });
        json_to_py(py, &v)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Lattice route; `spinc` defaults to the canonical label.
#[pyfunction]
#[pyo3(signature = (graph, order, spinc=None, jobs=1))]
fn zhat_negative_definite(graph: &PyPlumbingGraph, order: &str, spinc: Option<Vec<i64>>, jobs: usize) -> PyResult<PyQSeries> {
    let g = &graph.inner;
    let label = match spinc {
        Some(a) => plumbing::SpincLabel::from_i64(g, &a).map_err(err)?,
        None => g.canonical_label().map_err(err)?,
    };
    let s = zhat::zhat::zhat_negative_definite(g, &label, exp_arg(order)?, jobs.max(1)).map_err(err)?;
    Ok(PyQSeries { inner: s })
}

#[pyfunction]
fn zhat_three_star(graph: &PyPlumbingGraph, order: &str) -> PyResult<PyQSeries> {
    Ok(PyQSeries { inner: zhat::zhat::zhat_three_star(&graph.inner, exp_arg(order)?).map_err(err)? })
}

#[pyfunction]
fn zhat_reversed(graph: &PyPlumbingGraph, order: &str) -> PyResult<PyQSeries> {
    Ok(PyQSeries { inner: indefinite::zhat_reversed(&graph.inner, exp_arg(order)?).map_err(err)? })
}

/// Order-7 mock theta `F0` from its q-hypergeometric definition.
#[pyfunction]
fn mock_f0(order: &str) -> PyResult<PyQSeries> {
    Ok(PyQSeries { inner: indefinite::mock_f0_reference(exp_arg(order)?) })
}

#[pyfunction]
fn false_theta(m: i64, r: i64, order: &str) -> PyResult<PyQSeries> {
    Ok(PyQSeries { inner: zhat::zhat::false_theta(m, r, exp_arg(order)?).map_err(err)?.series })
}

/// Surgery on the built-in figure-eight data, or on a knot JSON file.
/// Returns `(series, guaranteed_order)`.
#[pyfunction]
#[pyo3(signature = (slope, order, a="0", knot=None))]
fn surgery_zhat(slope: &str, order: &str, a: &str, knot: Option<&str>) -> PyResult<(PyQSeries, String)> {
    let k = match knot {
        Some(p) => surgery::KnotSeries::load(std::path::Path::new(p)).map_err(err)?,
        None => surgery::figure_eight_fk(),
    };
    let slope = surgery::SurgerySlope::parse(slope).map_err(err)?;
    let r = surgery::surgery_zhat(&k, slope, exp_arg(a)?, exp_arg(order)?).map_err(err)?;
    Ok((PyQSeries { inner: r.series }, r.guaranteed_order.to_string()))
}

#[pyfunction]
#[pyo3(signature = (series, x, tgrid, precision=128))]
fn radial_extrapolate(py: Python<'_>, series: &PyQSeries, x: &str, tgrid: Vec<String>, precision: u32) -> PyResult<Py<PyAny>> {
    let grid: Vec<BigRational> = tgrid.iter().map(|t| exp_arg(t).map(big)).collect::<PyResult<_>>()?;
    let r = modular::radial_extrapolate(&series.inner, &big(exp_arg(x)?), &grid, precision).map_err(err)?;
    json_to_py(py, &r.to_json())
}

/// `alpha(0..=nmax)` as strings `"(c)*pi^n"` for the pattern
/// `values[k-1] = C(k)`.
#[pyfunction]
fn asymptotic_coeffs(values: Vec<i64>, m: i64, nmax: usize) -> PyResult<Vec<String>> {
    let c = modular::PeriodicSign::from_i64(&values).map_err(err)?;
    Ok(modular::asymptotic_coeffs(&c, m, nmax)
        .map_err(err)?
        .iter()
        .map(|a| a.to_string())
        .collect())
}

#[pymodule]
fn pyzhat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSeries>()?;
    m.add_class::<PyPlumbingGraph>()?;
    m.add_function(wrap_pyfunction!(zhat_negative_definite, m)?)?;
    m.add_function(wrap_pyfunction!(zhat_three_star, m)?)?;
    m.add_function(wrap_pyfunction!(zhat_reversed, m)?)?;
    m.add_function(wrap_pyfunction!(mock_f0, m)?)?;
    m.add_function(wrap_pyfunction!(false_theta, m)?)?;
    m.add_function(wrap_pyfunction!(surgery_zhat, m)?)?;
    m.add_function(wrap_pyfunction!(radial_extrapolate, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_coeffs, m)?)?;
    Ok(())
}
