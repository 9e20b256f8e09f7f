//! Python bindings. Rationals are accepted as `int`, `str` (`"p/q"`) or
//! `fractions.Fraction`, and returned as strings. Variable indices are
//! 1-based, as in the JSON documents.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sperkit_core::error::ErrorClass;
use sperkit_core::rational::{format_rational, parse_rational, Rational};
use sperkit_core::resolve::DEFAULT_NODE_CAP;
use sperkit_core::{self as core, BlowupStep, Error, ExponentVec, LexVec, Transform, ValVec};

create_exception!(sperkit, SperkitError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e.class() {
        ErrorClass::Internal => PyRuntimeError::new_err(e.to_string()),
        _ => SperkitError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(to_py)
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn lexvec(objs: &[Bound<'_, PyAny>]) -> PyResult<LexVec> {
    LexVec::new(rationals(objs)?).map_err(to_py)
}

fn valvec(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<ValVec> {
    ValVec::new(rows.iter().map(|r| lexvec(r)).collect::<PyResult<_>>()?).map_err(to_py)
}

fn strings(v: &LexVec) -> Vec<String> {
    v.entries().iter().map(format_rational).collect()
}

fn rows_out(a: &ValVec) -> Vec<Vec<String>> {
    a.values().iter().map(strings).collect()
}

fn zero_based(qs: &[usize]) -> PyResult<Vec<usize>> {
    qs.iter().map(|&q| q.checked_sub(1).ok_or_else(|| SperkitError::new_err("variables are numbered from 1"))).collect()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("core types always serialize")
}

/// Sparse polynomial with rational coefficients.
#[pyclass(name = "Poly", frozen)]
struct PyPoly(core::Poly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, nvars=None))]
    fn new(text: &str, nvars: Option<usize>) -> PyResult<Self> {
        core::Poly::parse(text, nvars).map(PyPoly).map_err(to_py)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    /// List of `(coefficient, exponents)` in ascending graded-lex order.
    fn terms(&self) -> Vec<(String, Vec<u32>)> {
        self.0.terms().iter().map(|t| (format_rational(&t.coeff), t.exp.0.clone())).collect()
    }

    fn to_json(&self) -> String {
        json(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

/// Monomial point: values `a` (rows of rationals) and signs `eps`.
#[pyclass(name = "MonomialPoint", frozen)]
struct PyPoint(core::MonomialPoint);

#[pymethods]
impl PyPoint {
    #[new]
    #[pyo3(signature = (a, eps=None, independent=false))]
    fn new(a: Vec<Vec<Bound<'_, PyAny>>>, eps: Option<Vec<i8>>, independent: bool) -> PyResult<Self> {
        let a = valvec(a)?;
        let eps = match eps {
            Some(e) => e.into_iter().map(|s| core::Sign::try_from(s).map_err(to_py)).collect::<PyResult<Vec<_>>>()?,
            None => vec![core::Sign::Pos; a.nvars()],
        };
        core::MonomialPoint::new(a, eps, independent).map(PyPoint).map_err(to_py)
    }

    #[getter]
    fn values(&self) -> Vec<Vec<String>> {
        rows_out(self.0.values())
    }

    #[getter]
    fn signs(&self) -> Vec<i8> {
        self.0.signs().iter().map(|s| s.as_i8()).collect()
    }

    /// Sign of `f` at this point: -1, 0 or 1.
    fn sign_at(&self, f: &PyPoly) -> PyResult<i8> {
        core::sign_at(&f.0, &self.0).map_err(to_py)
    }

    /// Value of `f`, or `None` for the zero polynomial.
    fn value(&self, f: &PyPoly) -> PyResult<Option<Vec<String>>> {
        Ok(match core::poly_value(&f.0, &self.0).map_err(to_py)? {
            core::sper::PolyValue::Finite(v) => Some(strings(&v)),
            core::sper::PolyValue::Infinite => None,
        })
    }

    /// Compares `|c1 x^e1|` with `|c2 x^e2|`: "less", "equal", "greater" or "incomparable".
    fn cmp_abs(&self, c1: &Bound<'_, PyAny>, e1: Vec<u32>, c2: &Bound<'_, PyAny>, e2: Vec<u32>) -> PyResult<String> {
        let t1 = core::Term::new(rational(c1)?, e1);
        let t2 = core::Term::new(rational(c2)?, e2);
        let ord = core::cmp_abs(&t1, &t2, &self.0).map_err(to_py)?;
        Ok(serde_json::to_value(ord).expect("serializes").as_str().unwrap_or_default().to_owned())
    }

    /// Point after the blowup step with center `center` and chart `chart`.
    fn blowup(&self, center: Vec<usize>, chart: usize) -> PyResult<Self> {
        let step = step(center, chart)?;
        self.0.transform(&step).map(PyPoint).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("MonomialPoint(a={:?}, eps={:?})", self.values(), self.signs())
    }
}

fn step(center: Vec<usize>, chart: usize) -> PyResult<BlowupStep> {
    let chart = zero_based(&[chart])?[0];
    BlowupStep::new(zero_based(&center)?, chart).map_err(to_py)
}

/// Binomial resolution tree of `x^alpha - x^gamma`.
#[pyclass(name = "ResolutionTree", frozen)]
struct PyTree(core::ResolutionTree);

#[pymethods]
impl PyTree {
    #[getter]
    fn leaf_count(&self) -> usize {
        self.0.leaf_count()
    }

    /// Leaves as `(charts, alpha, gamma)`, charts listed root first.
    fn leaves(&self) -> Vec<(Vec<usize>, Vec<u32>, Vec<u32>)> {
        self.0
            .leaf_paths()
            .into_iter()
            .map(|l| (l.seq.steps.iter().map(|s| s.chart() + 1).collect(), l.alpha.0, l.gamma.0))
            .collect()
    }

    /// Chart path (1-based) chosen by value vector `a`, and the transformed values.
    fn select(&self, a: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<(Vec<usize>, Vec<Vec<String>>)> {
        let sel = core::select_chart(&self.0, &valvec(a)?).map_err(to_py)?;
        Ok((sel.path.iter().map(|j| j + 1).collect(), rows_out(&sel.value)))
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }

    fn to_json(&self) -> String {
        json(&self.0)
    }
}

/// Lexicographic comparison: -1, 0 or 1.
#[pyfunction]
fn lex_cmp(u: Vec<Bound<'_, PyAny>>, v: Vec<Bound<'_, PyAny>>) -> PyResult<i8> {
    Ok(core::lex_cmp(&lexvec(&u)?, &lexvec(&v)?).map_err(to_py)? as i8)
}

/// Rational rank of a list of lex vectors.
#[pyfunction]
fn rat_rank(vecs: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<usize> {
    let vecs = vecs.iter().map(|v| lexvec(v)).collect::<PyResult<Vec<_>>>()?;
    core::rat_rank(&vecs).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (alpha, gamma, node_cap=DEFAULT_NODE_CAP))]
fn resolve_binomial(alpha: Vec<u32>, gamma: Vec<u32>, node_cap: usize) -> PyResult<PyTree> {
    core::resolve_binomial(&ExponentVec(alpha), &ExponentVec(gamma), node_cap).map(PyTree).map_err(to_py)
}

/// Values after one blowup step.
#[pyfunction]
fn transform_value(a: Vec<Vec<Bound<'_, PyAny>>>, center: Vec<usize>, chart: usize) -> PyResult<Vec<Vec<String>>> {
    let a = valvec(a)?;
    Ok(rows_out(&a.transform(&step(center, chart)?).map_err(to_py)?))
}

/// Reduced charts of the relation rows `theta` as a JSON string.
#[pyfunction]
#[pyo3(signature = (theta, nvars=None, node_cap=DEFAULT_NODE_CAP))]
fn reduce_relations(theta: Vec<Vec<Bound<'_, PyAny>>>, nvars: Option<usize>, node_cap: usize) -> PyResult<String> {
    let rows = theta.iter().map(|r| rationals(r)).collect::<PyResult<Vec<_>>>()?;
    let n = nvars
        .or_else(|| rows.first().map(Vec::len))
        .ok_or_else(|| SperkitError::new_err("nvars is required for an empty system"))?;
    let sys = core::RelationSystem::new(n, rows).map_err(to_py)?;
    Ok(json(&core::reduce_relations(&sys, node_cap).map_err(to_py)?))
}

/// Minimal staircase `N` and its points (first lex entries).
#[pyfunction]
#[pyo3(signature = (omega, a, b, depth=1))]
fn staircase(
    omega: Vec<Vec<Bound<'_, PyAny>>>,
    a: Vec<Bound<'_, PyAny>>,
    b: Vec<Bound<'_, PyAny>>,
    depth: usize,
) -> PyResult<(usize, Vec<Vec<Vec<String>>>)> {
    let omega = omega.iter().map(|r| rationals(r)).collect::<PyResult<Vec<_>>>()?;
    let cert = core::staircase(&rationals(&a)?, &rationals(&b)?, &omega, depth).map_err(to_py)?;
    Ok((cert.steps, cert.points.iter().map(|p| rows_out(&p.value)).collect()))
}

/// Runs a JSON job and returns the result document.
#[pyfunction]
fn run_job(job: &str) -> PyResult<String> {
    let job = core::Job::from_json(job).map_err(to_py)?;
    Ok(core::run_job(&job).map_err(to_py)?.to_json())
}

#[pymodule]
fn sperkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SperkitError", m.py().get_type::<SperkitError>())?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyTree>()?;
    m.add_function(wrap_pyfunction!(lex_cmp, m)?)?;
    m.add_function(wrap_pyfunction!(rat_rank, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(transform_value, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_relations, m)?)?;
    m.add_function(wrap_pyfunction!(staircase, m)?)?;
    m.add_function(wrap_pyfunction!(run_job, m)?)?;
    Ok(())
}
