//! Python bindings for `fillcurves`.

use fillcurves::catalog_io::{catalog_system, parse_csf, serialize_csf};
use fillcurves::curve_system::{CurveRef, CurveSystem as Inner};
use fillcurves::free_group::{check_pingpong_inclusion, pingpong_generator, relation_search_abstract, stallings_rank};
use fillcurves::twist_engine::{self, TwistWord};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: fillcurves::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A named curve system on a closed oriented surface.
#[pyclass(frozen, name = "CurveSystem", module = "fillcurves_py")]
struct CurveSystem {
    inner: Inner,
}

impl CurveSystem {
    fn curve(&self, name: &str) -> PyResult<CurveRef> {
        self.inner.curve(name).map_err(err)
    }
}

#[pymethods]
impl CurveSystem {
    /// Parses CSF text.
    #[staticmethod]
    fn from_csf(text: &str) -> PyResult<Self> {
        Ok(CurveSystem { inner: parse_csf(text).map_err(err)? })
    }

    /// A verified catalog pair such as `g2_i4`.
    #[staticmethod]
    fn catalog(id: &str) -> PyResult<Self> {
        Ok(CurveSystem { inner: catalog_system(id).map_err(err)? })
    }

    fn to_csf(&self) -> String {
        serialize_csf(&self.inner)
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.ambient_genus()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn intersection_number(&self, x: &str, y: &str) -> PyResult<u64> {
        if x == y {
            self.curve(x)?;
            return Ok(0);
        }
        self.inner.intersection_number(&self.curve(x)?, &self.curve(y)?).map_err(err)
    }

    /// Geometric intersection numbers as a nested dict.
    fn intersection_table<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.intersection_table().map_err(err)?)
    }

    fn is_filling<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.is_filling().map_err(err)?)
    }

    /// Sorted face degrees.
    fn face_degrees(&self) -> Vec<usize> {
        self.inner.faces().degree_multiset()
    }

    /// `T_along^k` applied to `target`; with `name` the image is added as a
    /// new curve, otherwise it replaces `target`.
    #[pyo3(signature = (along, target, k, name=None))]
    fn twist(&self, along: &str, target: &str, k: i64, name: Option<&str>) -> PyResult<Self> {
        let (c, t) = (self.curve(along)?, self.curve(target)?);
        let inner = match name {
            Some(n) => twist_engine::twist_copy(&self.inner, &c, &t, k, n),
            None => twist_engine::dehn_twist(&self.inner, &c, &t, k),
        }
        .map_err(err)?;
        Ok(CurveSystem { inner })
    }

    /// Applies a twist word such as `"T_b^-1 T_a"`, letters left to right.
    fn apply_word(&self, word: &str) -> PyResult<Self> {
        let w = TwistWord::parse(word).map_err(err)?;
        Ok(CurveSystem { inner: twist_engine::apply_twist_word(&self.inner, &w).map_err(err)? })
    }

    fn family(&self, a: &str, b: &str, d: i64) -> PyResult<Self> {
        let inner = twist_engine::construct_family(&self.inner, &self.curve(a)?, &self.curve(b)?, d).map_err(err)?;
        Ok(CurveSystem { inner })
    }

    /// Builds and checks the d-curve family; returns `(family, report)`.
    fn verify_family<'py>(&self, py: Python<'py>, a: &str, b: &str, d: i64) -> PyResult<(Self, Bound<'py, PyAny>)> {
        let (fam, report) =
            twist_engine::verify_family(&self.inner, &self.curve(a)?, &self.curve(b)?, d).map_err(err)?;
        Ok((CurveSystem { inner: fam }, to_py(py, &report)?))
    }

    fn verify_conjugation<'py>(&self, py: Python<'py>, word: &str, a: &str) -> PyResult<Bound<'py, PyAny>> {
        let w = TwistWord::parse(word).map_err(err)?;
        to_py(py, &twist_engine::verify_conjugation(&self.inner, &w, &self.curve(a)?).map_err(err)?)
    }

    fn relation_probe<'py>(
        &self,
        py: Python<'py>,
        generators: Vec<String>,
        max_len: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let gens: Vec<CurveRef> = generators.iter().map(|g| self.curve(g)).collect::<PyResult<_>>()?;
        to_py(py, &twist_engine::relation_probe(&self.inner, &gens, max_len).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "CurveSystem(genus={}, curves={:?}, vertices={})",
            self.inner.ambient_genus(),
            self.inner.names(),
            self.inner.vertex_count()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        serialize_csf(&self.inner) == serialize_csf(&other.inner)
    }
}

/// Rank certificate, ping-pong check and relation search for g_0..g_{d-1}.
#[pyfunction]
#[pyo3(signature = (d, max_len=6, k_max=3))]
fn certify_free<'py>(py: Python<'py>, d: i64, max_len: usize, k_max: i64) -> PyResult<Bound<'py, PyAny>> {
    if d < 2 {
        return Err(PyValueError::new_err(format!("d must be >= 2, got {d}")));
    }
    let gens = (0..d).map(pingpong_generator).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let rank = stallings_rank(&gens).map_err(err)?;
    let pp = check_pingpong_inclusion(d as usize, k_max, max_len).map_err(err)?;
    let rel = relation_search_abstract(d as usize, max_len).map_err(err)?;
    #[derive(Serialize)]
    struct Certificate {
        generators: Vec<String>,
        rank: fillcurves::free_group::RankCertificate,
        pingpong: fillcurves::free_group::PingPongReport,
        relations: Vec<String>,
    }
    let cert = Certificate {
        generators: gens.iter().map(|g| g.to_string()).collect(),
        rank,
        pingpong: pp,
        relations: rel.iter().map(|r| fillcurves::free_group::format_abstract(r)).collect(),
    };
    to_py(py, &cert)
}

/// Face count predicted for the d-curve family.
#[pyfunction]
fn family_face_formula(i_ab: u64, d: usize, g: u32) -> i64 {
    twist_engine::family_face_formula(i_ab, d, g)
}

#[pymodule]
fn fillcurves_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CurveSystem>()?;
    m.add_function(wrap_pyfunction!(certify_free, m)?)?;
    m.add_function(wrap_pyfunction!(family_face_formula, m)?)?;
    Ok(())
}
