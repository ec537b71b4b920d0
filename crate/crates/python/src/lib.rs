use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use molr::enumerate::{enumerate_levels, Filter};
use molr::format::{self, MolrRecord};
use molr::geometry::{self, PlaneReport};
use molr::MolrError;

fn err(e: MolrError) -> PyErr {
    match e {
        MolrError::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A validated set of t mutually orthogonal k x n Latin rectangles.
#[pyclass(name = "MolrSet", module = "molr_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMolrSet {
    inner: molr::MolrSet,
}

#[pymethods]
impl PyMolrSet {
    /// `grids[s][r][j]` is the symbol in rectangle s, row r, column j.
    #[new]
    fn new(grids: Vec<Vec<Vec<u8>>>) -> PyResult<Self> {
        Ok(PyMolrSet { inner: molr::MolrSet::from_grids(&grids).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    fn grids(&self) -> Vec<Vec<Vec<u8>>> {
        self.inner.rects().iter().map(|r| r.to_grid()).collect()
    }

    fn truncate_rows(&self, k: usize) -> PyResult<Self> {
        Ok(PyMolrSet { inner: self.inner.truncate_rows(k).map_err(err)? })
    }

    fn select(&self, indices: Vec<usize>) -> PyResult<Self> {
        Ok(PyMolrSet { inner: self.inner.select(&indices).map_err(err)? })
    }

    fn conjugate_swap(&self, coord: usize) -> PyResult<Self> {
        Ok(PyMolrSet { inner: molr::conjugate_swap(&self.inner, coord).map_err(err)? })
    }

    /// Applies the isotopism given by its rectangle, row, column and
    /// per-slot symbol permutations.
    fn apply_isotopism(
        &self,
        rect_perm: Vec<u8>,
        row_perm: Vec<u8>,
        col_perm: Vec<u8>,
        sym_perms: Vec<Vec<u8>>,
    ) -> PyResult<Self> {
        let g = molr::Isotopism::new(rect_perm, row_perm, col_perm, sym_perms).map_err(err)?;
        Ok(PyMolrSet { inner: g.apply(&self.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("MolrSet(n={}, k={}, t={})", self.inner.n(), self.inner.k(), self.inner.t())
    }

    fn __str__(&self) -> String {
        format::write_record(&MolrRecord::bare(self.inner.clone()))
    }
}

/// Isotopism class summary of a MOLR.
#[pyclass(name = "ClassRecord", module = "molr_py", frozen)]
struct PyClassRecord {
    inner: molr::ClassRecord,
}

#[pymethods]
impl PyClassRecord {
    #[getter]
    fn key<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.canonical_key)
    }

    #[getter]
    fn representative(&self) -> PyMolrSet {
        PyMolrSet { inner: self.inner.representative.clone() }
    }

    #[getter]
    fn aut_order(&self) -> u64 {
        self.inner.aut_order
    }

    /// Concatenation of H, T, sH, sT for the flags that hold, or `-`.
    #[getter]
    fn flags(&self) -> String {
        self.inner.flags.code()
    }

    #[getter]
    fn homogeneous(&self) -> bool {
        self.inner.flags.homogeneous
    }

    #[getter]
    fn transitive(&self) -> bool {
        self.inner.flags.transitive
    }

    #[getter]
    fn stepwise_homogeneous(&self) -> bool {
        self.inner.flags.stepwise_homogeneous
    }

    #[getter]
    fn stepwise_transitive(&self) -> bool {
        self.inner.flags.stepwise_transitive
    }

    #[getter]
    fn rect_orbits(&self) -> Vec<Vec<usize>> {
        self.inner.rect_orbits.clone()
    }

    fn __repr__(&self) -> String {
        format!("ClassRecord(aut_order={}, flags={:?})", self.inner.aut_order, self.inner.flags.code())
    }
}

#[pyfunction]
fn canonical_form(m: &PyMolrSet) -> PyClassRecord {
    PyClassRecord { inner: molr::canonical_form(&m.inner) }
}

#[pyfunction]
fn canonical_key<'py>(py: Python<'py>, m: &PyMolrSet) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &molr::canonical_key(&m.inner))
}

#[pyfunction]
fn paratopism_key<'py>(py: Python<'py>, m: &PyMolrSet) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &molr::paratopism_key(&m.inner))
}

#[pyfunction]
fn aut_order(m: &PyMolrSet) -> u64 {
    molr::aut_order(&m.inner)
}

#[pyfunction]
fn galois_mols(n: usize) -> PyResult<PyMolrSet> {
    Ok(PyMolrSet { inner: molr::galois::galois_mols(n).map_err(err)? })
}

/// Class records of every level `2..=k`, keyed by k.
#[pyfunction]
#[pyo3(signature = (n, t, k=None, filter="none", budget=None))]
fn enumerate(
    py: Python<'_>,
    n: usize,
    t: usize,
    k: Option<usize>,
    filter: &str,
    budget: Option<usize>,
) -> PyResult<Vec<(usize, Vec<PyClassRecord>)>> {
    let filter: Filter = filter.parse().map_err(err)?;
    let budget = budget.unwrap_or_else(molr::enumerate::budget_from_env);
    let k = k.unwrap_or(n);
    py.detach(|| {
        let mut levels = Vec::new();
        enumerate_levels(n, t, k, filter, budget, |f| {
            let recs = f.classes.iter().map(|c| PyClassRecord { inner: c.clone() }).collect();
            levels.push((f.k, recs));
        })
        .map(|_| levels)
        .map_err(err)
    })
}

fn report_dict<'py>(py: Python<'py>, r: &PlaneReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("points", r.points)?;
    d.set_item("lines", r.lines)?;
    d.set_item("line_sizes", r.line_sizes.clone())?;
    d.set_item("axioms", r.axioms.to_vec())?;
    d.set_item("uncovered_pairs", r.uncovered_pairs)?;
    d.set_item("multiply_covered_pairs", r.multiply_covered_pairs)?;
    d.set_item("p1", r.p1)?;
    d.set_item("p2", r.p2)?;
    d.set_item("p3", r.p3)?;
    d.set_item("class", r.class.to_string())?;
    Ok(d)
}

/// Incidence listing of the partial net.
#[pyfunction]
fn partial_net(m: &PyMolrSet) -> String {
    format::write_incidence(&geometry::partial_net(&m.inner))
}

/// Plane report for the partial net, or for the projective completion when
/// `complete` is set.
#[pyfunction]
#[pyo3(signature = (m, complete=false))]
fn check_plane<'py>(py: Python<'py>, m: &PyMolrSet, complete: bool) -> PyResult<Bound<'py, PyDict>> {
    let s = if complete {
        geometry::complete_to_projective(&m.inner).map_err(err)?
    } else {
        geometry::partial_net(&m.inner)
    };
    report_dict(py, &geometry::check_plane(&s))
}

/// `(molr, aut, flags)` per record; header fields are `None` when absent.
#[pyfunction]
fn parse_records(text: &str) -> PyResult<Vec<(PyMolrSet, Option<u64>, Option<String>)>> {
    let recs = format::parse_records(text).map_err(err)?;
    Ok(recs.into_iter().map(|r| (PyMolrSet { inner: r.molr }, r.aut, r.flags.map(|f| f.code()))).collect())
}

#[pyfunction]
fn write_records(sets: Vec<PyRef<'_, PyMolrSet>>) -> String {
    let recs: Vec<MolrRecord> = sets.iter().map(|m| MolrRecord::bare(m.inner.clone())).collect();
    format::write_records(&recs)
}

#[pymodule]
fn molr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMolrSet>()?;
    m.add_class::<PyClassRecord>()?;
    m.add_function(wrap_pyfunction!(canonical_form, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_key, m)?)?;
    m.add_function(wrap_pyfunction!(paratopism_key, m)?)?;
    m.add_function(wrap_pyfunction!(aut_order, m)?)?;
    m.add_function(wrap_pyfunction!(galois_mols, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(partial_net, m)?)?;
    m.add_function(wrap_pyfunction!(check_plane, m)?)?;
    m.add_function(wrap_pyfunction!(parse_records, m)?)?;
    m.add_function(wrap_pyfunction!(write_records, m)?)?;
    Ok(())
}
