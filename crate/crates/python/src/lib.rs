//! Python bindings: `iwasawa.Group` plus the family and corpus helpers.

use std::sync::Arc;

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use iwasawa_core::classify::{classify, is_iwasawa, is_modular_lattice, is_schmidt};
use iwasawa_core::corpus::{verify as verify_corpus, CorpusManifest, TheoremId};
use iwasawa_core::degrees::{self, ExactRational, FamilyParams};
use iwasawa_core::group::{cyclic, from_cayley_table};
use iwasawa_core::named::named;
use iwasawa_core::spec::ActionExponent;
use iwasawa_core::{Analysis, Caps, GroupSpec, GroupTable};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts any serializable report into plain Python objects via `json.loads`.
fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, r: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

/// A finite group together with its subgroup lattice.
#[pyclass(frozen, module = "iwasawa")]
struct Group {
    analysis: Arc<Analysis>,
}

impl Group {
    fn wrap(g: GroupTable) -> PyResult<Self> {
        let analysis = Analysis::new(g, &Caps::from_env()).map_err(value_error)?;
        Ok(Group { analysis: Arc::new(analysis) })
    }

    fn check_index(&self, i: usize) -> PyResult<()> {
        let len = self.analysis.lattice().len();
        if i >= len {
            return Err(PyIndexError::new_err(format!("subgroup index {i} out of range ({len} subgroups)")));
        }
        Ok(())
    }
}

#[pymethods]
impl Group {
    /// Builds a group from a JSON group spec string.
    #[staticmethod]
    fn from_spec(json: &str) -> PyResult<Self> {
        let g = GroupSpec::parse(json).and_then(|s| s.build(&Caps::from_env())).map_err(value_error)?;
        Self::wrap(g)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let g = GroupSpec::from_file(path).and_then(|s| s.build(&Caps::from_env())).map_err(value_error)?;
        Self::wrap(g)
    }

    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Self::wrap(named(name).map_err(value_error)?)
    }

    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("cyclic group order must be positive"));
        }
        Self::wrap(cyclic(n))
    }

    /// Validates a Cayley table; the identity is relabelled to 0.
    #[staticmethod]
    fn cayley(table: Vec<Vec<usize>>) -> PyResult<Self> {
        Self::wrap(from_cayley_table(&table).map_err(value_error)?)
    }

    #[staticmethod]
    #[pyo3(signature = (p, q, n, t=None))]
    fn metacyclic(p: u64, q: u64, n: u32, t: Option<u64>) -> PyResult<Self> {
        let t = t.map_or(ActionExponent::AUTO, ActionExponent::Value);
        Self::wrap(GroupSpec::Metacyclic { p, q, n, t }.build(&Caps::from_env()).map_err(value_error)?)
    }

    #[getter]
    fn order(&self) -> usize {
        self.analysis.group().order()
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.analysis.group().name().map(str::to_string)
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        let n = self.order();
        if a >= n || b >= n {
            return Err(PyIndexError::new_err(format!("element index out of range for order {n}")));
        }
        Ok(self.analysis.group().mul(a, b))
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.analysis.group().rows()
    }

    fn subgroup_count(&self) -> usize {
        self.analysis.lattice().len()
    }

    /// Element lists of all subgroups, in lattice index order.
    fn subgroups(&self) -> Vec<Vec<usize>> {
        self.analysis.lattice().subgroups().iter().map(|s| s.elements()).collect()
    }

    fn is_normal(&self, index: usize) -> PyResult<bool> {
        self.check_index(index)?;
        Ok(self.analysis.lattice().is_normal(index))
    }

    fn is_iwasawa(&self) -> bool {
        is_iwasawa(&self.analysis)
    }

    fn is_modular(&self) -> bool {
        is_modular_lattice(self.analysis.lattice())
    }

    fn is_nilpotent(&self) -> bool {
        self.analysis.lattice().is_nilpotent()
    }

    fn is_schmidt(&self) -> PyResult<bool> {
        is_schmidt(&self.analysis).map_err(value_error)
    }

    /// Full classification report as a dict.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify(&self.analysis).map_err(value_error)?)
    }

    /// Subgroup commutativity degree as a `fractions.Fraction`.
    fn sd<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &degrees::sd_value(&self.analysis))
    }

    fn relative_sd<'py>(&self, py: Python<'py>, index: usize) -> PyResult<Bound<'py, PyAny>> {
        self.check_index(index)?;
        fraction(py, &degrees::relative_sd(&self.analysis, index).map_err(value_error)?)
    }

    /// The degree report (fractions rendered as strings) as a dict.
    fn sd_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &degrees::sd(&self.analysis).map_err(value_error)?)
    }

    fn lattice_dot(&self) -> String {
        self.analysis.lattice().to_dot()
    }

    fn __len__(&self) -> usize {
        self.order()
    }

    fn __repr__(&self) -> String {
        match self.name() {
            Some(n) => format!("Group({n}, order={})", self.order()),
            None => format!("Group(order={})", self.order()),
        }
    }
}

fn family_rows(p: u64, q: u64, n_max: u32, t: Option<u64>) -> PyResult<Vec<degrees::FamilyRow>> {
    let params = FamilyParams { p, q, t: t.map_or(ActionExponent::AUTO, ActionExponent::Value) };
    degrees::family_report(&params, n_max, &Caps::from_env()).map_err(value_error)
}

/// Rows of the metacyclic family table as dicts.
#[pyfunction]
#[pyo3(signature = (p, q, n_max, t=None))]
fn family_report(py: Python<'_>, p: u64, q: u64, n_max: u32, t: Option<u64>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &family_rows(p, q, n_max, t)?)
}

#[pyfunction]
#[pyo3(signature = (p, q, n_max, t=None))]
fn family_csv(p: u64, q: u64, n_max: u32, t: Option<u64>) -> PyResult<String> {
    Ok(degrees::family_csv(&family_rows(p, q, n_max, t)?))
}

/// Runs the theorem checks over a corpus (the bundled one by default).
#[pyfunction]
#[pyo3(signature = (theorems="all", manifest=None))]
fn verify<'py>(py: Python<'py>, theorems: &str, manifest: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let m = match manifest {
        Some(path) => CorpusManifest::from_file(path).map_err(value_error)?,
        None => CorpusManifest::bundled(),
    };
    let ids = TheoremId::parse_list(theorems).map_err(value_error)?;
    to_py(py, &verify_corpus(&m, &ids, &Caps::from_env()))
}

#[pymodule]
fn iwasawa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(family_report, m)?)?;
    m.add_function(wrap_pyfunction!(family_csv, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
