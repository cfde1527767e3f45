//! Python bindings: thin wrappers around the core types plus the solver,
//! reduction and enumeration entry points. Matchings cross the boundary as
//! plain lists (`matching[man] = woman`) or pair lists for the partial case.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stablegen::io::{self, InstanceData, InstanceFile};
use stablegen::oracle::EnumerationBudget;
use stablegen::smg::{Matching, PrefRelation, SmgInstance};
use stablegen::smti::{PartialMatching, SmtiInstance, TiedList};
use stablegen::{da, gen, lp, oracle, smti, Man, StrictOrder, Woman};

fn err(e: stablegen::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn budget(max_n: Option<usize>, max_candidates: Option<u64>) -> EnumerationBudget {
    let mut b = EnumerationBudget::default();
    if let Some(m) = max_n {
        b.max_n = m;
    }
    if let Some(m) = max_candidates {
        b.max_candidates = m;
    }
    b
}

/// Strict men's orders plus an arbitrary binary relation per woman.
#[pyclass(name = "SmgInstance", skip_from_py_object)]
#[derive(Clone)]
struct PySmgInstance {
    inner: SmgInstance,
}

#[pymethods]
impl PySmgInstance {
    /// `men_prefs[b]` ranks all women best-first; `women_rels[c]` lists the
    /// ordered pairs `(b, b2)` meaning c likes b at least as much as b2.
    #[new]
    fn new(men_prefs: Vec<Vec<usize>>, women_rels: Vec<Vec<(usize, usize)>>) -> PyResult<Self> {
        let n = men_prefs.len();
        let men = men_prefs
            .into_iter()
            .map(StrictOrder::new)
            .collect::<stablegen::Result<Vec<_>>>()
            .map_err(err)?;
        let rels = women_rels
            .into_iter()
            .map(|pairs| PrefRelation::new(n, pairs))
            .collect::<stablegen::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PySmgInstance {
            inner: SmgInstance::new(men, rels).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        match io::parse_instance(text).map_err(err)?.data {
            InstanceData::Smg(inner) => Ok(PySmgInstance { inner }),
            other => Err(PyValueError::new_err(format!(
                "expected kind smg, got {}",
                other.kind()
            ))),
        }
    }

    #[staticmethod]
    fn counterexample_2x2() -> Self {
        PySmgInstance {
            inner: stablegen::smg::counterexample_2x2(),
        }
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn is_asymmetric(&self) -> bool {
        self.inner.is_asymmetric()
    }

    fn dualize(&self) -> Self {
        PySmgInstance {
            inner: self.inner.dualize(),
        }
    }

    /// Returns `(stable, blocking_pairs)` for `matching[man] = woman`.
    fn is_stable(&self, matching: Vec<usize>) -> PyResult<(bool, Vec<(usize, usize)>)> {
        let m = Matching::from_vec(matching).map_err(err)?;
        let (ok, blocking) = self.inner.is_stable(&m).map_err(err)?;
        Ok((ok, blocking.into_iter().map(|(b, c)| (b.0, c.0)).collect()))
    }

    /// Deferred acceptance. Returns `(verdict, matching, rounds, proposals)`
    /// where verdict is one of `"stable-matching-found"`,
    /// `"no-stable-matching"`, `"not-found"`.
    fn solve_da(&self) -> (String, Option<Vec<usize>>, usize, usize) {
        let res = da::solve_da(&self.inner);
        let (verdict, m) = match res.verdict {
            da::Verdict::Solution(m) => ("stable-matching-found", Some(m.as_vec().to_vec())),
            da::Verdict::NoStableMatching => ("no-stable-matching", None),
            da::Verdict::NotFound => ("not-found", None),
        };
        (verdict.to_string(), m, res.trace.len(), res.proposal_count)
    }

    /// Exact LP decision; asymmetric instances only. Returns a stable
    /// matching or None when the stability polytope is empty.
    fn solve_lp(&self) -> PyResult<Option<Vec<usize>>> {
        let m = lp::decide_via_lp(&self.inner).map_err(err)?;
        Ok(m.map(|m| m.as_vec().to_vec()))
    }

    /// All stable matchings by exhaustive search.
    #[pyo3(signature = (max_n=None, max_candidates=None))]
    fn enumerate(
        &self,
        max_n: Option<usize>,
        max_candidates: Option<u64>,
    ) -> PyResult<Vec<Vec<usize>>> {
        let found = oracle::enumerate_stable_smg(&self.inner, budget(max_n, max_candidates))
            .map_err(err)?;
        Ok(found.into_iter().map(|m| m.as_vec().to_vec()).collect())
    }

    fn to_text(&self) -> String {
        io::emit_instance(&InstanceFile::with_default_names(InstanceData::Smg(
            self.inner.clone(),
        )))
    }

    fn __repr__(&self) -> String {
        format!("SmgInstance(n={})", self.inner.n())
    }
}

/// Incomplete lists with ties on the women's side.
#[pyclass(name = "SmtiInstance", skip_from_py_object)]
#[derive(Clone)]
struct PySmtiInstance {
    inner: SmtiInstance,
}

#[pymethods]
impl PySmtiInstance {
    /// Lists are sequences of tie groups, e.g. `[[0], [1, 2]]`; men's groups
    /// must be singletons. Acceptability must be mutual.
    #[new]
    fn new(men_lists: Vec<Vec<Vec<usize>>>, women_lists: Vec<Vec<Vec<usize>>>) -> PyResult<Self> {
        let n = men_lists.len();
        let men = men_lists
            .into_iter()
            .map(|g| TiedList::new(n, g))
            .collect::<stablegen::Result<Vec<_>>>()
            .map_err(err)?;
        let women = women_lists
            .into_iter()
            .map(|g| TiedList::new(n, g))
            .collect::<stablegen::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PySmtiInstance {
            inner: SmtiInstance::new(men, women).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        match io::parse_instance(text).map_err(err)?.data {
            InstanceData::Smti(inner) => Ok(PySmtiInstance { inner }),
            other => Err(PyValueError::new_err(format!(
                "expected kind smti, got {}",
                other.kind()
            ))),
        }
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Returns `(stable, blocking_pairs)` for a pair list.
    fn is_weakly_stable(&self, pairs: Vec<(usize, usize)>) -> PyResult<(bool, Vec<(usize, usize)>)> {
        let m = PartialMatching::new(
            &self.inner,
            pairs.into_iter().map(|(b, c)| (Man(b), Woman(c))),
        )
        .map_err(err)?;
        let (ok, blocking) = self.inner.is_weakly_stable(&m).map_err(err)?;
        Ok((ok, blocking.into_iter().map(|(b, c)| (b.0, c.0)).collect()))
    }

    /// The equivalent general-relations instance on n+1 agents per side.
    fn reduce(&self) -> PySmgInstance {
        PySmgInstance {
            inner: smti::reduce_smti_to_smg(&self.inner),
        }
    }

    /// All perfect weakly stable matchings, as pair lists.
    #[pyo3(signature = (max_n=None, max_candidates=None))]
    fn enumerate(
        &self,
        max_n: Option<usize>,
        max_candidates: Option<u64>,
    ) -> PyResult<Vec<Vec<(usize, usize)>>> {
        let found = oracle::enumerate_perfect_weakly_stable_smti(
            &self.inner,
            budget(max_n, max_candidates),
        )
        .map_err(err)?;
        Ok(found
            .into_iter()
            .map(|m| m.pairs().map(|(b, c)| (b.0, c.0)).collect())
            .collect())
    }

    fn to_text(&self) -> String {
        io::emit_instance(&InstanceFile::with_default_names(InstanceData::Smti(
            self.inner.clone(),
        )))
    }

    fn __repr__(&self) -> String {
        format!("SmtiInstance(n={})", self.inner.n())
    }
}

/// Seeded random instance with strict men's orders; `asymmetric` keeps at
/// most one orientation per man-pair in every relation.
#[pyfunction]
#[pyo3(signature = (n, seed, asymmetric=false))]
fn gen_smg(n: usize, seed: u64, asymmetric: bool) -> PySmgInstance {
    PySmgInstance {
        inner: gen::gen_smg(n, seed, asymmetric),
    }
}

/// Seeded random instance with incomplete lists and ties on the women's side.
#[pyfunction]
#[pyo3(signature = (n, seed, tie_density=0.3, list_density=0.8))]
fn gen_smti(n: usize, seed: u64, tie_density: f64, list_density: f64) -> PySmtiInstance {
    PySmtiInstance {
        inner: gen::gen_smti(n, seed, tie_density, list_density),
    }
}

#[pymodule]
fn stablegen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySmgInstance>()?;
    m.add_class::<PySmtiInstance>()?;
    m.add_function(wrap_pyfunction!(gen_smg, m)?)?;
    m.add_function(wrap_pyfunction!(gen_smti, m)?)?;
    Ok(())
}
