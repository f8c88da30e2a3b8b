//! Python bindings. Rationals cross the boundary as strings (`"3/4"`), so
//! `fractions.Fraction`, `int` and `str` coordinates are all accepted;
//! structured results come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use skelbary::experiment::{self, ExperimentSpec, Generator, TargetKind};
use skelbary::solver::{
    self, DecompositionRequest, DecompositionWitness, Part, SearchOptions, Strategy,
};
use skelbary::{testmap, Error, Face, Scalar, Vector};

fn value_error(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    obj.str()?.to_str()?.parse().map_err(value_error)
}

fn vector(obj: &Bound<'_, PyAny>) -> PyResult<Vector> {
    let coords = obj
        .try_iter()?
        .map(|x| scalar(&x?))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Vector::new(coords))
}

fn vectors(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Vector>> {
    obj.try_iter()?.map(|p| vector(&p?)).collect()
}

fn strings(v: &Vector) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Round-trips a serializable value through `json.loads`.
fn to_python<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Polytope", module = "skelbary", frozen)]
struct PyPolytope {
    inner: skelbary::Polytope,
}

impl PyPolytope {
    fn face(&self, ids: Vec<usize>) -> PyResult<&Face> {
        let mut ids = ids;
        ids.sort_unstable();
        ids.dedup();
        self.inner
            .lattice()
            .find(&ids)
            .ok_or_else(|| PyValueError::new_err(format!("{ids:?} is not a face")))
    }
}

#[pymethods]
impl PyPolytope {
    #[new]
    #[pyo3(signature = (vertices, name = ""))]
    fn new(vertices: &Bound<'_, PyAny>, name: &str) -> PyResult<Self> {
        let pts = vectors(vertices)?;
        let inner = skelbary::Polytope::build_named(name, &pts).map_err(value_error)?;
        Ok(PyPolytope { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = skelbary::Polytope::from_json(text).map_err(value_error)?;
        Ok(PyPolytope { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = skelbary::Polytope::load(path).map_err(value_error)?;
        Ok(PyPolytope { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_file_data()).expect("polytope serializes")
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<String>> {
        self.inner.vertices().iter().map(strings).collect()
    }

    /// `(normal, offset, vertex_ids)` with `normal · x ≤ offset` on the polytope.
    #[getter]
    fn facets(&self) -> Vec<(Vec<String>, String, Vec<usize>)> {
        self.inner
            .facets()
            .iter()
            .map(|f| {
                (
                    strings(&f.normal),
                    f.offset.to_string(),
                    f.vertex_ids.clone(),
                )
            })
            .collect()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    /// Vertex-id lists of every face of dimension `≤ k`.
    fn skeleton(&self, k: usize) -> Vec<Vec<usize>> {
        self.inner
            .faces_of_dim_at_most(k)
            .into_iter()
            .map(|f| f.vertex_ids().to_vec())
            .collect()
    }

    fn contains(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.inner.contains(&vector(point)?).map_err(value_error)
    }

    /// Vertex ids of the smallest face containing `point`.
    fn carrier_face(&self, point: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
        let p = vector(point)?;
        let face = self.inner.carrier_face(&p).map_err(value_error)?;
        Ok(face.vertex_ids().to_vec())
    }

    fn vertex_centroid(&self) -> Vec<String> {
        strings(&self.inner.vertex_centroid())
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope(name={:?}, dim={}, f_vector={:?})",
            self.inner.name(),
            self.inner.dim(),
            self.inner.f_vector()
        )
    }
}

fn parts_for(n: Option<usize>, k: Option<usize>, parts: Option<&str>) -> PyResult<Vec<Part>> {
    match (parts, n, k) {
        (Some(s), _, _) => solver::parse_parts(s).map_err(value_error),
        (None, Some(n), Some(k)) => {
            if n == 0 {
                return Err(PyValueError::new_err("n must be positive"));
            }
            let w = Scalar::new(1, n as i64);
            Ok(vec![Part::new(k, w); n])
        }
        _ => Err(PyValueError::new_err("give n and k, or parts")),
    }
}

/// Decomposes `point` as a barycenter of points on skeleta. Returns the
/// witness or infeasibility report as a dict with a `status` key.
#[pyfunction]
#[pyo3(signature = (polytope, point, n = None, k = None, parts = None, strategy = "direct", parallel = false))]
#[allow(clippy::too_many_arguments)]
fn decompose<'py>(
    py: Python<'py>,
    polytope: &PyPolytope,
    point: &Bound<'py, PyAny>,
    n: Option<usize>,
    k: Option<usize>,
    parts: Option<&str>,
    strategy: &str,
    parallel: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let p = &polytope.inner;
    let target = vector(point)?;
    let strategy: Strategy = strategy.parse().map_err(value_error)?;
    let req = DecompositionRequest::new(p, target, parts_for(n, k, parts)?).map_err(value_error)?;
    let options = SearchOptions {
        parallel,
        ..SearchOptions::default()
    };
    let outcome = py
        .detach(|| solver::decompose_with(&req, strategy, options))
        .map_err(value_error)?;
    to_python(py, &outcome)
}

/// Exact check of a witness dict (or JSON string) as returned by `decompose`.
#[pyfunction]
#[pyo3(signature = (polytope, point, witness, n = None, k = None, parts = None))]
fn check_witness(
    py: Python<'_>,
    polytope: &PyPolytope,
    point: &Bound<'_, PyAny>,
    witness: &Bound<'_, PyAny>,
    n: Option<usize>,
    k: Option<usize>,
    parts: Option<&str>,
) -> PyResult<bool> {
    let p = &polytope.inner;
    let text: String = match witness.extract::<String>() {
        Ok(s) => s,
        Err(_) => py
            .import("json")?
            .call_method1("dumps", (witness,))?
            .extract()?,
    };
    let w = DecompositionWitness::from_json(&text).map_err(value_error)?;
    let req = DecompositionRequest::new(p, vector(point)?, parts_for(n, k, parts)?)
        .map_err(value_error)?;
    Ok(solver::check_witness(&req, &w))
}

#[pyfunction]
fn dist_to_skeleton(polytope: &PyPolytope, point: &Bound<'_, PyAny>, k: usize) -> PyResult<f64> {
    testmap::dist_to_skeleton(&polytope.inner, &vector(point)?, k).map_err(value_error)
}

/// `{"psi": [...], "phi": [...], "phi_max_abs": float}`.
#[pyfunction]
fn evaluate_phi<'py>(
    py: Python<'py>,
    polytope: &PyPolytope,
    points: &Bound<'py, PyAny>,
    k: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let eval = testmap::evaluate_phi(&vectors(points)?, &polytope.inner, k).map_err(value_error)?;
    to_python(py, &eval)
}

/// Dimension of `{(xᵢ) : xᵢ ∈ faces[i], Σ wᵢ xᵢ = 0}`, `None` when empty.
/// Faces are given by vertex ids.
#[pyfunction]
fn intersection_dimension(
    polytope: &PyPolytope,
    faces: Vec<Vec<usize>>,
    weights: &Bound<'_, PyAny>,
) -> PyResult<Option<usize>> {
    let faces = faces
        .into_iter()
        .map(|ids| polytope.face(ids))
        .collect::<PyResult<Vec<_>>>()?;
    let weights = weights
        .try_iter()?
        .map(|w| scalar(&w?))
        .collect::<PyResult<Vec<_>>>()?;
    solver::intersection_dimension(&polytope.inner, &faces, &weights).map_err(value_error)
}

#[pyfunction]
fn verify_dimension_inequality<'py>(
    py: Python<'py>,
    polytope: &PyPolytope,
    n: usize,
    k: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| solver::verify_dimension_inequality(&polytope.inner, n, k))
        .map_err(value_error)?;
    to_python(py, &report)
}

/// `simplex`, `cube`, `cross_polytope` or `random_hull`.
#[pyfunction]
#[pyo3(signature = (generator, dim, seed = 0))]
fn generate(generator: &str, dim: usize, seed: u64) -> PyResult<PyPolytope> {
    let g: Generator = generator.parse().map_err(value_error)?;
    let inner = experiment::generate(g, dim, seed).map_err(value_error)?;
    Ok(PyPolytope { inner })
}

/// Runs a `k·n ≥ d` sweep (or, with `probe=True`, a `k·n < d` probe).
/// Returns `(csv_text, summary_dict)`.
#[pyfunction]
#[pyo3(signature = (generator, dim, n_range, k_range, trials = 1, seed = 0, target = "interior", probe = false))]
#[allow(clippy::too_many_arguments)]
fn run_sweep<'py>(
    py: Python<'py>,
    generator: &str,
    dim: usize,
    n_range: (usize, usize),
    k_range: (usize, usize),
    trials: usize,
    seed: u64,
    target: &str,
    probe: bool,
) -> PyResult<(String, Bound<'py, PyAny>)> {
    let g: Generator = generator.parse().map_err(value_error)?;
    let t: TargetKind = target.parse().map_err(value_error)?;
    let spec = ExperimentSpec::new(
        g,
        dim,
        n_range.0..=n_range.1,
        k_range.0..=k_range.1,
        trials,
        seed,
    )
    .with_target(t);
    let report = py
        .detach(|| {
            if probe {
                experiment::probe_infeasible(&spec)
            } else {
                experiment::run_theorem_sweep(&spec)
            }
        })
        .map_err(value_error)?;
    Ok((report.to_csv_string(), to_python(py, &report.summary)?))
}

#[pymodule]
#[pyo3(name = "skelbary")]
fn skelbary_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(check_witness, m)?)?;
    m.add_function(wrap_pyfunction!(dist_to_skeleton, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_phi, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dimension_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add(
        "__all__",
        PyList::new(
            m.py(),
            [
                "Polytope",
                "decompose",
                "check_witness",
                "dist_to_skeleton",
                "evaluate_phi",
                "intersection_dimension",
                "verify_dimension_inequality",
                "generate",
                "run_sweep",
            ],
        )?,
    )?;
    Ok(())
}
