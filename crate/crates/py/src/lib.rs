//! Python bindings for the `polar3` crate.
//!
//! Frame vectors cross the boundary as `(x, y, z)` tuples and subalgebra classes as
//! their label strings (`"H_plus"`, `"SOL_nonabelian"`, ...).

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use polar3::report::{build_report, to_json_string};
use polar3::{FrameVector, GeodesicVelocity, StructureData, SubalgebraLabel};

create_exception!(
    polar3,
    Polar3Error,
    PyValueError,
    "Domain error raised by polar3."
);

fn err(e: polar3::Error) -> PyErr {
    Polar3Error::new_err(e.to_string())
}

type Vec3 = (f64, f64, f64);

fn vec3(v: FrameVector) -> Vec3 {
    (v[0], v[1], v[2])
}

fn frame(v: Vec3) -> FrameVector {
    FrameVector::new(v.0, v.1, v.2)
}

/// Structure constants of a three-dimensional metric Lie algebra.
#[pyclass(name = "Structure", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyStructure(StructureData);

#[pymethods]
impl PyStructure {
    #[staticmethod]
    fn unimodular(l1: f64, l2: f64, l3: f64) -> PyResult<Self> {
        StructureData::unimodular(l1, l2, l3)
            .map(PyStructure)
            .map_err(err)
    }

    #[staticmethod]
    fn non_unimodular(alpha: f64, beta: f64) -> PyResult<Self> {
        StructureData::non_unimodular(alpha, beta)
            .map(PyStructure)
            .map_err(err)
    }

    /// Group name, e.g. `"Sol3"`.
    #[getter]
    fn group(&self) -> String {
        self.0.group().to_string()
    }

    /// `(λ1, λ2, λ3)` after normalization, or `None` for non-unimodular data.
    #[getter]
    fn lambdas(&self) -> Option<Vec3> {
        self.0.lambdas().map(|l| (l[0], l[1], l[2]))
    }

    #[getter]
    fn det_l(&self) -> Option<f64> {
        self.0.det_l()
    }

    fn isom3(&self) -> bool {
        self.0.isom3()
    }

    fn is_unimodular(&self) -> bool {
        self.0.check_unimodularity()
    }

    fn bracket(&self, x: Vec3, y: Vec3) -> Vec3 {
        vec3(self.0.bracket(&frame(x), &frame(y)))
    }

    fn connection(&self, x: Vec3, y: Vec3) -> Vec3 {
        vec3(self.0.connection(&frame(x), &frame(y)))
    }

    fn __repr__(&self) -> String {
        format!("Structure({})", self.0)
    }
}

/// A classified two-dimensional subalgebra.
#[pyclass(name = "Subalgebra", frozen, get_all)]
pub struct PySubalgebra {
    label: String,
    basis: (Vec3, Vec3),
    normal: Vec3,
    closure_witness: f64,
}

#[pymethods]
impl PySubalgebra {
    fn __repr__(&self) -> String {
        format!("Subalgebra({}, normal={:?})", self.label, self.normal)
    }
}

/// Curvature data of one orbit.
#[pyclass(name = "ShapeReport", frozen, get_all)]
pub struct PyShapeReport {
    t: f64,
    matrix: ((f64, f64), (f64, f64)),
    k1: f64,
    k2: f64,
    mean: f64,
    minimal: bool,
    totally_geodesic: bool,
}

fn label(s: &StructureData, name: &str) -> PyResult<SubalgebraLabel> {
    SubalgebraLabel::resolve(name, s.group()).map_err(err)
}

/// Representatives of the cohomogeneity-one classes.
#[pyfunction]
fn classify(s: &PyStructure) -> PyResult<Vec<PySubalgebra>> {
    let c = polar3::classify(&s.0).map_err(err)?;
    Ok(c.representatives
        .iter()
        .map(|r| PySubalgebra {
            label: r.label.map(|l| l.as_str().to_string()).unwrap_or_default(),
            basis: (vec3(r.basis.0), vec3(r.basis.1)),
            normal: vec3(r.normal()),
            closure_witness: r.closure_witness,
        })
        .collect())
}

/// Polar cohomogeneity-two actions as `(section label, h_line, criterion)`.
#[pyfunction]
fn polar_actions(s: &PyStructure) -> PyResult<Vec<(String, Vec3, f64)>> {
    let actions = polar3::classify_polar_c2(&s.0).map_err(err)?;
    Ok(actions
        .iter()
        .map(|p| {
            let name = p
                .section
                .label
                .map(|l| l.as_str().to_string())
                .unwrap_or_default();
            (name, vec3(p.h_line), p.criterion)
        })
        .collect())
}

/// Shape reports of the orbits of `case` along its normal geodesic.
#[pyfunction]
fn orbit_profile(s: &PyStructure, case: &str, t: Vec<f64>) -> PyResult<Vec<PyShapeReport>> {
    let case = label(&s.0, case)?;
    let reports = polar3::orbit_profile(&s.0, case, &t).map_err(err)?;
    Ok(reports
        .iter()
        .map(|r| PyShapeReport {
            t: r.t,
            matrix: (
                (r.matrix[0][0], r.matrix[0][1]),
                (r.matrix[1][0], r.matrix[1][1]),
            ),
            k1: r.principal_curvatures.0,
            k2: r.principal_curvatures.1,
            mean: r.mean_curvature,
            minimal: r.minimal,
            totally_geodesic: r.totally_geodesic,
        })
        .collect())
}

/// Closed-form principal curvatures `(k1, k2)` at distance `t`, where available.
#[pyfunction]
fn closed_form_curvatures(s: &PyStructure, case: &str, t: f64) -> PyResult<(f64, f64)> {
    let case = label(&s.0, case)?;
    polar3::surface::closed_form_curvatures(&s.0, case, t).map_err(err)
}

/// Unit normal `γ'(0)` of the normal geodesic of `case`.
#[pyfunction]
fn initial_normal(s: &PyStructure, case: &str) -> PyResult<Vec3> {
    let case = label(&s.0, case)?;
    polar3::surface::initial_normal(&s.0, case)
        .map(vec3)
        .map_err(err)
}

/// RK4 geodesic velocities `(t, x, y, z)` from `v0` at time 0 to `t_end`.
#[pyfunction]
#[pyo3(signature = (s, v0, t_end, step = 1e-3))]
fn integrate(
    s: &PyStructure,
    v0: Vec3,
    t_end: f64,
    step: f64,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let start = GeodesicVelocity::at(0.0, frame(v0));
    let trace = polar3::integrate(&s.0, &start, t_end, step).map_err(err)?;
    Ok(trace.samples.iter().map(|v| (v.t, v.x, v.y, v.z)).collect())
}

/// Number of classes found by the brute-force sphere sweep.
#[pyfunction]
#[pyo3(signature = (s, n = 5000))]
fn sweep_class_count(s: &PyStructure, n: usize) -> PyResult<usize> {
    polar3::sweep_oracle(&s.0, n)
        .map(|r| r.class_count())
        .map_err(err)
}

/// The full classification report as JSON text, identical to `polar3 classify`.
#[pyfunction]
#[pyo3(signature = (s, t_max = 5.0, step = 1e-3, tolerance = 1e-9))]
fn report_json(s: &PyStructure, t_max: f64, step: f64, tolerance: f64) -> PyResult<String> {
    let doc = build_report(&s.0, t_max, step, tolerance).map_err(err)?;
    Ok(to_json_string(&doc))
}

#[pymodule]
#[pyo3(name = "polar3")]
fn polar3_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("Polar3Error", m.py().get_type::<Polar3Error>())?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PySubalgebra>()?;
    m.add_class::<PyShapeReport>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(polar_actions, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_profile, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_curvatures, m)?)?;
    m.add_function(wrap_pyfunction!(initial_normal, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_class_count, m)?)?;
    m.add_function(wrap_pyfunction!(report_json, m)?)?;
    Ok(())
}
