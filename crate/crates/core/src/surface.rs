//! Extrinsic geometry of the equidistant orbits `H·γ(t)` of a cohomogeneity-one action.
//!
//! Each orbit is a left translate of a conjugate subgroup, so its unit normal field is
//! left-invariant and the shape operator `S = −∇ξ` reduces to frame connection values at
//! `ξ = γ'(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, StructureData};
use crate::geodesic::{
    integrate_to_points, parabolic_normal, GeodesicVelocity, NonUnimodularBranch,
};
use crate::subalgebra::{classify, SubalgebraLabel};

/// Default RK4 step for profiles.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Threshold on `x² + z²` below which the SL2 frame is undefined.
pub const FRAME_DEGENERATE_TOL: f64 = 1e-12;

/// Tolerance for `ξ ⊥ span{V, W}` when a velocity is checked against a case. Loose
/// enough to absorb RK4 drift over long traces, tight enough to catch a wrong case.
pub const FRAME_MATCH_TOL: f64 = 1e-6;

/// Orthonormal frame `(V, W)` of an orbit at `γ(t)` together with its normal `ξ = γ'(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentFrame2 {
    pub t: f64,
    pub v: FrameVector,
    pub w: FrameVector,
    pub xi: FrameVector,
}

impl TangentFrame2 {
    /// The same plane with the opposite normal.
    pub fn flipped(&self) -> TangentFrame2 {
        TangentFrame2 {
            xi: -self.xi,
            ..*self
        }
    }

    /// Largest deviation from orthonormality of `(V, W, ξ)`.
    pub fn orthonormality_defect(&self) -> f64 {
        let (v, w, xi) = (self.v, self.w, self.xi);
        [
            v.dot(&w).abs(),
            v.dot(&xi).abs(),
            w.dot(&xi).abs(),
            (v.norm_squared() - 1.0).abs(),
            (w.norm_squared() - 1.0).abs(),
            (xi.norm_squared() - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Shape operator of an orbit in a tangent frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub t: f64,
    /// Symmetrized matrix `[[⟨SV,V⟩, ⟨SV,W⟩], [⟨SW,V⟩, ⟨SW,W⟩]]`.
    pub matrix: [[f64; 2]; 2],
    /// `|⟨SV,W⟩ − ⟨SW,V⟩|` before symmetrization.
    pub asymmetry: f64,
    /// Eigenvalues, largest first.
    pub principal_curvatures: (f64, f64),
    pub mean_curvature: f64,
    pub minimal: bool,
    pub totally_geodesic: bool,
}

impl ShapeReport {
    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1]
    }
}

/// Which construction [`tangent_frame`] uses for `(V, W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrameConvention {
    /// The explicit per-case frames, so signed matrix entries are comparable across runs.
    #[default]
    PerCase,
    /// Gram–Schmidt against `ξ`; only spectra are meaningful.
    Generic,
}

fn sqrt_ratio(s: &StructureData) -> Result<(f64, f64)> {
    let [l1, _, l3] = s.lambdas().ok_or_else(|| Error::CaseMismatch {
        case: "unimodular case".into(),
    })?;
    let n = parabolic_normal(l1, l3)?;
    // (p, q) with V = (q, 0, p) and ξ(0) = (p, 0, −q)
    Ok((n[0], -n[2]))
}

fn h_pm_root(s: &StructureData, case: SubalgebraLabel) -> Result<(f64, f64)> {
    match *s {
        StructureData::NonUnimodular { alpha, beta } => {
            NonUnimodularBranch::try_from(case)?.root(alpha, beta)
        }
        _ => Err(Error::CaseMismatch {
            case: case.to_string(),
        }),
    }
}

/// Fail with `CaseMismatch` unless `case` is one of the classified subalgebras of `s`.
pub fn require_case(s: &StructureData, case: SubalgebraLabel) -> Result<()> {
    let classes = classify(s)?;
    if classes.find(case).is_some() {
        Ok(())
    } else {
        Err(Error::CaseMismatch {
            case: case.to_string(),
        })
    }
}

/// Initial velocity `γ'(0)` of the normal geodesic used for each case.
pub fn initial_normal(s: &StructureData, case: SubalgebraLabel) -> Result<FrameVector> {
    require_case(s, case)?;
    Ok(match case {
        SubalgebraLabel::E2Plane | SubalgebraLabel::H0Abelian => FrameVector::E3,
        SubalgebraLabel::SolAbelian | SubalgebraLabel::H1 => FrameVector::E2,
        SubalgebraLabel::H2 => FrameVector::E1,
        SubalgebraLabel::Sl2Parabolic | SubalgebraLabel::SolNonabelian => {
            let (p, q) = sqrt_ratio(s)?;
            FrameVector::new(p, 0.0, -q)
        }
        SubalgebraLabel::HPlus | SubalgebraLabel::HMinus => {
            let (c, _) = h_pm_root(s, case)?;
            let n = (1.0 + c * c).sqrt();
            FrameVector::new(c / n, -1.0 / n, 0.0)
        }
    })
}

/// Frame of the orbit of `case` through `γ(t)`, where `vel = γ'(t)` lies on the normal
/// geodesic of that case.
pub fn tangent_frame(
    s: &StructureData,
    case: SubalgebraLabel,
    vel: &GeodesicVelocity,
) -> Result<TangentFrame2> {
    require_case(s, case)?;
    let xi = vel.vector();
    let (v, w) = match case {
        SubalgebraLabel::E2Plane | SubalgebraLabel::H0Abelian => (FrameVector::E1, FrameVector::E2),
        SubalgebraLabel::SolAbelian => (FrameVector::E1, FrameVector::E3),
        SubalgebraLabel::Sl2Parabolic => {
            let (x, y, z) = (vel.x, vel.y, vel.z);
            let r2 = x * x + z * z;
            if r2 <= FRAME_DEGENERATE_TOL {
                return Err(Error::FrameDegenerate(r2));
            }
            let r = r2.sqrt();
            (
                FrameVector::new(z / r, 0.0, -x / r),
                FrameVector::new(x * y / r, -r, y * z / r),
            )
        }
        SubalgebraLabel::SolNonabelian => {
            let (p, q) = sqrt_ratio(s)?;
            let v = FrameVector::new(q, 0.0, p);
            (v, unit_wedge(&v, &xi, case)?)
        }
        SubalgebraLabel::H1 => (FrameVector::E1, unit_wedge(&FrameVector::E1, &xi, case)?),
        SubalgebraLabel::H2 => (FrameVector::E2, unit_wedge(&xi, &FrameVector::E2, case)?),
        SubalgebraLabel::HPlus | SubalgebraLabel::HMinus => {
            let (c, _) = h_pm_root(s, case)?;
            let n = (1.0 + c * c).sqrt();
            let v = FrameVector::new(1.0 / n, c / n, 0.0);
            (v, unit_wedge(&v, &xi, case)?)
        }
    };
    let frame = TangentFrame2 { t: vel.t, v, w, xi };
    let residual = frame.orthonormality_defect();
    if residual.is_nan() || residual > FRAME_MATCH_TOL {
        return Err(Error::FrameMismatch {
            case: case.to_string(),
            residual,
        });
    }
    Ok(frame)
}

/// `a ∧ b` normalized; a vanishing wedge means `ξ` lies in the orbit, not normal to it.
fn unit_wedge(a: &FrameVector, b: &FrameVector, case: SubalgebraLabel) -> Result<FrameVector> {
    let w = a.wedge(b);
    w.normalized().ok_or_else(|| Error::FrameMismatch {
        case: case.to_string(),
        residual: a.dot(b).abs(),
    })
}

/// Frame built by Gram–Schmidt from the frame vector least aligned with `ξ`.
pub fn generic_frame(vel: &GeodesicVelocity) -> Result<TangentFrame2> {
    let xi = vel.vector().normalized().ok_or(Error::NonFinite)?;
    let seed = FrameVector::BASIS
        .into_iter()
        .min_by(|a, b| a.dot(&xi).abs().total_cmp(&b.dot(&xi).abs()))
        .expect("three basis vectors");
    let v = (seed - xi * seed.dot(&xi))
        .normalized()
        .ok_or(Error::NonFinite)?;
    Ok(TangentFrame2 {
        t: vel.t,
        v,
        w: xi.wedge(&v),
        xi,
    })
}

/// `S = −∇ξ` in the frame `(V, W)`, with flags decided at the structure's zero tolerance.
pub fn shape_operator(s: &StructureData, frame: &TangentFrame2) -> ShapeReport {
    shape_operator_with_tol(s, frame, s.zero_tol())
}

pub fn shape_operator_with_tol(s: &StructureData, frame: &TangentFrame2, tol: f64) -> ShapeReport {
    let sv = -s.connection(&frame.v, &frame.xi);
    let sw = -s.connection(&frame.w, &frame.xi);
    let a = sv.dot(&frame.v);
    let b1 = sv.dot(&frame.w);
    let b2 = sw.dot(&frame.v);
    let d = sw.dot(&frame.w);
    let b = 0.5 * (b1 + b2);
    let (k1, k2) = symmetric_eigenvalues(a, b, d);
    ShapeReport {
        t: frame.t,
        matrix: [[a, b], [b, d]],
        asymmetry: (b1 - b2).abs(),
        principal_curvatures: (k1, k2),
        mean_curvature: 0.5 * (a + d),
        minimal: (k1 + k2).abs() <= tol,
        totally_geodesic: k1.abs().max(k2.abs()) <= tol,
    }
}

/// Eigenvalues of `[[a, b], [b, d]]`, largest first.
pub fn symmetric_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let m = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(b);
    (m + r, m - r)
}

/// Principal curvatures at distance `t` from the closed-form expressions, largest first.
pub fn closed_form_curvatures(
    s: &StructureData,
    case: SubalgebraLabel,
    t: f64,
) -> Result<(f64, f64)> {
    require_case(s, case)?;
    let sorted = |a: f64, b: f64| if a >= b { (a, b) } else { (b, a) };
    match (*s, case) {
        (StructureData::Unimodular { .. }, SubalgebraLabel::E2Plane) => {
            let m = s.mu().expect("unimodular")[0].abs();
            Ok((m, -m))
        }
        (StructureData::Unimodular { .. }, SubalgebraLabel::SolAbelian) => {
            let m = s.mu().expect("unimodular")[2].abs();
            Ok((m, -m))
        }
        (StructureData::Unimodular { l1, l3, .. }, SubalgebraLabel::SolNonabelian) => {
            let th = ((-l1 * l3).sqrt() * t).tanh();
            let k = (0.25 * (l1 + l3).powi(2) - l1 * l3 * th * th)
                .max(0.0)
                .sqrt();
            Ok((k, -k))
        }
        (StructureData::NonUnimodular { alpha, beta }, _) => match case {
            SubalgebraLabel::H0Abelian => {
                let r = alpha * (1.0 + beta * beta).sqrt();
                Ok((1.0 + r, 1.0 - r))
            }
            SubalgebraLabel::H1 => {
                let th = ((1.0 - alpha) * t).tanh();
                Ok(sorted(-(1.0 + alpha) * th, -(1.0 - alpha) * th))
            }
            SubalgebraLabel::H2 => {
                let th = ((1.0 + alpha) * t).tanh();
                Ok(sorted(-(1.0 - alpha) * th, -(1.0 + alpha) * th))
            }
            _ => {
                let (_, w) = h_pm_root(s, case)?;
                let det_l = s.det_l().expect("non-unimodular");
                let th = (w * t).tanh();
                let r = ((1.0 - det_l) * th * th + beta * beta).max(0.0).sqrt();
                Ok((-th + r, -th - r))
            }
        },
        _ => Err(Error::NoClosedForm(case.to_string())),
    }
}

/// Shape reports of the orbits of `case` at each distance in `t_grid`.
pub fn orbit_profile(
    s: &StructureData,
    case: SubalgebraLabel,
    t_grid: &[f64],
) -> Result<Vec<ShapeReport>> {
    orbit_profile_with(
        s,
        case,
        t_grid,
        DEFAULT_STEP,
        s.zero_tol(),
        FrameConvention::PerCase,
    )
}

pub fn orbit_profile_with(
    s: &StructureData,
    case: SubalgebraLabel,
    t_grid: &[f64],
    step: f64,
    tol: f64,
    convention: FrameConvention,
) -> Result<Vec<ShapeReport>> {
    let n0 = initial_normal(s, case)?;
    let v0 = GeodesicVelocity::at(0.0, n0);
    let vels = integrate_to_points(s, &v0, t_grid, step)?;
    vels.iter()
        .map(|vel| {
            let frame = match convention {
                FrameConvention::PerCase => tangent_frame(s, case, vel)?,
                FrameConvention::Generic => generic_frame(vel)?,
            };
            Ok(shape_operator_with_tol(s, &frame, tol))
        })
        .collect()
}

/// Largest gap between the integrated principal curvatures at `t − h`, `t`, `t + h` and
/// their closed-form values.
pub fn finite_difference_check(
    s: &StructureData,
    case: SubalgebraLabel,
    t: f64,
    h: f64,
) -> Result<f64> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidStep(h));
    }
    let grid = [t - h, t, t + h];
    let reports = orbit_profile(s, case, &grid)?;
    let mut worst = 0.0f64;
    for (r, &ti) in reports.iter().zip(&grid) {
        let (k1, k2) = closed_form_curvatures(s, case, ti)?;
        worst = worst
            .max((r.principal_curvatures.0 - k1).abs())
            .max((r.principal_curvatures.1 - k2).abs());
    }
    Ok(worst)
}
