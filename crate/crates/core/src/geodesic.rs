//! Frame components of unit-speed geodesics.
//!
//! A geodesic `γ` is tracked only through `γ'(t) = x E1 + y E2 + z E3`; left-invariance
//! makes every downstream quantity independent of the position `γ(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, StructureData};
use crate::subalgebra::{c_pm, SubalgebraLabel, BETA_ZERO_TOL};

/// Allowed deviation of `|v0|` from 1.
pub const UNIT_SPEED_TOL: f64 = 1e-12;

/// Radicands in `[-RADICAND_CLAMP, 0)` are treated as rounding noise and clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicVelocity {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GeodesicVelocity {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        GeodesicVelocity { t, x, y, z }
    }

    pub fn at(t: f64, v: FrameVector) -> Self {
        GeodesicVelocity::new(t, v[0], v[1], v[2])
    }

    pub fn vector(&self) -> FrameVector {
        FrameVector::new(self.x, self.y, self.z)
    }

    /// `|v|² − 1`.
    pub fn norm_drift(&self) -> f64 {
        self.vector().norm_squared() - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationMethod {
    #[serde(rename = "RK4")]
    Rk4,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicTrace {
    pub samples: Vec<GeodesicVelocity>,
    pub step: f64,
    pub method: IntegrationMethod,
}

impl GeodesicTrace {
    pub fn max_norm_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|v| v.norm_drift().abs())
            .fold(0.0, f64::max)
    }

    pub fn last(&self) -> GeodesicVelocity {
        *self
            .samples
            .last()
            .expect("traces hold at least the initial sample")
    }

    /// Largest componentwise difference to `f` evaluated at the sample times.
    pub fn max_error_against<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<GeodesicVelocity>,
    {
        let mut worst = 0.0f64;
        for v in &self.samples {
            let exact = f(v.t)?;
            worst = worst.max((v.vector() - exact.vector()).max_abs());
        }
        Ok(worst)
    }
}

/// Right-hand side `(x', y', z')` of the geodesic equation `∇_{γ'} γ' = 0` in the frame.
pub fn velocity_field(s: &StructureData, v: &GeodesicVelocity) -> FrameVector {
    field(s, &v.vector())
}

fn field(s: &StructureData, v: &FrameVector) -> FrameVector {
    let (x, y, z) = (v[0], v[1], v[2]);
    match *s {
        StructureData::Unimodular { l1, l2, l3 } => {
            FrameVector::new(y * z * (l2 - l3), -x * z * (l1 - l3), -x * y * (l2 - l1))
        }
        StructureData::NonUnimodular { alpha, beta } => FrameVector::new(
            (1.0 + alpha) * (x + beta * y) * z,
            (1.0 - alpha) * (y - beta * x) * z,
            -(1.0 + alpha) * x * x - 2.0 * alpha * beta * x * y - (1.0 - alpha) * y * y,
        ),
    }
}

fn rk4_step(s: &StructureData, v: &FrameVector, h: f64) -> FrameVector {
    let k1 = field(s, v);
    let k2 = field(s, &(*v + k1 * (0.5 * h)));
    let k3 = field(s, &(*v + k2 * (0.5 * h)));
    let k4 = field(s, &(*v + k3 * h));
    *v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn check_inputs(v0: &GeodesicVelocity, step: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidStep(step));
    }
    let norm = v0.vector().norm();
    if !v0.t.is_finite() || norm.is_nan() || (norm - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(Error::InvalidInitialSpeed { norm });
    }
    Ok(())
}

/// Classical fixed-step RK4 from `v0.t` to `t_end`, without renormalization.
///
/// The last step is shortened to land exactly on `t_end`. A negative direction is
/// integrated backwards and the samples are returned in increasing `t`.
pub fn integrate(
    s: &StructureData,
    v0: &GeodesicVelocity,
    t_end: f64,
    step: f64,
) -> Result<GeodesicTrace> {
    check_inputs(v0, step)?;
    if !t_end.is_finite() {
        return Err(Error::NonFinite);
    }
    let span = t_end - v0.t;
    let dir = if span < 0.0 { -1.0 } else { 1.0 };
    let full = (span.abs() / step).floor() as usize;
    let mut times: Vec<f64> = (1..=full).map(|k| v0.t + dir * step * k as f64).collect();
    // drop a grid point that rounding pushed onto or past the endpoint
    while let Some(&t) = times.last() {
        if (t_end - t) * dir <= step * 1e-9 {
            times.pop();
        } else {
            break;
        }
    }
    if span != 0.0 {
        times.push(t_end);
    }

    let mut samples = Vec::with_capacity(times.len() + 1);
    samples.push(*v0);
    let mut v = v0.vector();
    let mut t = v0.t;
    for &next in &times {
        v = rk4_step(s, &v, next - t);
        t = next;
        samples.push(GeodesicVelocity::at(t, v));
    }
    if dir < 0.0 {
        samples.reverse();
    }
    Ok(GeodesicTrace {
        samples,
        step,
        method: IntegrationMethod::Rk4,
    })
}

/// Integrate from `v0` and sample at each of `times` (any order, either side of `v0.t`).
///
/// Substeps never exceed `step`; each requested time is hit exactly.
pub fn integrate_to_points(
    s: &StructureData,
    v0: &GeodesicVelocity,
    times: &[f64],
    step: f64,
) -> Result<Vec<GeodesicVelocity>> {
    check_inputs(v0, step)?;
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut out = vec![*v0; times.len()];
    let mut forward: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= v0.t).collect();
    let mut backward: Vec<usize> = (0..times.len()).filter(|&i| times[i] < v0.t).collect();
    forward.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    backward.sort_by(|&a, &b| times[b].total_cmp(&times[a]));
    for (order, dir) in [(forward, 1.0), (backward, -1.0)] {
        let mut v = v0.vector();
        let mut t = v0.t;
        for i in order {
            let target = times[i];
            while (target - t) * dir > 0.0 {
                let h = if (target - t).abs() <= step {
                    target - t
                } else {
                    dir * step
                };
                v = rk4_step(s, &v, h);
                t = if (target - t).abs() <= step {
                    target
                } else {
                    t + h
                };
            }
            out[i] = GeodesicVelocity::at(target, v);
        }
    }
    Ok(out)
}

fn guarded_sqrt(x: f64, what: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::BadSignature(format!("{what} = {x} is negative")))
    }
}

/// `(√(−λ3/(λ1−λ3)), 0, −√(λ1/(λ1−λ3)))`, the initial velocity normal to the parabolic
/// and the non-abelian Sol3 orbits.
pub fn parabolic_normal(l1: f64, l3: f64) -> Result<FrameVector> {
    let d = l1 - l3;
    if d.is_nan() || d <= 0.0 {
        return Err(Error::BadSignature(format!(
            "need λ1 > λ3 (got λ1 = {l1}, λ3 = {l3})"
        )));
    }
    Ok(FrameVector::new(
        guarded_sqrt(-l3 / d, "−λ3/(λ1−λ3)")?,
        0.0,
        -guarded_sqrt(l1 / d, "λ1/(λ1−λ3)")?,
    ))
}

/// Closed-form geodesic of Sol3 through the normal of the non-abelian plane.
pub fn closed_form_sol3(l1: f64, l3: f64, t: f64) -> Result<GeodesicVelocity> {
    if !(l1.is_finite() && l3.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = parabolic_normal(l1, l3)?;
    let rate = guarded_sqrt(-l1 * l3, "−λ1λ3")?;
    let sech = 1.0 / (rate * t).cosh();
    Ok(GeodesicVelocity::new(
        t,
        n[0] * sech,
        (rate * t).tanh(),
        n[2] * sech,
    ))
}

/// Normal geodesics of the non-abelian subalgebras of `R² ⋊ R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonUnimodularBranch {
    H1,
    H2,
    HPlus,
    HMinus,
}

impl TryFrom<SubalgebraLabel> for NonUnimodularBranch {
    type Error = Error;
    fn try_from(label: SubalgebraLabel) -> Result<Self> {
        match label {
            SubalgebraLabel::H1 => Ok(NonUnimodularBranch::H1),
            SubalgebraLabel::H2 => Ok(NonUnimodularBranch::H2),
            SubalgebraLabel::HPlus => Ok(NonUnimodularBranch::HPlus),
            SubalgebraLabel::HMinus => Ok(NonUnimodularBranch::HMinus),
            other => Err(Error::BranchMismatch(format!(
                "{other} has no non-unimodular closed form"
            ))),
        }
    }
}

impl NonUnimodularBranch {
    /// `c` and `ω = (1 − α)(1 + βc)` for the `h±` branches.
    pub fn root(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let (cp, cm) = match self {
            NonUnimodularBranch::HPlus | NonUnimodularBranch::HMinus => c_pm(alpha, beta)
                .ok_or_else(|| {
                    Error::BranchMismatch(format!(
                        "h± needs β ≠ 0 and det L ≤ 1 (α = {alpha}, β = {beta})"
                    ))
                })?,
            _ => {
                return Err(Error::BranchMismatch(
                    "only h± branches carry a root c".into(),
                ))
            }
        };
        let c = if *self == NonUnimodularBranch::HPlus {
            cp
        } else {
            cm
        };
        Ok((c, (1.0 - alpha) * (1.0 + beta * c)))
    }
}

/// Closed-form normal geodesic for a non-abelian subalgebra of `R² ⋊ R`.
pub fn closed_form_nonunimodular(
    alpha: f64,
    beta: f64,
    branch: NonUnimodularBranch,
    t: f64,
) -> Result<GeodesicVelocity> {
    if !(alpha.is_finite() && beta.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    let beta_zero = beta.abs() <= BETA_ZERO_TOL;
    let sech = |w: f64| 1.0 / (w * t).cosh();
    match branch {
        NonUnimodularBranch::H1 | NonUnimodularBranch::H2 if !beta_zero => Err(
            Error::BranchMismatch(format!("h1 and h2 need β = 0 (got {beta})")),
        ),
        NonUnimodularBranch::H1 => {
            let w = 1.0 - alpha;
            Ok(GeodesicVelocity::new(t, 0.0, sech(w), -(w * t).tanh()))
        }
        NonUnimodularBranch::H2 => {
            let w = 1.0 + alpha;
            Ok(GeodesicVelocity::new(t, sech(w), 0.0, -(w * t).tanh()))
        }
        NonUnimodularBranch::HPlus | NonUnimodularBranch::HMinus => {
            let (c, w) = branch.root(alpha, beta)?;
            let n = (1.0 + c * c).sqrt();
            let sh = sech(w);
            Ok(GeodesicVelocity::new(
                t,
                c / n * sh,
                -sh / n,
                -(w * t).tanh(),
            ))
        }
    }
}

/// Largest violation of the two first integrals of the SL2 normal geodesic:
/// `x² = ((λ3−λ2)y² − λ3)/(λ1−λ3)` and `z² = ((λ2−λ1)y² + λ1)/(λ1−λ3)`.
pub fn sl2_reduction_check(l1: f64, l2: f64, l3: f64, trace: &GeodesicTrace) -> f64 {
    let d = l1 - l3;
    trace
        .samples
        .iter()
        .map(|v| {
            let y2 = v.y * v.y;
            let rx = (v.x * v.x - ((l3 - l2) * y2 - l3) / d).abs();
            let rz = (v.z * v.z - ((l2 - l1) * y2 + l1) / d).abs();
            rx.max(rz)
        })
        .fold(0.0, f64::max)
}
