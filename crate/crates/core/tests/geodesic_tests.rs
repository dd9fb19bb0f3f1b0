mod common;

use common::*;
use polar3::geodesic::{integrate_to_points, parabolic_normal};
use polar3::{
    closed_form_nonunimodular, closed_form_sol3, integrate, sl2_reduction_check, velocity_field,
    Error, FrameVector, GeodesicVelocity, NonUnimodularBranch, StructureData, SubalgebraLabel,
};
use proptest::prelude::*;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Hand-differentiated closed forms: `(γ', γ'')` at `t`.
fn sol3_pair(l1: f64, l3: f64, t: f64) -> (FrameVector, FrameVector) {
    let n = parabolic_normal(l1, l3).unwrap();
    let r = (-l1 * l3).sqrt();
    let (sh, th) = (sech(r * t), (r * t).tanh());
    (
        FrameVector::new(n[0] * sh, th, n[2] * sh),
        FrameVector::new(-n[0] * r * sh * th, r * sh * sh, -n[2] * r * sh * th),
    )
}

fn non_pair(
    alpha: f64,
    beta: f64,
    branch: NonUnimodularBranch,
    t: f64,
) -> (FrameVector, FrameVector) {
    // each branch is (a sech(wt), b sech(wt), -tanh(wt))
    let (a, b, w) = match branch {
        NonUnimodularBranch::H1 => (0.0, 1.0, 1.0 - alpha),
        NonUnimodularBranch::H2 => (1.0, 0.0, 1.0 + alpha),
        _ => {
            let (c, w) = branch.root(alpha, beta).unwrap();
            let n = (1.0 + c * c).sqrt();
            (c / n, -1.0 / n, w)
        }
    };
    let (sh, th) = (sech(w * t), (w * t).tanh());
    (
        FrameVector::new(a * sh, b * sh, -th),
        FrameVector::new(-a * w * sh * th, -b * w * sh * th, -w * sh * sh),
    )
}

fn ode_residual(s: &StructureData, v: FrameVector, dv: FrameVector, t: f64) -> f64 {
    (velocity_field(s, &GeodesicVelocity::at(t, v)) - dv).max_abs()
}

fn times() -> Vec<f64> {
    (0..1000).map(|k| -5.0 + 10.0 * k as f64 / 999.0).collect()
}

fn h_pm_params() -> impl Strategy<Value = (f64, f64, NonUnimodularBranch)> {
    (
        1.2f64..3.0,
        0.2f64..1.5,
        prop_oneof![
            Just(NonUnimodularBranch::HPlus),
            Just(NonUnimodularBranch::HMinus)
        ],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sol3_closed_form_solves_the_ode(l1 in 0.3f64..3.0, l3 in 0.3f64..3.0) {
        let s = uni(l1, 0.0, -l3);
        for t in times() {
            let (v, dv) = sol3_pair(l1, -l3, t);
            let cf = closed_form_sol3(l1, -l3, t).unwrap();
            prop_assert!((cf.vector() - v).max_abs() <= 1e-14);
            prop_assert!(cf.norm_drift() <= 1e-14);
            prop_assert!(ode_residual(&s, v, dv, t) <= 1e-10);
        }
    }

    #[test]
    fn beta_zero_closed_forms_solve_the_ode(
        alpha in prop_oneof![0.1f64..0.9, 1.2f64..4.0],
        branch in prop_oneof![Just(NonUnimodularBranch::H1), Just(NonUnimodularBranch::H2)],
    ) {
        let s = non(alpha, 0.0);
        for t in times() {
            let (v, dv) = non_pair(alpha, 0.0, branch, t);
            let cf = closed_form_nonunimodular(alpha, 0.0, branch, t).unwrap();
            prop_assert!((cf.vector() - v).max_abs() <= 1e-14);
            prop_assert!(ode_residual(&s, v, dv, t) <= 1e-10 * s.scale());
        }
    }

    #[test]
    fn h_pm_closed_forms_solve_the_ode((alpha, beta, branch) in h_pm_params()) {
        let s = non(alpha, beta);
        for t in times() {
            let (v, dv) = non_pair(alpha, beta, branch, t);
            let cf = closed_form_nonunimodular(alpha, beta, branch, t).unwrap();
            prop_assert!((cf.vector() - v).max_abs() <= 1e-14);
            prop_assert!(cf.norm_drift() <= 1e-14);
            prop_assert!(ode_residual(&s, v, dv, t) <= 1e-10 * s.scale());
        }
    }

    #[test]
    fn sol3_geodesic_is_time_symmetric(l1 in 0.3f64..3.0, l3 in 0.3f64..3.0, t in 0.0f64..5.0) {
        let a = closed_form_sol3(l1, -l3, t).unwrap();
        let b = closed_form_sol3(l1, -l3, -t).unwrap();
        prop_assert!((a.x - b.x).abs() < 1e-15 && (a.z - b.z).abs() < 1e-15);
        prop_assert!((a.y + b.y).abs() < 1e-15);
    }

    #[test]
    fn backward_and_forward_rk4_agree_with_symmetry(l1 in 0.3f64..3.0, l3 in 0.3f64..3.0) {
        let s = uni(l1, 0.0, -l3);
        let v0 = GeodesicVelocity::at(0.0, parabolic_normal(l1, -l3).unwrap());
        let fwd = integrate(&s, &v0, 2.0, 1e-3).unwrap().last();
        let bwd = integrate(&s, &v0, -2.0, 1e-3).unwrap().samples[0];
        prop_assert_eq!(bwd.t, -2.0);
        prop_assert!((fwd.x - bwd.x).abs() < 1e-10 && (fwd.y + bwd.y).abs() < 1e-10);
    }

    #[test]
    fn sl2_first_integrals_and_signs(s in sl2()) {
        let [l1, l2, l3] = s.lambdas().unwrap();
        let v0 = GeodesicVelocity::at(0.0, parabolic_normal(l1, l3).unwrap());
        let trace = integrate(&s, &v0, 5.0, 1e-3).unwrap();
        let back = integrate(&s, &v0, -5.0, 1e-3).unwrap();
        prop_assert!(sl2_reduction_check(l1, l2, l3, &trace) <= 1e-7);
        prop_assert!(sl2_reduction_check(l1, l2, l3, &back) <= 1e-7);
        prop_assert!(trace.max_norm_drift() <= 1e-10);

        let y_max2 = -l3 / (l2 - l3);
        let z_min2 = l2 / (l2 - l3);
        for v in trace.samples.iter().chain(&back.samples) {
            prop_assert!(v.z < 0.0 && v.z * v.z >= z_min2 - 1e-7);
            prop_assert!(v.y * v.y <= y_max2 + 1e-7);
        }
        // x > 0 and y' > 0 hold until y reaches its maximum, where x changes sign
        let first_turn = trace.samples.iter().position(|v| v.x <= 0.0);
        let quarter = first_turn.unwrap_or(trace.samples.len());
        for v in &trace.samples[..quarter] {
            prop_assert!(v.x > 0.0);
            prop_assert!(velocity_field(&s, v)[1] > 0.0);
        }
        if let Some(k) = first_turn {
            let turn = trace.samples[k];
            prop_assert!((turn.y * turn.y - y_max2).abs() <= 1e-3);
        }
    }

    #[test]
    fn h_pm_slope_is_conserved((alpha, beta, branch) in h_pm_params()) {
        let s = non(alpha, beta);
        let (c, _) = branch.root(alpha, beta).unwrap();
        let v0 = closed_form_nonunimodular(alpha, beta, branch, 0.0).unwrap();
        let trace = integrate(&s, &v0, 2.0, 1e-3).unwrap();
        for v in &trace.samples {
            prop_assert!((v.x + c * v.y).abs() <= 1e-9 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn samples_hit_requested_points(s in classifiable(), v in unit_vector(), t_end in -3.0f64..3.0) {
        let v0 = GeodesicVelocity::at(0.0, v);
        let trace = integrate(&s, &v0, t_end, 0.01).unwrap();
        prop_assert!(trace.samples.windows(2).all(|w| w[1].t > w[0].t));
        let end = if t_end < 0.0 { trace.samples[0] } else { trace.last() };
        prop_assert_eq!(end.t, t_end);
        let pts = integrate_to_points(&s, &v0, &[t_end, 0.0], 0.01).unwrap();
        prop_assert_eq!(pts[1], v0);
        prop_assert!((pts[0].vector() - end.vector()).max_abs() <= 1e-12);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let s = uni(1.0, 0.0, -1.0);
    let v0 = closed_form_sol3(1.0, -1.0, 0.0).unwrap();
    let exact = closed_form_sol3(1.0, -1.0, 2.0).unwrap().vector();
    let err = |h: f64| (integrate(&s, &v0, 2.0, h).unwrap().last().vector() - exact).max_abs();
    let ratio = err(0.04) / err(0.02);
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn equilibria_stay_put() {
    for s in [
        uni(2.0, 1.0, 0.0),
        uni(2.0, 1.0, -1.0),
        non(2.0, 1.0),
        non(0.5, 2.0),
    ] {
        let trace = integrate(&s, &GeodesicVelocity::at(0.0, FrameVector::E3), 3.0, 0.01).unwrap();
        for v in &trace.samples {
            assert_eq!(v.vector(), FrameVector::E3, "{s:?}");
        }
    }
}

#[test]
fn integrated_traces_match_closed_forms() {
    let s = uni(1.0, 0.0, -1.0);
    let v0 = closed_form_sol3(1.0, -1.0, 0.0).unwrap();
    let trace = integrate(&s, &v0, 5.0, 1e-3).unwrap();
    let err = trace
        .max_error_against(|t| closed_form_sol3(1.0, -1.0, t))
        .unwrap();
    assert!(err <= 1e-8, "{err}");

    let s = non(2.0, 1.0);
    let branch = NonUnimodularBranch::try_from(SubalgebraLabel::HPlus).unwrap();
    let v0 = closed_form_nonunimodular(2.0, 1.0, branch, 0.0).unwrap();
    let trace = integrate(&s, &v0, -5.0, 1e-3).unwrap();
    let err = trace
        .max_error_against(|t| closed_form_nonunimodular(2.0, 1.0, branch, t))
        .unwrap();
    assert!(err <= 1e-8, "{err}");
}

#[test]
fn invalid_inputs() {
    let s = uni(1.0, 0.0, -1.0);
    let slow = GeodesicVelocity::new(0.0, 0.5, 0.0, 0.0);
    assert!(matches!(
        integrate(&s, &slow, 1.0, 0.01),
        Err(Error::InvalidInitialSpeed { .. })
    ));
    let v0 = GeodesicVelocity::at(0.0, FrameVector::E1);
    for h in [0.0, -0.1, f64::NAN] {
        assert!(matches!(
            integrate(&s, &v0, 1.0, h),
            Err(Error::InvalidStep(_))
        ));
    }
    assert!(matches!(
        closed_form_sol3(1.0, 1.0, 0.0),
        Err(Error::BadSignature(_))
    ));
    assert!(matches!(
        closed_form_nonunimodular(2.0, 1.0, NonUnimodularBranch::H1, 0.0),
        Err(Error::BranchMismatch(_))
    ));
    assert!(matches!(
        closed_form_nonunimodular(0.5, 2.0, NonUnimodularBranch::HPlus, 0.0),
        Err(Error::BranchMismatch(_))
    ));
    assert!(NonUnimodularBranch::try_from(SubalgebraLabel::E2Plane).is_err());
}

#[test]
fn zero_length_integration_returns_the_start() {
    let s = non(2.0, 1.0);
    let v0 = GeodesicVelocity::at(0.0, FrameVector::E1);
    let trace = integrate(&s, &v0, 0.0, 0.1).unwrap();
    assert_eq!(trace.samples, vec![v0]);
}

/// First `t > 0` with `y(t) = 0` on the SL2 normal geodesic, by bisection.
fn sl2_half_period(s: &StructureData) -> f64 {
    let [l1, _, l3] = s.lambdas().unwrap();
    let v0 = GeodesicVelocity::at(0.0, parabolic_normal(l1, l3).unwrap());
    let y_at = |t: f64| integrate_to_points(s, &v0, &[t], 1e-3).unwrap()[0].y;
    let mut hi = 0.1;
    while y_at(hi) > 0.0 {
        hi += 0.1;
    }
    let mut lo = hi - 0.1;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if y_at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn sl2_velocity_is_periodic() {
    let s = uni(2.0, 1.0, -1.0);
    let [l1, _, l3] = s.lambdas().unwrap();
    let n = parabolic_normal(l1, l3).unwrap();
    let half = sl2_half_period(&s);
    assert!((1.6..1.8).contains(&half), "{half}");
    let v0 = GeodesicVelocity::at(0.0, n);
    let pts = integrate_to_points(&s, &v0, &[half, 2.0 * half], 1e-3).unwrap();
    // half a period reaches the normal of the opposite-sign parabolic plane
    assert!((pts[0].vector() - FrameVector::new(-n[0], 0.0, n[2])).max_abs() < 1e-9);
    assert!((pts[1].vector() - n).max_abs() < 1e-9);
}
