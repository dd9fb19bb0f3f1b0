//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use polar3::{FrameVector, StructureData};
use proptest::prelude::*;

pub fn uni(l1: f64, l2: f64, l3: f64) -> StructureData {
    StructureData::unimodular(l1, l2, l3).unwrap()
}

pub fn non(alpha: f64, beta: f64) -> StructureData {
    StructureData::non_unimodular(alpha, beta).unwrap()
}

/// Bracket written out from the defining relations, without the frame table.
pub fn bracket_oracle(s: &StructureData, x: &FrameVector, y: &FrameVector) -> FrameVector {
    match *s {
        StructureData::Unimodular { l1, l2, l3 } => {
            let c = cross(x, y);
            FrameVector::new(l1 * c[0], l2 * c[1], l3 * c[2])
        }
        StructureData::NonUnimodular { alpha, beta } => {
            // [E3, u] = A u on span{E1, E2}, which is abelian
            let a = [
                [1.0 + alpha, -(1.0 - alpha) * beta],
                [(1.0 + alpha) * beta, 1.0 - alpha],
            ];
            let act = |u: [f64; 2]| {
                [
                    a[0][0] * u[0] + a[0][1] * u[1],
                    a[1][0] * u[0] + a[1][1] * u[1],
                ]
            };
            let ay = act([y[0], y[1]]);
            let ax = act([x[0], x[1]]);
            FrameVector::new(
                x[2] * ay[0] - y[2] * ax[0],
                x[2] * ay[1] - y[2] * ax[1],
                0.0,
            )
        }
    }
}

pub fn cross(a: &FrameVector, b: &FrameVector) -> FrameVector {
    FrameVector::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// Levi-Civita connection on left-invariant fields by the Koszul formula.
pub fn koszul(s: &StructureData, x: &FrameVector, y: &FrameVector) -> FrameVector {
    let br = |a: &FrameVector, b: &FrameVector| bracket_oracle(s, a, b);
    let mut out = [0.0; 3];
    for (k, e) in FrameVector::BASIS.iter().enumerate() {
        out[k] = 0.5 * (br(x, y).dot(e) - br(y, e).dot(x) + br(e, x).dot(y));
    }
    FrameVector(out)
}

/// `exp` of a 3×3 matrix by scaling and squaring around a plain Taylor sum.
pub fn taylor_exp(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let norm: f64 = m.iter().flatten().map(|v| v.abs()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m.map(|row| row.map(|v| v * scale));
    let mut sum = identity();
    let mut term = identity();
    for k in 1..30 {
        term = mat_mul(&term, &a).map(|row| row.map(|v| v / k as f64));
        for i in 0..3 {
            for j in 0..3 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

pub fn identity() -> [[f64; 3]; 3] {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec(a: &[[f64; 3]; 3], v: &FrameVector) -> FrameVector {
    FrameVector::new(
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    )
}

/// Matrix of `ad_X` built from the oracle bracket (column `j` is `[X, E_j]`).
pub fn ad_oracle(s: &StructureData, x: &FrameVector) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (j, e) in FrameVector::BASIS.iter().enumerate() {
        let c = bracket_oracle(s, x, e);
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = c[i];
        }
    }
    m
}

/// `⟨[A, B], A × B⟩` from the oracle bracket.
pub fn closure_oracle(s: &StructureData, a: &FrameVector, b: &FrameVector) -> f64 {
    bracket_oracle(s, a, b).dot(&cross(a, b))
}

/// Smallest angle between the line of `a` and the line of `b`.
pub fn line_angle(a: &FrameVector, b: &FrameVector) -> f64 {
    let c = (a.dot(b) / (a.norm() * b.norm())).abs().min(1.0);
    c.acos()
}

pub fn vector() -> impl Strategy<Value = FrameVector> {
    prop::array::uniform3(-2.0f64..2.0).prop_map(FrameVector)
}

pub fn unit_vector() -> impl Strategy<Value = FrameVector> {
    vector()
        .prop_filter("nonzero", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalized().unwrap())
}

/// Any structure constants, classifiable or not.
pub fn any_structure() -> impl Strategy<Value = StructureData> {
    prop_oneof![
        prop::array::uniform3(-3.0f64..3.0).prop_map(|l| uni(l[0], l[1], l[2])),
        (0.0f64..3.0, 0.0f64..3.0).prop_map(|(a, b)| non(a, b)),
    ]
}

pub fn e2() -> impl Strategy<Value = StructureData> {
    (0.3f64..3.0, 0.2f64..3.0).prop_map(|(l2, d)| uni(l2 + d, l2, 0.0))
}

pub fn sl2() -> impl Strategy<Value = StructureData> {
    (0.3f64..3.0, 0.2f64..3.0, 0.3f64..3.0).prop_map(|(l2, d, l3)| uni(l2 + d, l2, -l3))
}

pub fn sol3() -> impl Strategy<Value = StructureData> {
    (0.3f64..3.0, 0.3f64..3.0).prop_map(|(l1, l3)| uni(l1, 0.0, -l3))
}

/// Non-unimodular data away from the `α ∈ {0, 1}` degeneracies, all `β`.
pub fn semidirect() -> impl Strategy<Value = StructureData> {
    (
        prop_oneof![0.1f64..0.9, 1.2f64..4.0],
        prop_oneof![Just(0.0), 0.1f64..2.5],
    )
        .prop_map(|(a, b)| non(a, b))
}

/// Every family with a three-dimensional isometry group and a classification.
pub fn classifiable() -> impl Strategy<Value = StructureData> {
    prop_oneof![e2(), sl2(), sol3(), semidirect()]
}

/// Longest `|t|` over which a numerically integrated normal geodesic of `case` stays
/// accurate. The `h±` geodesics run into the saddles `±E3` of the velocity flow, whose
/// unstable rate `1 + √(1 − det L)` amplifies rounding.
pub fn stable_horizon(s: &StructureData, case: polar3::SubalgebraLabel, wanted: f64) -> f64 {
    use polar3::SubalgebraLabel::{HMinus, HPlus};
    match (s.det_l(), case) {
        (Some(d), HPlus | HMinus) => wanted.min(10.0 / (1.0 + (1.0 - d).max(0.0).sqrt())),
        _ => wanted,
    }
}
