//! Metric Lie algebras of dimension three in their distinguished orthonormal frame.
//!
//! Every quantity in this crate is expressed with respect to a fixed left-invariant
//! orthonormal frame `{E1, E2, E3}`. Unimodular algebras use a Milnor frame with
//! brackets `[E2,E3] = λ1 E1`, `[E3,E1] = λ2 E2`, `[E1,E2] = λ3 E3`; non-unimodular
//! algebras are the semidirect products `R² ⋊_L R` with `ad(E3)|R² = L(α, β)`.
//! No coordinates on the group manifold are ever introduced.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a computed scalar vanishes.
pub const ZERO_RTOL: f64 = 1e-9;

/// Tangent or Lie algebra vector, as coefficients in the frame `{E1, E2, E3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVector(pub [f64; 3]);

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector([0.0, 0.0, 0.0]);
    pub const E1: FrameVector = FrameVector([1.0, 0.0, 0.0]);
    pub const E2: FrameVector = FrameVector([0.0, 1.0, 0.0]);
    pub const E3: FrameVector = FrameVector([0.0, 0.0, 1.0]);
    pub const BASIS: [FrameVector; 3] = [Self::E1, Self::E2, Self::E3];

    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        FrameVector([v1, v2, v3])
    }

    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    /// Cross product for the right-handed orientation of `(E1, E2, E3)`.
    pub fn wedge(&self, other: &FrameVector) -> FrameVector {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        FrameVector([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction; `None` for (numerically) zero input.
    pub fn normalized(&self) -> Option<FrameVector> {
        let n = self.norm();
        if n <= 1e-300 || !n.is_finite() {
            None
        } else {
            Some(*self * (1.0 / n))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.0[0], self.0[1], self.0[2])
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        FrameVector([v[0], v[1], v[2]])
    }
}

impl Index<usize> for FrameVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, o: FrameVector) -> FrameVector {
        FrameVector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for FrameVector {
    fn add_assign(&mut self, o: FrameVector) {
        *self = *self + o;
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, o: FrameVector) -> FrameVector {
        FrameVector([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        FrameVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for FrameVector {
    type Output = FrameVector;
    fn mul(self, k: f64) -> FrameVector {
        FrameVector([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }
}

impl Mul<FrameVector> for f64 {
    type Output = FrameVector;
    fn mul(self, v: FrameVector) -> FrameVector {
        v * self
    }
}

/// Names of the simply connected groups that a set of structure constants can define.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "SU2")]
    Su2,
    #[serde(rename = "E2")]
    E2,
    #[serde(rename = "SL2R")]
    Sl2,
    #[serde(rename = "Sol3")]
    Sol3,
    #[serde(rename = "Nil3")]
    Nil3,
    #[serde(rename = "R3")]
    R3,
    #[serde(rename = "R2xR")]
    SemiDirect,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GroupKind::Su2 => "SU2",
            GroupKind::E2 => "E2~",
            GroupKind::Sl2 => "SL2(R)~",
            GroupKind::Sol3 => "Sol3",
            GroupKind::Nil3 => "Nil3",
            GroupKind::R3 => "R3",
            GroupKind::SemiDirect => "R2xR",
        };
        f.write_str(name)
    }
}

/// Why a metric Lie group falls outside the three-dimensional isometry group regime,
/// or otherwise admits no codimension-one subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometryDegeneracy {
    /// All structure constants equal: `R³` or a round `SU2`.
    ConstantCurvature { group: GroupKind },
    /// Two equal nonzero constants and a vanishing third: flat `E2~`, isometric to `R³`.
    FlatE2,
    /// Two equal constants: an `E(κ, τ)` bundle space with four-dimensional isometry group.
    BundleSpace { kappa: f64, tau: f64 },
    /// `α = 0`: real hyperbolic space of curvature −1.
    HyperbolicSpace,
    /// `α = 1`: the bundle space `E(−4, β)`.
    NonUnimodularBundle { beta: f64 },
    /// `SU2` with distinct constants: the isometry group is three-dimensional, but the
    /// only proper connected subgroups are one-dimensional.
    NoCodimensionOneSubgroup,
}

impl fmt::Display for IsometryDegeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsometryDegeneracy::ConstantCurvature { group } => write!(
                f,
                "dim Isom ≥ 4: equal structure constants give {group} with constant curvature (dim Isom = 6)"
            ),
            IsometryDegeneracy::FlatE2 => {
                write!(f, "dim Isom ≥ 4: E2~ with λ1 = λ2 is isometric to R3 (dim Isom = 6)")
            }
            IsometryDegeneracy::BundleSpace { kappa, tau } => write!(
                f,
                "dim Isom ≥ 4: two equal structure constants give E(κ={kappa}, τ={tau}) (dim Isom = 4)"
            ),
            IsometryDegeneracy::HyperbolicSpace => {
                write!(f, "dim Isom ≥ 4: α = 0 gives hyperbolic space H3(-1) (dim Isom = 6)")
            }
            IsometryDegeneracy::NonUnimodularBundle { beta } => {
                write!(f, "dim Isom ≥ 4: α = 1 gives E(-4, {beta}) (dim Isom = 4)")
            }
            IsometryDegeneracy::NoCodimensionOneSubgroup => write!(
                f,
                "SU2 has no two-dimensional subgroups (dim Isom = 3, no cohomogeneity-one subgroup actions)"
            ),
        }
    }
}

/// Defining parameters of a three-dimensional metric Lie algebra.
///
/// The constructors normalize their input: unimodular constants are sorted in
/// descending order and, when negative constants outnumber positive ones, all signs
/// are flipped (an orientation change); `α` and `β` are replaced by their absolute
/// values (isometric automorphisms `E1 ↔ E2` and `E2 ↦ −E2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StructureData {
    Unimodular { l1: f64, l2: f64, l3: f64 },
    NonUnimodular { alpha: f64, beta: f64 },
}

impl StructureData {
    pub fn unimodular(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite() && l3.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut l = [l1, l2, l3];
        let neg = l.iter().filter(|x| **x < 0.0).count();
        let pos = l.iter().filter(|x| **x > 0.0).count();
        if neg > pos {
            for x in l.iter_mut() {
                *x = -*x;
            }
        }
        l.sort_by(|a, b| b.total_cmp(a));
        // avoid -0.0 leaking into reports
        let [l1, l2, l3] = l.map(|x| if x == 0.0 { 0.0 } else { x });
        Ok(StructureData::Unimodular { l1, l2, l3 })
    }

    pub fn non_unimodular(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(StructureData::NonUnimodular {
            alpha: alpha.abs(),
            beta: beta.abs(),
        })
    }

    /// Largest structure-constant magnitude, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        match *self {
            StructureData::Unimodular { l1, l2, l3 } => l1.abs().max(l2.abs()).max(l3.abs()),
            StructureData::NonUnimodular { alpha, beta } => (1.0 + alpha).max((1.0 + alpha) * beta),
        }
    }

    /// Absolute threshold below which a scalar counts as zero.
    pub fn zero_tol(&self) -> f64 {
        ZERO_RTOL * self.scale().max(1.0)
    }

    pub fn is_zero(&self, x: f64) -> bool {
        x.abs() <= self.zero_tol()
    }

    pub fn lambdas(&self) -> Option<[f64; 3]> {
        match *self {
            StructureData::Unimodular { l1, l2, l3 } => Some([l1, l2, l3]),
            StructureData::NonUnimodular { .. } => None,
        }
    }

    /// `μ_i = (λ1 + λ2 + λ3)/2 − λ_i`; `None` for non-unimodular data.
    pub fn mu(&self) -> Option<[f64; 3]> {
        self.lambdas().map(|l| {
            let h = 0.5 * (l[0] + l[1] + l[2]);
            [h - l[0], h - l[1], h - l[2]]
        })
    }

    /// `det L = (1 − α²)(1 + β²)`; `None` for unimodular data.
    pub fn det_l(&self) -> Option<f64> {
        match *self {
            StructureData::NonUnimodular { alpha, beta } => {
                Some((1.0 - alpha * alpha) * (1.0 + beta * beta))
            }
            StructureData::Unimodular { .. } => None,
        }
    }

    pub fn group(&self) -> GroupKind {
        match *self {
            StructureData::NonUnimodular { .. } => GroupKind::SemiDirect,
            StructureData::Unimodular { l1, l2, l3 } => {
                let sign = |x: f64| -> i8 {
                    if self.is_zero(x) {
                        0
                    } else if x > 0.0 {
                        1
                    } else {
                        -1
                    }
                };
                match (sign(l1), sign(l2), sign(l3)) {
                    (1, 1, 1) => GroupKind::Su2,
                    (1, 1, 0) => GroupKind::E2,
                    (1, 1, -1) => GroupKind::Sl2,
                    (1, 0, -1) => GroupKind::Sol3,
                    (1, 0, 0) => GroupKind::Nil3,
                    (0, 0, 0) => GroupKind::R3,
                    // unnormalized input: fall back on the sign count
                    (a, b, c) => {
                        let pos = [a, b, c].iter().filter(|s| **s > 0).count();
                        let neg = [a, b, c].iter().filter(|s| **s < 0).count();
                        match (pos.max(neg), pos.min(neg), 3 - pos - neg) {
                            (3, 0, 0) => GroupKind::Su2,
                            (2, 0, 1) => GroupKind::E2,
                            (2, 1, 0) => GroupKind::Sl2,
                            (1, 1, 1) => GroupKind::Sol3,
                            (1, 0, 2) => GroupKind::Nil3,
                            _ => GroupKind::R3,
                        }
                    }
                }
            }
        }
    }

    /// The larger-isometry-group case hit by these parameters, if any.
    pub fn isometry_degeneracy(&self) -> Option<IsometryDegeneracy> {
        match *self {
            StructureData::Unimodular { l1, l2, l3 } => {
                let l = [l1, l2, l3];
                let eq = |i: usize, j: usize| self.is_zero(l[i] - l[j]);
                if eq(0, 1) && eq(1, 2) {
                    return Some(IsometryDegeneracy::ConstantCurvature {
                        group: self.group(),
                    });
                }
                for (i, j, k) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
                    if eq(i, j) {
                        if self.is_zero(l[k]) {
                            return Some(IsometryDegeneracy::FlatE2);
                        }
                        return Some(IsometryDegeneracy::BundleSpace {
                            kappa: l[i] * l[k],
                            tau: l[k] / 2.0,
                        });
                    }
                }
                None
            }
            StructureData::NonUnimodular { alpha, beta } => {
                if self.is_zero(alpha) {
                    Some(IsometryDegeneracy::HyperbolicSpace)
                } else if self.is_zero(alpha - 1.0) {
                    Some(IsometryDegeneracy::NonUnimodularBundle { beta })
                } else {
                    None
                }
            }
        }
    }

    /// Whether the isometry group is exactly three-dimensional.
    pub fn isom3(&self) -> bool {
        self.isometry_degeneracy().is_none()
    }

    /// Gate used by every classification routine.
    pub fn require_isom3(&self) -> Result<()> {
        match self.isometry_degeneracy() {
            Some(d) => Err(Error::NotClassifiable(d)),
            None => Ok(()),
        }
    }

    /// `[E_i, E_j]` for all frame pairs.
    pub fn bracket_table(&self) -> [[FrameVector; 3]; 3] {
        let (e12, e23, e31) = match *self {
            StructureData::Unimodular { l1, l2, l3 } => (
                FrameVector::new(0.0, 0.0, l3),
                FrameVector::new(l1, 0.0, 0.0),
                FrameVector::new(0.0, l2, 0.0),
            ),
            StructureData::NonUnimodular { alpha, beta } => (
                FrameVector::ZERO,
                FrameVector::new((1.0 - alpha) * beta, alpha - 1.0, 0.0),
                FrameVector::new(1.0 + alpha, (1.0 + alpha) * beta, 0.0),
            ),
        };
        let z = FrameVector::ZERO;
        [[z, e12, -e31], [-e12, z, e23], [e31, -e23, z]]
    }

    /// `∇_{E_i} E_j` for all frame pairs (Levi-Civita connection on left-invariant fields).
    pub fn connection_table(&self) -> [[FrameVector; 3]; 3] {
        let z = FrameVector::ZERO;
        match *self {
            StructureData::Unimodular { .. } => {
                let [m1, m2, m3] = self.mu().expect("unimodular");
                [
                    [
                        z,
                        FrameVector::new(0.0, 0.0, m1),
                        FrameVector::new(0.0, -m1, 0.0),
                    ],
                    [
                        FrameVector::new(0.0, 0.0, -m2),
                        z,
                        FrameVector::new(m2, 0.0, 0.0),
                    ],
                    [
                        FrameVector::new(0.0, m3, 0.0),
                        FrameVector::new(-m3, 0.0, 0.0),
                        z,
                    ],
                ]
            }
            StructureData::NonUnimodular { alpha, beta } => {
                let ab = alpha * beta;
                [
                    [
                        FrameVector::new(0.0, 0.0, 1.0 + alpha),
                        FrameVector::new(0.0, 0.0, ab),
                        FrameVector::new(-(1.0 + alpha), -ab, 0.0),
                    ],
                    [
                        FrameVector::new(0.0, 0.0, ab),
                        FrameVector::new(0.0, 0.0, 1.0 - alpha),
                        FrameVector::new(-ab, -(1.0 - alpha), 0.0),
                    ],
                    [
                        FrameVector::new(0.0, beta, 0.0),
                        FrameVector::new(-beta, 0.0, 0.0),
                        z,
                    ],
                ]
            }
        }
    }

    /// Lie bracket `[X, Y]`, extended bilinearly from the frame table.
    pub fn bracket(&self, x: &FrameVector, y: &FrameVector) -> FrameVector {
        bilinear(&self.bracket_table(), x, y)
    }

    /// `∇_X Y` for the left-invariant fields with coefficients `X`, `Y`.
    pub fn connection(&self, x: &FrameVector, y: &FrameVector) -> FrameVector {
        bilinear(&self.connection_table(), x, y)
    }

    /// Matrix of `ad_X` in the frame: column `j` holds `[X, E_j]`.
    pub fn ad_matrix(&self, x: &FrameVector) -> Matrix3<f64> {
        let mut m = Matrix3::zeros();
        for (j, ej) in FrameVector::BASIS.iter().enumerate() {
            let c = self.bracket(x, ej);
            for i in 0..3 {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    /// True iff `tr(ad_{E_i}) = 0` for each frame vector.
    pub fn check_unimodularity(&self) -> bool {
        FrameVector::BASIS
            .iter()
            .all(|e| self.is_zero(self.ad_matrix(e).trace()))
    }

    /// Largest Jacobi-identity defect over all frame triples.
    pub fn jacobi_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for x in &FrameVector::BASIS {
            for y in &FrameVector::BASIS {
                for z in &FrameVector::BASIS {
                    let j = self.bracket(&self.bracket(x, y), z)
                        + self.bracket(&self.bracket(y, z), x)
                        + self.bracket(&self.bracket(z, x), y);
                    worst = worst.max(j.norm());
                }
            }
        }
        worst
    }
}

impl fmt::Display for StructureData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureData::Unimodular { l1, l2, l3 } => {
                write!(f, "unimodular(λ = {l1}, {l2}, {l3})")
            }
            StructureData::NonUnimodular { alpha, beta } => {
                write!(f, "non-unimodular(α = {alpha}, β = {beta})")
            }
        }
    }
}

fn bilinear(table: &[[FrameVector; 3]; 3], x: &FrameVector, y: &FrameVector) -> FrameVector {
    let mut out = FrameVector::ZERO;
    for i in 0..3 {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..3 {
            if y[j] != 0.0 {
                out += table[i][j] * (x[i] * y[j]);
            }
        }
    }
    out
}
