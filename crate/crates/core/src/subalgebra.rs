//! Two-dimensional subalgebras up to conjugacy and isometric automorphisms.
//!
//! By the correspondence between subgroup actions and subalgebras, each
//! representative returned by [`classify`] is one orbit-equivalence class of
//! cohomogeneity-one actions on the group.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, GroupKind, IsometryDegeneracy, StructureData};

/// Threshold on `|A ∧ B|` below which a pair does not span a plane.
pub const DEGENERATE_SPAN_TOL: f64 = 1e-12;

/// Below this, a user-supplied `β` is treated as exactly zero.
pub const BETA_ZERO_TOL: f64 = 1e-12;

/// Band around `det L = 1` in which `h+` and `h−` are merged.
pub const DOUBLE_ROOT_TOL: f64 = 1e-9;

/// Canonical names of the subalgebra classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubalgebraLabel {
    /// `span{E1, E2}` in `R² ⋊ R`.
    #[serde(rename = "H0_abelian")]
    H0Abelian,
    /// `span{E1, E3}` in `R² ⋊ R`, `β = 0`.
    #[serde(rename = "H1")]
    H1,
    /// `span{E2, E3}` in `R² ⋊ R`, `β = 0`.
    #[serde(rename = "H2")]
    H2,
    /// `span{E1 + c₊E2, E3}`, `β ≠ 0`, `det L ≤ 1`.
    #[serde(rename = "H_plus")]
    HPlus,
    /// `span{E1 + c₋E2, E3}`, `β ≠ 0`, `det L < 1`.
    #[serde(rename = "H_minus")]
    HMinus,
    /// `span{E1, E2}` in `E2~`.
    #[serde(rename = "E2_plane")]
    E2Plane,
    /// `span{√λ1 E1 + √−λ3 E3, E2}` in `SL2(R)~`.
    #[serde(rename = "SL2_parabolic")]
    Sl2Parabolic,
    /// `span{E1, E3}` in `Sol3`.
    #[serde(rename = "SOL_abelian")]
    SolAbelian,
    /// `span{√λ1 E1 + √−λ3 E3, E2}` in `Sol3`.
    #[serde(rename = "SOL_nonabelian")]
    SolNonabelian,
}

impl SubalgebraLabel {
    pub const ALL: [SubalgebraLabel; 9] = [
        SubalgebraLabel::H0Abelian,
        SubalgebraLabel::H1,
        SubalgebraLabel::H2,
        SubalgebraLabel::HPlus,
        SubalgebraLabel::HMinus,
        SubalgebraLabel::E2Plane,
        SubalgebraLabel::Sl2Parabolic,
        SubalgebraLabel::SolAbelian,
        SubalgebraLabel::SolNonabelian,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SubalgebraLabel::H0Abelian => "H0_abelian",
            SubalgebraLabel::H1 => "H1",
            SubalgebraLabel::H2 => "H2",
            SubalgebraLabel::HPlus => "H_plus",
            SubalgebraLabel::HMinus => "H_minus",
            SubalgebraLabel::E2Plane => "E2_plane",
            SubalgebraLabel::Sl2Parabolic => "SL2_parabolic",
            SubalgebraLabel::SolAbelian => "SOL_abelian",
            SubalgebraLabel::SolNonabelian => "SOL_nonabelian",
        }
    }

    /// Resolve a CLI-style case name, accepting group-relative shorthands
    /// (`plane`, `abelian`, `nonabelian`, `h0`, `h+`, ...).
    pub fn resolve(name: &str, group: GroupKind) -> Result<SubalgebraLabel> {
        let key = name.trim().to_ascii_lowercase();
        if let Ok(label) = key.parse::<SubalgebraLabel>() {
            return Ok(label);
        }
        let label = match (key.as_str(), group) {
            ("plane" | "abelian" | "h0", GroupKind::E2) => SubalgebraLabel::E2Plane,
            ("plane" | "parabolic" | "nonabelian" | "h1", GroupKind::Sl2) => {
                SubalgebraLabel::Sl2Parabolic
            }
            ("abelian" | "h0", GroupKind::Sol3) => SubalgebraLabel::SolAbelian,
            ("nonabelian" | "h1", GroupKind::Sol3) => SubalgebraLabel::SolNonabelian,
            ("h0" | "abelian" | "plane", GroupKind::SemiDirect) => SubalgebraLabel::H0Abelian,
            ("h+" | "hplus" | "h_+", _) => SubalgebraLabel::HPlus,
            ("h-" | "hminus" | "h_-", _) => SubalgebraLabel::HMinus,
            _ => return Err(Error::UnknownCase(name.to_string())),
        };
        Ok(label)
    }
}

impl fmt::Display for SubalgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubalgebraLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SubalgebraLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// A two-dimensional subalgebra with an orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subalgebra2 {
    pub basis: (FrameVector, FrameVector),
    pub label: Option<SubalgebraLabel>,
    /// `|⟨[A, B], A ∧ B⟩|` for the stored orthonormal basis.
    pub closure_witness: f64,
}

impl Subalgebra2 {
    /// Orthonormalize `span{a, b}` and certify that it is closed under the bracket.
    ///
    /// The first basis vector keeps the direction of `a`, flipped if needed so that its
    /// `E1` coefficient is nonnegative.
    pub fn new(s: &StructureData, a: FrameVector, b: FrameVector) -> Result<Self> {
        let plane = Self::unchecked(s, a, b)?;
        if plane.closure_witness > s.zero_tol() {
            return Err(Error::NotASubalgebra {
                residual: plane.closure_witness,
            });
        }
        Ok(plane)
    }

    /// Like [`Subalgebra2::new`] but without rejecting non-closed planes.
    pub fn unchecked(s: &StructureData, a: FrameVector, b: FrameVector) -> Result<Self> {
        let (u, w) = orthonormal_pair(a, b)?;
        let closure_witness = s.bracket(&u, &w).dot(&u.wedge(&w)).abs();
        Ok(Subalgebra2 {
            basis: (u, w),
            label: None,
            closure_witness,
        })
    }

    pub fn with_label(mut self, label: SubalgebraLabel) -> Self {
        self.label = Some(label);
        self
    }

    /// Unit normal `A ∧ B`.
    pub fn normal(&self) -> FrameVector {
        self.basis.0.wedge(&self.basis.1)
    }

    pub fn is_closed(&self, s: &StructureData) -> bool {
        self.closure_witness <= s.zero_tol()
    }

    /// Image of the plane under a linear map (not re-orthonormalized against the
    /// original orientation).
    pub fn mapped(&self, s: &StructureData, map: &LinearMap) -> Result<Subalgebra2> {
        Subalgebra2::unchecked(s, map.apply(&self.basis.0), map.apply(&self.basis.1))
    }

    /// Angle between the two planes, via their normals.
    pub fn angle_to(&self, other: &Subalgebra2) -> f64 {
        let c = self.normal().dot(&other.normal()).abs().min(1.0);
        c.acos()
    }
}

fn orthonormal_pair(a: FrameVector, b: FrameVector) -> Result<(FrameVector, FrameVector)> {
    let na = a.norm();
    let nb = b.norm();
    if !(na.is_finite() && nb.is_finite()) || na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateSpan { wedge: 0.0 });
    }
    let wedge = (a * (1.0 / na)).wedge(&(b * (1.0 / nb))).norm();
    if wedge <= DEGENERATE_SPAN_TOL {
        return Err(Error::DegenerateSpan { wedge });
    }
    let mut u = a * (1.0 / na);
    // make the leading nonzero coefficient positive, E1 first
    let lead = if u[0].abs() > 1e-15 {
        u[0]
    } else if u[1].abs() > 1e-15 {
        u[1]
    } else {
        u[2]
    };
    if lead < 0.0 {
        u = -u;
    }
    let w = (b - u * u.dot(&b))
        .normalized()
        .expect("independent by wedge check");
    Ok((u, w))
}

/// `⟨[A, B], A ∧ B⟩`; vanishes exactly when `span{A, B}` is a subalgebra.
pub fn subalgebra_residual(s: &StructureData, a: &FrameVector, b: &FrameVector) -> Result<f64> {
    let wedge = a.wedge(b);
    if wedge.norm() <= DEGENERATE_SPAN_TOL {
        return Err(Error::DegenerateSpan {
            wedge: wedge.norm(),
        });
    }
    Ok(s.bracket(a, b).dot(&wedge))
}

/// A linear endomorphism of the Lie algebra, as a matrix in the frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap(pub Matrix3<f64>);

impl LinearMap {
    pub fn identity() -> Self {
        LinearMap(Matrix3::identity())
    }

    pub fn apply(&self, v: &FrameVector) -> FrameVector {
        FrameVector::from_vector3(&(self.0 * v.to_vector3()))
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap(self.0 * other.0)
    }
}

/// `Ad_{Exp C} = e^{ad_C}`.
pub fn ad_exp(s: &StructureData, c: &FrameVector) -> LinearMap {
    LinearMap(s.ad_matrix(c).exp())
}

/// Roots `c± = (α ± √(1 − det L)) / ((1 − α)β)` of the reduced subalgebra condition.
///
/// Returns `None` when `β = 0` or when there is no real root (`det L > 1`). Inside the
/// double-root band the two roots coincide and equal `α / ((1 − α)β)`.
pub fn c_pm(alpha: f64, beta: f64) -> Option<(f64, f64)> {
    if beta <= BETA_ZERO_TOL || (1.0 - alpha).abs() < 1e-15 {
        return None;
    }
    let det_l = (1.0 - alpha * alpha) * (1.0 + beta * beta);
    let disc = 1.0 - det_l;
    let denom = (1.0 - alpha) * beta;
    if disc.abs() <= DOUBLE_ROOT_TOL {
        let c = alpha / denom;
        Some((c, c))
    } else if disc > 0.0 {
        let r = disc.sqrt();
        Some(((alpha + r) / denom, (alpha - r) / denom))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub group_name: GroupKind,
    pub representatives: Vec<Subalgebra2>,
    pub multiplicity: usize,
}

impl ClassificationResult {
    pub fn find(&self, label: SubalgebraLabel) -> Option<&Subalgebra2> {
        self.representatives.iter().find(|r| r.label == Some(label))
    }

    pub fn labels(&self) -> Vec<SubalgebraLabel> {
        self.representatives
            .iter()
            .filter_map(|r| r.label)
            .collect()
    }
}

/// Representatives of all two-dimensional subalgebras up to conjugacy and isometric
/// automorphism, one per orbit-equivalence class of cohomogeneity-one actions.
pub fn classify(s: &StructureData) -> Result<ClassificationResult> {
    s.require_isom3()?;
    let group = s.group();
    let mut reps = Vec::new();
    let mut push = |a: FrameVector, b: FrameVector, label: SubalgebraLabel| -> Result<()> {
        reps.push(Subalgebra2::new(s, a, b)?.with_label(label));
        Ok(())
    };
    match *s {
        StructureData::Unimodular { l1, l3, .. } => match group {
            GroupKind::E2 => push(FrameVector::E1, FrameVector::E2, SubalgebraLabel::E2Plane)?,
            GroupKind::Sl2 => push(
                parabolic_generator(l1, l3),
                FrameVector::E2,
                SubalgebraLabel::Sl2Parabolic,
            )?,
            GroupKind::Sol3 => {
                push(
                    FrameVector::E1,
                    FrameVector::E3,
                    SubalgebraLabel::SolAbelian,
                )?;
                push(
                    parabolic_generator(l1, l3),
                    FrameVector::E2,
                    SubalgebraLabel::SolNonabelian,
                )?;
            }
            GroupKind::Su2 => {
                return Err(Error::NotClassifiable(
                    IsometryDegeneracy::NoCodimensionOneSubgroup,
                ))
            }
            // excluded by the isometry gate
            GroupKind::Nil3 | GroupKind::R3 | GroupKind::SemiDirect => {
                unreachable!("isom3 gate admits only SU2, E2, SL2 and Sol3 among unimodular groups")
            }
        },
        StructureData::NonUnimodular { alpha, beta } => {
            push(FrameVector::E1, FrameVector::E2, SubalgebraLabel::H0Abelian)?;
            if beta <= BETA_ZERO_TOL {
                push(FrameVector::E1, FrameVector::E3, SubalgebraLabel::H1)?;
                push(FrameVector::E2, FrameVector::E3, SubalgebraLabel::H2)?;
            } else if let Some((cp, cm)) = c_pm(alpha, beta) {
                push(
                    FrameVector::new(1.0, cp, 0.0),
                    FrameVector::E3,
                    SubalgebraLabel::HPlus,
                )?;
                if cp != cm {
                    push(
                        FrameVector::new(1.0, cm, 0.0),
                        FrameVector::E3,
                        SubalgebraLabel::HMinus,
                    )?;
                }
            }
        }
    }
    let multiplicity = reps.len();
    Ok(ClassificationResult {
        group_name: group,
        representatives: reps,
        multiplicity,
    })
}

/// `√λ1 E1 + √−λ3 E3`.
pub(crate) fn parabolic_generator(l1: f64, l3: f64) -> FrameVector {
    FrameVector::new(l1.max(0.0).sqrt(), 0.0, (-l3).max(0.0).sqrt())
}
