//! Totally geodesic subgroup leaves and polar actions of cohomogeneity two.
//!
//! A one-parameter subgroup `H = exp(ℝX)` acts polarly with section the subgroup of a
//! totally geodesic subalgebra `𝔰 = 𝔥⊥` exactly when `⟨[X,V],W⟩ + ⟨[W,X],V⟩` vanishes
//! for all `V, W ∈ 𝔰`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, StructureData};
use crate::subalgebra::{classify, Subalgebra2};

/// Values of the second fundamental form `II(X, Y) = ⟨∇_X Y, ξ⟩` on an orthonormal
/// basis `(V, W)` of a subalgebra with unit normal `ξ = V ∧ W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForm {
    pub vv: f64,
    pub vw: f64,
    pub ww: f64,
}

impl SecondFundamentalForm {
    pub fn max_abs(&self) -> f64 {
        self.vv.abs().max(self.vw.abs()).max(self.ww.abs())
    }
}

/// Second fundamental form of the subgroup leaf through the identity.
pub fn second_fundamental_form(
    s: &StructureData,
    plane: &Subalgebra2,
) -> Result<SecondFundamentalForm> {
    if !plane.is_closed(s) {
        return Err(Error::NotASubalgebra {
            residual: plane.closure_witness,
        });
    }
    let (v, w) = plane.basis;
    let xi = plane.normal();
    let ii = |a: &FrameVector, b: &FrameVector| s.connection(a, b).dot(&xi);
    Ok(SecondFundamentalForm {
        vv: ii(&v, &v),
        vw: 0.5 * (ii(&v, &w) + ii(&w, &v)),
        ww: ii(&w, &w),
    })
}

pub fn is_totally_geodesic(s: &StructureData, plane: &Subalgebra2) -> Result<bool> {
    Ok(second_fundamental_form(s, plane)?.max_abs() <= s.zero_tol())
}

/// `⟨[X,V],W⟩ + ⟨[W,X],V⟩`.
pub fn polarity_form(s: &StructureData, x: &FrameVector, v: &FrameVector, w: &FrameVector) -> f64 {
    s.bracket(x, v).dot(w) + s.bracket(w, x).dot(v)
}

/// Largest `|polarity_form(X, ·, ·)|` over basis pairs of the section.
pub fn polarity_defect(s: &StructureData, x: &FrameVector, section: &Subalgebra2) -> f64 {
    let (v, w) = section.basis;
    [(v, v), (v, w), (w, v), (w, w)]
        .iter()
        .map(|(a, b)| polarity_form(s, x, a, b).abs())
        .fold(0.0, f64::max)
}

/// Tolerance for the polarity verdict; the form is quadratic in the structure constants.
pub fn polarity_tol(s: &StructureData) -> f64 {
    let scale = s.scale().max(1.0);
    1e-9 * scale * scale
}

/// A polar cohomogeneity-two action: the line `h_line` and its section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarAction {
    pub section: Subalgebra2,
    /// Unit generator of `𝔥 = 𝔰⊥`.
    pub h_line: FrameVector,
    /// Largest polarity form value over the section basis.
    pub criterion: f64,
}

/// Candidate sections: the classified subalgebras whose leaves are totally geodesic.
pub fn polar_candidates(s: &StructureData) -> Result<Vec<Subalgebra2>> {
    let mut out = Vec::new();
    for plane in classify(s)?.representatives {
        if is_totally_geodesic(s, &plane)? {
            out.push(plane);
        }
    }
    Ok(out)
}

/// Polar actions of one-parameter subgroups, one per orbit-equivalence class.
pub fn classify_polar_c2(s: &StructureData) -> Result<Vec<PolarAction>> {
    let tol = polarity_tol(s);
    let mut out = Vec::new();
    for section in polar_candidates(s)? {
        let h_line = canonical_line(section.normal());
        let criterion = polarity_defect(s, &h_line, &section);
        if criterion <= tol {
            out.push(PolarAction {
                section,
                h_line,
                criterion,
            });
        }
    }
    Ok(out)
}

/// Sign-normalize a line generator so its first nonzero coefficient is positive.
pub fn canonical_line(v: FrameVector) -> FrameVector {
    let lead = v.0.iter().copied().find(|c| c.abs() > 1e-15).unwrap_or(0.0);
    if lead < 0.0 {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sol3_standard_is_polar_along_e1_minus_e3() {
        let s = StructureData::unimodular(1.0, 0.0, -1.0).unwrap();
        let polar = classify_polar_c2(&s).unwrap();
        assert_eq!(polar.len(), 1);
        let r = 0.5f64.sqrt();
        assert!((polar[0].h_line - FrameVector::new(r, 0.0, -r)).max_abs() < 1e-15);
    }

    #[test]
    fn sl2_candidate_fails_polarity() {
        let s = StructureData::unimodular(2.0, 1.0, -1.0).unwrap();
        assert_eq!(polar_candidates(&s).unwrap().len(), 1);
        assert!(classify_polar_c2(&s).unwrap().is_empty());
        let v = FrameVector::new(2f64.sqrt(), 0.0, 1.0);
        let x = FrameVector::new(1.0, 0.0, -2f64.sqrt());
        assert!((polarity_form(&s, &x, &v, &FrameVector::E2) + 6.0).abs() < 1e-12);
    }

    #[test]
    fn semidirect_beta_zero_has_two_polar_lines() {
        let s = StructureData::non_unimodular(2.0, 0.0).unwrap();
        let lines: Vec<_> = classify_polar_c2(&s)
            .unwrap()
            .iter()
            .map(|p| p.h_line)
            .collect();
        assert_eq!(lines, vec![FrameVector::E2, FrameVector::E1]);
        let none = StructureData::non_unimodular(2.0, 1.0).unwrap();
        assert!(classify_polar_c2(&none).unwrap().is_empty());
    }

    #[test]
    fn e2_plane_not_totally_geodesic() {
        let s = StructureData::unimodular(2.0, 1.0, 0.0).unwrap();
        let plane = Subalgebra2::new(&s, FrameVector::E1, FrameVector::E2).unwrap();
        assert!(!is_totally_geodesic(&s, &plane).unwrap());
    }

    #[test]
    fn non_closed_plane_rejected() {
        let s = StructureData::unimodular(2.0, 1.0, -1.0).unwrap();
        let plane = Subalgebra2::unchecked(&s, FrameVector::E1, FrameVector::E2).unwrap();
        assert!(matches!(
            is_totally_geodesic(&s, &plane),
            Err(Error::NotASubalgebra { .. })
        ));
    }
}
