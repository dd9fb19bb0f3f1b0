//! Geometry of three-dimensional metric Lie groups in a left-invariant orthonormal frame.
//!
//! The crate classifies codimension-one subgroups and polar cohomogeneity-two actions,
//! integrates the frame components of geodesics, and evaluates shape operators of the
//! equidistant orbits of cohomogeneity-one actions.

pub mod cli;
pub mod error;
pub mod frame;
pub mod geodesic;
pub mod polarity;
pub mod report;
pub mod subalgebra;
pub mod surface;
pub mod sweep;
pub mod tables;

pub use error::{Error, Result};
pub use frame::{FrameVector, GroupKind, IsometryDegeneracy, StructureData};
pub use geodesic::{
    closed_form_nonunimodular, closed_form_sol3, integrate, sl2_reduction_check, velocity_field,
    GeodesicTrace, GeodesicVelocity, IntegrationMethod, NonUnimodularBranch,
};
pub use polarity::{
    classify_polar_c2, is_totally_geodesic, polarity_form, PolarAction, SecondFundamentalForm,
};
pub use subalgebra::{
    ad_exp, classify, subalgebra_residual, ClassificationResult, LinearMap, Subalgebra2,
    SubalgebraLabel,
};
pub use surface::{
    finite_difference_check, orbit_profile, shape_operator, tangent_frame, ShapeReport,
    TangentFrame2,
};
pub use sweep::{sweep_oracle, SweepResult};
