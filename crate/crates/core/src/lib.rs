//! Rotationally symmetric manifolds with minimal boundary, generated by their
//! Hawking mass profiles, and their comparison with appended Schwarzschild spaces.
//!
//! The numerical core is generic over the scalar type (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod distances;
pub mod error;
pub mod geometry;
pub mod io;
pub mod profiles;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod schwarzschild;

pub use comparison::{
    h_delta, h_delta_with_exponent, CertifyOptions, ComparisonOptions, Direction, Region,
};
pub use distances::{
    filling_metric_lower, ifd_bound_filling, ifd_bound_lipschitz, tube_comparison,
};
pub use error::{Error, Result};
pub use geometry::GeometryOptions;
pub use io::ProfileDocument;
pub use profiles::{
    deep_well_profile, schwarzschild_profile, sharp_turn_profile, validate_profile, PieceKind,
    ProfilePiece, Side, ValidationOptions, ValidationReport,
};
pub use scalar::Real;

pub type Profile = profiles::AdmissibleProfile<f64>;
pub type Piece = profiles::ProfilePiece<f64>;
pub type DeepWell = profiles::DeepWell<f64>;
pub type Manifold = geometry::RotSymManifold<f64>;
pub type Tube = geometry::Tube<f64>;
pub type AppendedSchwarzschild = schwarzschild::AppendedSchwarzschild<f64>;
pub type AppendedPoint = schwarzschild::AppendedPoint<f64>;
pub type ComparisonSetup = comparison::ComparisonSetup<f64>;
pub type DistortionReport = comparison::DistortionReport<f64>;
pub type DistanceBounds = distances::DistanceBounds<f64>;
