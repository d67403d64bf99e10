//! Explicit construction and verification of concatenated quantum stabilizer
//! codes `L_{N,K}` built from CSS Reed-Solomon codes over GF(2^(2m)), plus the
//! analytic rate/distance bounds that accompany them.
//!
//! The pipeline is `field` → `rs` → `concat` → `symplectic` checks →
//! `distance`; `bounds` is independent of the rest.

pub mod bounds;
pub mod concat;
pub mod distance;
pub mod field;
pub mod rs;
pub mod symplectic;

pub use bounds::{
    BoundCurve, BoundsError, CurveName, CurveParams, RateChoice, Real, VolumeBoundCheck, WeightBoundQuery,
};
pub use concat::{build_code, build_code_with, ConcatError, Expander, StabilizerCodeL};
pub use distance::{DistanceError, DistanceReport, Method};
pub use field::{find_self_dual_basis, Field, FieldElement, FieldError, SelfDualBasis};
pub use rs::{build_rs_pair, RsCode, RsError};
pub use symplectic::{BinaryMatrix, DualityReport, RowReduced, SymplecticError, SymplecticVector};

/// Curve evaluated in double precision.
pub type BoundCurve64 = BoundCurve<f64>;
/// Curve evaluated in single precision.
pub type BoundCurve32 = BoundCurve<f32>;
/// Rate-choice parameters in double precision.
pub type RateChoice64 = RateChoice<f64>;
/// Volume-bound check in double precision.
pub type VolumeBoundCheck64 = VolumeBoundCheck<f64>;
/// Weight-bound query in double precision.
pub type WeightBoundQuery64 = WeightBoundQuery<f64>;
