//! Time-domain acoustic scattering by an elastic inclusion, solved on a
//! small disk after a radial compression of the exterior fluid.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod mesh;
pub mod oracle;
pub mod quadrature;
pub mod radial_map;
pub mod scalar;
pub mod scenario;
pub mod simulation;
pub mod sparse;
pub mod timestepper;
pub mod verify;

pub use assembly::{AssembledSystem, DofMap, MaterialParams};
pub use error::{Error, MeshError, Result};
pub use mesh::{BoundaryTag, Mesh, Region};
pub use radial_map::{Coefficients2, Coefficients3, MapValue, RadialMap, TransformedCoefficients};
pub use scalar::{Field, Real};

pub type RadialMapF64 = RadialMap<f64>;
pub type RadialMapF32 = RadialMap<f32>;
/// Exact rational map; only [`RadialMap::eval`] and [`RadialMap::eval_map`] are available.
pub type RadialMapExact = RadialMap<num_rational::Ratio<i128>>;
