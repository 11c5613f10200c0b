//! q-numerical radius and range computations for structured block operator
//! matrices.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod qrange;
pub mod structured;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, UnitVector, C64};
pub use qrange::{AscentConfig, BoundaryTrace, Ellipse2x2, QParameter, RadiusEstimate};
pub use structured::{Family, StructuredSpec};
pub use bounds::{BoundsConfig, BoundsReport};
