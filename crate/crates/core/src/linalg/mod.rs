//! Exact linear algebra over the rationals and prime fields.

mod algebra;
mod echelon;
mod field;
mod matrix;
mod subspace;

pub use algebra::{commutant, commutant_dimension, enveloping_algebra};
pub(crate) use echelon::EchelonBasis;
pub use echelon::{kernel, rref, solve_affine, AffineSolution, Rref};
pub use field::{FieldSpec, Residue, Scalar};
pub use matrix::Matrix;
pub use subspace::{spin, Subspace};
