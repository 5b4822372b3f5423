//! Exact computations around complete reducibility of matrix groups.
//!
//! * [`linalg`]: exact linear algebra over `ℚ` and `F_p`.
//! * [`torus`]: cocharacters of the diagonal torus, parabolic block data,
//!   and limits of the conjugation action.
//! * [`instability`]: the numerical function `μ`, normalised comparisons,
//!   and optimal destabilising cocharacters via minimum-norm points.
//! * [`gcr`]: complete-reducibility verdicts, witnesses,
//!   semisimplification, Borel–Tits flags, and finite brute force.
//! * [`io`]: JSON job requests, reports, and the bundled self-test corpus.

pub mod error;
pub mod gcr;
pub mod instability;
pub mod io;
pub mod linalg;
pub mod torus;
pub mod tuple;

pub use error::{Error, Result};
pub use linalg::{FieldSpec, Matrix, Scalar, Subspace};
pub use torus::{Character, Cocharacter};
pub use tuple::MatrixTuple;
