use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};

/// Ordered generators `(h_1, ..., h_m)` of a subgroup of `GL_n`.
///
/// All components are invertible, square, of the same size, over the same
/// field. The tuple is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixTuple {
    field: FieldSpec,
    dim: usize,
    components: Vec<Matrix>,
}

impl MatrixTuple {
    pub fn new(components: Vec<Matrix>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptyTuple)?;
        let field = first.field();
        let dim = first.rows();
        for (i, c) in components.iter().enumerate() {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !c.is_square() || c.rows() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "component {i} is {}x{}, expected {dim}x{dim}",
                    c.rows(),
                    c.cols()
                )));
            }
            if !c.is_invertible() {
                return Err(Error::NotInvertible);
            }
        }
        Ok(MatrixTuple {
            field,
            dim,
            components,
        })
    }

    /// Builds a tuple without re-checking invertibility. Callers guarantee
    /// the invariants (used for limits and conjugates of valid tuples).
    pub(crate) fn from_trusted(field: FieldSpec, dim: usize, components: Vec<Matrix>) -> Self {
        debug_assert!(components.iter().all(|c| c.rows() == dim && c.cols() == dim));
        MatrixTuple {
            field,
            dim,
            components,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Matrix> {
        self.components
    }

    /// Componentwise `g h_i g⁻¹`.
    pub fn conjugate_by(&self, g: &Matrix, g_inv: &Matrix) -> MatrixTuple {
        let components = self.components.iter().map(|h| g.conjugate(h, g_inv)).collect();
        MatrixTuple::from_trusted(self.field, self.dim, components)
    }

    pub fn transposes(&self) -> MatrixTuple {
        let components = self.components.iter().map(Matrix::transpose).collect();
        MatrixTuple::from_trusted(self.field, self.dim, components)
    }

    /// Block-diagonal embedding `(diag(a_i, b_i))_i` into `GL_{n1+n2}`.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components vs {}",
                self.len(),
                other.len()
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(MatrixTuple::from_trusted(
            self.field,
            self.dim + other.dim,
            components,
        ))
    }
}

impl Deref for MatrixTuple {
    type Target = [Matrix];
    fn deref(&self) -> &[Matrix] {
        &self.components
    }
}
