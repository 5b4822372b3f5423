//! Row reduction, kernels and affine solving.

use crate::error::{Error, Result};
use crate::linalg::field::Scalar;
use crate::linalg::matrix::Matrix;

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &Matrix) -> Rref {
    let field = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Scalar>> = m.row_vectors();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let matrix = if rows == 0 {
        Matrix::zeros(field, 0, cols)
    } else {
        Matrix::from_rows(field, a).expect("shape preserved")
    };
    Rref {
        matrix,
        rank: pivots.len(),
        pivots,
    }
}

/// Basis of the right kernel `{x : A x = 0}`, one vector per free column,
/// in increasing free-column order.
pub fn kernel(a: &Matrix) -> Vec<Vec<Scalar>> {
    let field = a.field();
    let r = rref(a);
    let cols = a.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix.get(row, free);
            }
            v
        })
        .collect()
}

/// Solution of `A x = b`: a particular solution and a kernel basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Solves `A x = b` exactly. `Ok(None)` means the system is infeasible.
pub fn solve_affine(a: &Matrix, b: &[Scalar]) -> Result<Option<AffineSolution>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let field = a.field();
    let cols = a.cols();
    let mut aug = Matrix::zeros(field, a.rows(), cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, cols, bi.clone());
    }
    let r = rref(&aug);
    if r.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut particular = vec![field.zero(); cols];
    for (row, &p) in r.pivots.iter().enumerate() {
        particular[p] = r.matrix.get(row, cols).clone();
    }
    Ok(Some(AffineSolution {
        particular,
        kernel: kernel(a),
    }))
}

/// Incrementally built semi-echelon basis: every stored row has a leading 1
/// at its pivot and zeros at the pivots of all earlier rows.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        w
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((p, w));
        true
    }

    #[cfg(test)]
    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}
