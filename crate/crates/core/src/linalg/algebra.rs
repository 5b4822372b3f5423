//! Matrix algebras attached to a generator tuple: the commutant and the
//! enveloping algebra.

use crate::linalg::echelon::{kernel, EchelonBasis};
use crate::linalg::field::{FieldSpec, Scalar};
use crate::linalg::matrix::Matrix;

fn matrix_from_vec(field: FieldSpec, n: usize, v: &[Scalar]) -> Matrix {
    let rows: Vec<Vec<Scalar>> = v.chunks(n).map(<[Scalar]>::to_vec).collect();
    Matrix::from_rows(field, rows).expect("square")
}

/// Basis of `{A ∈ M_n : A h = h A for all h in gens}`.
///
/// Variables are the entries of `A` in row-major order; the basis comes out
/// in increasing free-variable order of the RREF of the commutation system.
pub fn commutant(field: FieldSpec, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let nn = n * n;
    let mut system = Matrix::zeros(field, gens.len() * nn, nn);
    for (g, h) in gens.iter().enumerate() {
        assert_eq!((h.rows(), h.cols()), (n, n));
        for i in 0..n {
            for j in 0..n {
                let row = g * nn + i * n + j;
                // (A h)_ij = Σ_k A_ik h_kj ; (h A)_ij = Σ_k h_ik A_kj
                for k in 0..n {
                    let c = i * n + k;
                    let v = system.get(row, c) + h.get(k, j);
                    system.set(row, c, v);
                    let c = k * n + j;
                    let v = system.get(row, c) - h.get(i, k);
                    system.set(row, c, v);
                }
            }
        }
    }
    kernel(&system)
        .into_iter()
        .map(|v| matrix_from_vec(field, n, &v))
        .collect()
}

pub fn commutant_dimension(field: FieldSpec, n: usize, gens: &[Matrix]) -> usize {
    commutant(field, n, gens).len()
}

/// Basis of the associative algebra spanned by all words in `gens`
/// (including the empty word).
pub fn enveloping_algebra(field: FieldSpec, n: usize, gens: &[Matrix]) -> Vec<Matrix> {
    let mut basis = EchelonBasis::new(n * n);
    let mut elements = Vec::new();
    let id = Matrix::identity(field, n);
    basis.insert(id.entries());
    elements.push(id);
    let mut next = 0;
    while next < elements.len() && basis.len() < n * n {
        let a = elements[next].clone();
        next += 1;
        for g in gens {
            let b = a.mul(g);
            if basis.insert(b.entries()) {
                elements.push(b);
            }
        }
    }
    elements
}
