use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::echelon::{rref, EchelonBasis};
use crate::linalg::field::{FieldSpec, Scalar};
use crate::linalg::matrix::Matrix;

/// A subspace of `k^n`, stored as the RREF of a spanning set.
///
/// Two subspaces are equal exactly when their RREF bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, vectors.to_vec()).expect("vectors of equal length");
        assert_eq!(m.cols(), ambient, "vector length must equal ambient dimension");
        let r = rref(&m);
        let rows: Vec<Vec<Scalar>> = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        let basis = if rows.is_empty() {
            Matrix::zeros(field, 0, ambient)
        } else {
            Matrix::from_rows(field, rows).expect("rectangular")
        };
        Subspace {
            ambient,
            basis,
            pivots: r.pivots,
        }
    }

    /// Span of the coordinate vectors `e_i` for the given indices.
    pub fn coordinate(field: FieldSpec, ambient: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Self::span(field, ambient, &vectors)
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// RREF basis, one basis vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` with respect to the RREF basis, provided `v` lies in
    /// the subspace. For an RREF basis these are the entries of `v` at the pivots.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let field = self.field();
        let mut recon = vec![field.zero(); self.ambient];
        for (c, row) in coords.iter().zip(0..self.dim()) {
            for (x, b) in recon.iter_mut().zip(self.basis.row(row)) {
                *x = &*x + &(c * b);
            }
        }
        (recon == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.field(), self.ambient, &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let field = self.field();
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(field, self.ambient);
        }
        // x = Σ a_i u_i = Σ b_j w_j  ⇔  [Uᵀ | -Wᵀ] (a, b) = 0
        let (d1, d2) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(field, self.ambient, d1 + d2);
        for k in 0..self.ambient {
            for i in 0..d1 {
                m.set(k, i, self.basis.get(i, k).clone());
            }
            for j in 0..d2 {
                m.set(k, d1 + j, -other.basis.get(j, k));
            }
        }
        let vectors: Vec<Vec<Scalar>> = crate::linalg::kernel(&m)
            .into_iter()
            .map(|coef| {
                let mut x = vec![field.zero(); self.ambient];
                for (i, a) in coef.iter().take(d1).enumerate() {
                    for (xk, b) in x.iter_mut().zip(self.basis.row(i)) {
                        *xk = &*xk + &(a * b);
                    }
                }
                x
            })
            .collect();
        Subspace::span(field, self.ambient, &vectors)
    }

    /// Image of the subspace under a square matrix acting on column vectors.
    pub fn image(&self, g: &Matrix) -> Subspace {
        let vs: Vec<Vec<Scalar>> = (0..self.dim()).map(|i| g.apply(self.basis.row(i))).collect();
        Subspace::span(self.field(), self.ambient, &vs)
    }

    /// `h · W ⊆ W` for every `h`.
    pub fn is_stable_under(&self, gens: &[Matrix]) -> bool {
        gens.iter()
            .all(|h| (0..self.dim()).all(|i| self.contains(&h.apply(self.basis.row(i)))))
    }

    /// Annihilator `{a : a · w = 0 for all w ∈ W}` as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        let field = self.field();
        if self.is_zero() {
            return Subspace::full(field, self.ambient);
        }
        let vs = crate::linalg::kernel(&self.basis);
        Subspace::span(field, self.ambient, &vs)
    }

    /// Linear map `k^n → k^{n-d}` sending `v` to its class in `k^n / W`,
    /// in coordinates indexed by the non-pivot columns.
    pub fn quotient_map(&self) -> Matrix {
        let field = self.field();
        let free: Vec<usize> = (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect();
        let mut q = Matrix::zeros(field, free.len(), self.ambient);
        for j in 0..self.ambient {
            let mut v = vec![field.zero(); self.ambient];
            v[j] = field.one();
            let r = self.reduce(&v);
            for (row, &f) in free.iter().enumerate() {
                q.set(row, j, r[f].clone());
            }
        }
        q
    }

    /// Lift of quotient coordinates: the vector with those entries at the
    /// non-pivot positions and zero at the pivots.
    pub fn quotient_lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let mut v = vec![field.zero(); self.ambient];
        let free = (0..self.ambient).filter(|c| !self.pivots.contains(c));
        for (c, f) in coords.iter().zip(free) {
            v[f] = c.clone();
        }
        v
    }

    /// `v` minus its component along the pivots, i.e. a canonical coset representative.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, b) in w.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x = &*x - &(&f * b);
                }
            }
        }
        w
    }

    /// Matrices of the induced action of `gens` on `k^n / W` (W must be stable).
    pub fn quotient_action(&self, gens: &[Matrix]) -> Vec<Matrix> {
        let q = self.quotient_map();
        let d = q.rows();
        gens.iter()
            .map(|h| {
                let cols: Vec<Vec<Scalar>> = (0..d)
                    .map(|j| {
                        let mut e = vec![self.field().zero(); d];
                        e[j] = self.field().one();
                        q.apply(&h.apply(&self.quotient_lift(&e)))
                    })
                    .collect();
                Matrix::from_columns(self.field(), d, &cols)
            })
            .collect()
    }

    /// Matrices of the restricted action of `gens` on `W` in its RREF basis
    /// (W must be stable).
    pub fn restricted_action(&self, gens: &[Matrix]) -> Vec<Matrix> {
        let d = self.dim();
        gens.iter()
            .map(|h| {
                let cols: Vec<Vec<Scalar>> = (0..d)
                    .map(|j| {
                        self.coordinates(&h.apply(self.basis.row(j)))
                            .expect("subspace is stable")
                    })
                    .collect();
                Matrix::from_columns(self.field(), d, &cols)
            })
            .collect()
    }

    /// Embeds a vector given in this subspace's basis coordinates into `k^n`.
    pub fn from_coordinates(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let mut v = vec![field.zero(); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                *x = &*x + &(c * b);
            }
        }
        v
    }
}

/// Smallest subspace containing every seed and stable under every generator.
///
/// Seeds are processed in input order and images are explored breadth-first,
/// generators in input order.
pub fn spin(seeds: &[Vec<Scalar>], gens: &[Matrix]) -> Result<Subspace> {
    let first = seeds.first().ok_or(Error::EmptySeeds)?;
    let n = first.len();
    let field = first
        .first()
        .map(Scalar::field)
        .or_else(|| gens.first().map(Matrix::field))
        .unwrap_or(FieldSpec::Rationals);
    if seeds.iter().any(|s| s.len() != n) {
        return Err(Error::DimensionMismatch("seed lengths differ".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch(format!(
            "generator is {}x{}, seeds have length {n}",
            g.rows(),
            g.cols()
        )));
    }
    let mut basis = EchelonBasis::new(n);
    let mut queue = VecDeque::new();
    for s in seeds {
        if basis.insert(s) {
            queue.push_back(s.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        if basis.len() == n {
            break;
        }
        for g in gens {
            let w = g.apply(&v);
            if basis.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    Ok(Subspace::span(field, n, &basis.vectors()))
}
