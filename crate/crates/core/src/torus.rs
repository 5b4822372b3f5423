//! Cocharacters of the diagonal torus of `GL_n`, their parabolic data, and
//! limits of the conjugation action.
//!
//! A cocharacter `λ` with exponents `(r_1, ..., r_n)` acts on a matrix `x` by
//! scaling entry `(i, j)` with `a^(r_i - r_j)`. The limit as `a → 0` exists
//! precisely when every entry with `r_i < r_j` vanishes, and it keeps only
//! the entries with `r_i = r_j`. A conjugated cocharacter `g·λ` is carried
//! symbolically as the pair `(g, exponents)`; it acts on `x` through
//! `g⁻¹ x g`.

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace};
use crate::tuple::MatrixTuple;

/// Integer character of the diagonal torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<i64>);

/// A cocharacter `λ ∈ Y(D_n)`, optionally conjugated by an invertible `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocharacter {
    exponents: Vec<i64>,
    conjugator: Option<Conjugator>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Conjugator {
    g: Matrix,
    g_inv: Matrix,
}

impl Cocharacter {
    pub fn new(exponents: Vec<i64>) -> Self {
        Cocharacter {
            exponents,
            conjugator: None,
        }
    }

    pub fn conjugated(exponents: Vec<i64>, g: Matrix) -> Result<Self> {
        if !g.is_square() || g.rows() != exponents.len() {
            return Err(Error::DimensionMismatch(format!(
                "conjugator is {}x{}, cocharacter has length {}",
                g.rows(),
                g.cols(),
                exponents.len()
            )));
        }
        let g_inv = g.inverse().ok_or(Error::NotInvertible)?;
        Ok(Cocharacter {
            exponents,
            conjugator: Some(Conjugator { g, g_inv }),
        })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn conjugator(&self) -> Option<&Matrix> {
        self.conjugator.as_ref().map(|c| &c.g)
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `c·λ` for a positive integer `c`.
    pub fn scaled(&self, c: i64) -> Cocharacter {
        Cocharacter {
            exponents: self.exponents.iter().map(|e| e * c).collect(),
            conjugator: self.conjugator.clone(),
        }
    }

    /// Rewrites `x` into the diagonal-torus frame: `g⁻¹ x g`.
    pub fn to_frame(&self, x: &Matrix) -> Matrix {
        match &self.conjugator {
            None => x.clone(),
            Some(c) => c.g_inv.mul(x).mul(&c.g),
        }
    }

    /// Inverse of [`Cocharacter::to_frame`]: `g y g⁻¹`.
    pub fn from_frame(&self, y: &Matrix) -> Matrix {
        match &self.conjugator {
            None => y.clone(),
            Some(c) => c.g.mul(y).mul(&c.g_inv),
        }
    }

    /// Parabolic data for the exponents (ignores any conjugator).
    pub fn parabolic(&self) -> ParabolicData {
        ParabolicData::new(&self.exponents)
    }

    pub fn in_parabolic(&self, x: &Matrix) -> bool {
        self.parabolic().contains_parabolic(&self.to_frame(x))
    }

    pub fn in_levi(&self, x: &Matrix) -> bool {
        self.parabolic().contains_levi(&self.to_frame(x))
    }

    pub fn in_unipotent_radical(&self, x: &Matrix) -> bool {
        self.parabolic().contains_unipotent_radical(&self.to_frame(x))
    }

    /// `λ` fixes `x` under conjugation.
    pub fn fixes(&self, x: &Matrix) -> bool {
        self.in_levi(x)
    }
}

/// `⟨λ, χ⟩ = Σ λ_i χ_i`.
pub fn pairing(lambda: &Cocharacter, chi: &Character) -> Result<i64> {
    if lambda.conjugator.is_some() {
        return Err(Error::ConjugatedPairing);
    }
    if lambda.dim() != chi.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "cocharacter of length {} vs character of length {}",
            lambda.dim(),
            chi.0.len()
        )));
    }
    Ok(lambda.exponents.iter().zip(&chi.0).map(|(a, b)| a * b).sum())
}

/// Block structure of `P_λ`, `L_λ`, `R_u(P_λ)` for an unconjugated `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    exponents: Vec<i64>,
    /// Indices sorted by weakly decreasing exponent, ties by index.
    permutation: Vec<usize>,
    block_sizes: Vec<usize>,
    block_values: Vec<i64>,
}

impl ParabolicData {
    pub fn new(exponents: &[i64]) -> Self {
        let mut permutation: Vec<usize> = (0..exponents.len()).collect();
        permutation.sort_by(|&a, &b| exponents[b].cmp(&exponents[a]).then(a.cmp(&b)));
        let mut block_sizes = Vec::new();
        let mut block_values = Vec::new();
        for &i in &permutation {
            if block_values.last() == Some(&exponents[i]) {
                *block_sizes.last_mut().unwrap() += 1;
            } else {
                block_values.push(exponents[i]);
                block_sizes.push(1);
            }
        }
        ParabolicData {
            exponents: exponents.to_vec(),
            permutation,
            block_sizes,
            block_values,
        }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_values(&self) -> &[i64] {
        &self.block_values
    }

    /// `P_λ = GL_n` exactly when all exponents coincide.
    pub fn is_whole_group(&self) -> bool {
        self.block_sizes.len() <= 1
    }

    fn check(&self, x: &Matrix) -> bool {
        x.is_square() && x.rows() == self.exponents.len()
    }

    /// `x_ij = 0` whenever `λ_i < λ_j`.
    pub fn contains_parabolic(&self, x: &Matrix) -> bool {
        let e = &self.exponents;
        self.check(x)
            && (0..e.len()).all(|i| (0..e.len()).all(|j| e[i] >= e[j] || x.get(i, j).is_zero()))
    }

    /// `x_ij = 0` whenever `λ_i ≠ λ_j`.
    pub fn contains_levi(&self, x: &Matrix) -> bool {
        let e = &self.exponents;
        self.check(x)
            && (0..e.len()).all(|i| (0..e.len()).all(|j| e[i] == e[j] || x.get(i, j).is_zero()))
    }

    /// In `P_λ` with identity blocks on the `λ`-diagonal.
    pub fn contains_unipotent_radical(&self, x: &Matrix) -> bool {
        let e = &self.exponents;
        self.contains_parabolic(x)
            && (0..e.len()).all(|i| {
                (0..e.len()).all(|j| {
                    if e[i] != e[j] {
                        return true;
                    }
                    let v = x.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Positions `(i, j)` that are free in `R_u(P_λ)`, i.e. `λ_i > λ_j`,
    /// in row-major order.
    pub fn unipotent_positions(&self) -> Vec<(usize, usize)> {
        let e = &self.exponents;
        (0..e.len())
            .flat_map(|i| (0..e.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| e[i] > e[j])
            .collect()
    }

    /// `c_λ(x)`: keep the entries with `λ_i = λ_j`. Only meaningful for `x ∈ P_λ`.
    pub fn levi_part(&self, x: &Matrix) -> Matrix {
        let e = &self.exponents;
        let mut y = x.clone();
        let zero = x.field().zero();
        for i in 0..e.len() {
            for j in 0..e.len() {
                if e[i] != e[j] {
                    y.set(i, j, zero.clone());
                }
            }
        }
        y
    }
}

/// `lim_{a→0} λ(a) x λ(a)⁻¹`, or `None` when the limit does not exist.
pub fn limit_conj(lambda: &Cocharacter, x: &Matrix) -> Option<Matrix> {
    assert!(
        x.is_square() && x.rows() == lambda.dim(),
        "matrix size must match the cocharacter"
    );
    let y = lambda.to_frame(x);
    let par = lambda.parabolic();
    if !par.contains_parabolic(&y) {
        return None;
    }
    Some(lambda.from_frame(&par.levi_part(&y)))
}

/// Componentwise limit; present iff every component has a limit.
pub fn limit_tuple(lambda: &Cocharacter, h: &MatrixTuple) -> Option<MatrixTuple> {
    let comps = h
        .iter()
        .map(|x| limit_conj(lambda, x))
        .collect::<Option<Vec<_>>>()?;
    Some(MatrixTuple::from_trusted(h.field(), h.dim(), comps))
}

/// Cocharacter whose parabolic is the stabiliser of the given flag.
///
/// The conjugator's columns are an adapted basis: the RREF basis vectors of
/// each flag member are added in order, keeping those that enlarge the span.
/// Exponents are `t-1, ..., 0` on the `t` successive blocks. A leading zero
/// subspace is ignored.
pub fn cocharacter_from_flag(flag: &[Subspace]) -> Result<Cocharacter> {
    let members: Vec<&Subspace> = flag.iter().skip_while(|s| s.is_zero()).collect();
    let last = members
        .last()
        .ok_or_else(|| Error::InvalidFlag("empty flag".into()))?;
    let n = last.ambient();
    let field: FieldSpec = last.field();
    if !last.is_full() {
        return Err(Error::InvalidFlag("flag does not end at the full space".into()));
    }
    for w in members.windows(2) {
        if w[0].ambient() != n || !w[1].contains_subspace(w[0]) || w[0].dim() >= w[1].dim() {
            return Err(Error::InvalidFlag("flag is not strictly increasing".into()));
        }
    }
    let t = members.len() as i64;
    let mut basis = crate::linalg::EchelonBasis::new(n);
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut exponents = Vec::with_capacity(n);
    for (b, member) in members.iter().enumerate() {
        for v in member.basis_vectors() {
            if basis.insert(&v) {
                columns.push(v);
                exponents.push(t - 1 - b as i64);
            }
        }
    }
    let g = Matrix::from_columns(field, n, &columns);
    if g.is_identity() {
        return Ok(Cocharacter::new(exponents));
    }
    Cocharacter::conjugated(exponents, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn pairing_examples() {
        let p = |l: &[i64], c: &[i64]| {
            pairing(&Cocharacter::new(l.to_vec()), &Character(c.to_vec())).unwrap()
        };
        assert_eq!(p(&[1, -1], &[1, -1]), 2);
        assert_eq!(p(&[0, 0, 0], &[4, -2, 7]), 0);
        assert_eq!(p(&[2, 1, 0], &[1, 0, -1]), 2);
    }

    #[test]
    fn pairing_errors() {
        let l = Cocharacter::new(vec![1, 0]);
        assert!(matches!(
            pairing(&l, &Character(vec![1])),
            Err(Error::DimensionMismatch(_))
        ));
        let g = Matrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        let lc = Cocharacter::conjugated(vec![1, 0], g).unwrap();
        assert_eq!(
            pairing(&lc, &Character(vec![1, 0])),
            Err(Error::ConjugatedPairing)
        );
    }

    #[test]
    fn gl2_parabolic_is_borel() {
        let par = ParabolicData::new(&[1, -1]);
        let upper = Matrix::from_i64(q(), &[&[1, 5], &[0, 2]]);
        let lower = Matrix::from_i64(q(), &[&[1, 0], &[5, 2]]);
        let diag = Matrix::from_i64(q(), &[&[3, 0], &[0, 2]]);
        assert!(par.contains_parabolic(&upper));
        assert!(!par.contains_parabolic(&lower));
        assert!(!par.contains_levi(&upper));
        assert!(par.contains_levi(&diag));
    }

    #[test]
    fn trivial_cocharacter_gives_whole_group() {
        let par = ParabolicData::new(&[0, 0, 0]);
        assert!(par.is_whole_group());
        let x = Matrix::from_i64(q(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert!(par.contains_parabolic(&x));
        assert!(!par.contains_unipotent_radical(&x));
        assert!(par.contains_unipotent_radical(&Matrix::identity(q(), 3)));
        assert!(par.unipotent_positions().is_empty());
    }

    #[test]
    fn blocks_and_radical_membership() {
        let par = ParabolicData::new(&[3, 3, -1]);
        assert_eq!(par.block_sizes(), &[2, 1]);
        let u = Matrix::from_i64(q(), &[&[1, 0, 5], &[0, 1, 0], &[0, 0, 1]]);
        assert!(par.contains_unipotent_radical(&u));
        assert_eq!(par.unipotent_positions(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn sorting_permutation_breaks_ties_by_index() {
        let par = ParabolicData::new(&[0, 2, 0, 2]);
        assert_eq!(par.permutation(), &[1, 3, 0, 2]);
        assert_eq!(par.block_sizes(), &[2, 2]);
        assert_eq!(par.block_values(), &[2, 0]);
    }

    #[test]
    fn gl2_limits() {
        let l = Cocharacter::new(vec![1, -1]);
        let x1 = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let x2 = Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]);
        assert_eq!(limit_conj(&l, &x1), Some(Matrix::identity(q(), 2)));
        assert_eq!(limit_conj(&l, &x2), None);
        let d = Matrix::from_i64(q(), &[&[4, 0], &[0, 7]]);
        assert_eq!(limit_conj(&Cocharacter::new(vec![5, -3]), &d), Some(d));
    }

    #[test]
    fn conjugated_limit_uses_frame() {
        // g swaps coordinates, so g·λ prefers lower-triangular matrices.
        let g = Matrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        let l = Cocharacter::conjugated(vec![1, -1], g).unwrap();
        let lower = Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]);
        assert_eq!(limit_conj(&l, &lower), Some(Matrix::identity(q(), 2)));
        let upper = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(limit_conj(&l, &upper), None);
    }

    #[test]
    fn tuple_limits() {
        let l = Cocharacter::new(vec![1, -1]);
        let x1 = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let x2 = Matrix::from_i64(q(), &[&[1, 0], &[1, 1]]);
        let h = MatrixTuple::new(vec![x1.clone()]).unwrap();
        assert_eq!(
            limit_tuple(&l, &h).unwrap().components(),
            &[Matrix::identity(q(), 2)]
        );
        let h2 = MatrixTuple::new(vec![x1, x2]).unwrap();
        assert!(limit_tuple(&l, &h2).is_none());
        let zero = Cocharacter::new(vec![0, 0]);
        assert_eq!(limit_tuple(&zero, &h2).unwrap(), h2);
    }

    #[test]
    fn flag_cocharacters() {
        let l = cocharacter_from_flag(&[
            Subspace::coordinate(q(), 2, &[0]),
            Subspace::full(q(), 2),
        ])
        .unwrap();
        assert_eq!(l.exponents(), &[1, 0]);
        assert!(l.conjugator().is_none());

        let l3 = cocharacter_from_flag(&[
            Subspace::coordinate(q(), 3, &[0, 1]),
            Subspace::full(q(), 3),
        ])
        .unwrap();
        assert_eq!(l3.exponents(), &[1, 1, 0]);
        assert_eq!(l3.parabolic().block_sizes(), &[2, 1]);
    }

    #[test]
    fn flag_over_f3_matches_stabiliser() {
        let f = FieldSpec::prime(3).unwrap();
        let line = Subspace::span(f, 2, &[vec![f.one(), f.one()]]);
        let l = cocharacter_from_flag(&[line.clone(), Subspace::full(f, 2)]).unwrap();
        assert_eq!(l.exponents(), &[1, 0]);
        let g = l.conjugator().unwrap();
        assert_eq!(g.column(0), vec![f.one(), f.one()]);
        // every element of GL_2(F_3): stabilises the line iff in g·P_λ
        let els = f.elements().unwrap();
        let mut count = 0;
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        let x = Matrix::from_rows(
                            f,
                            vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
                        )
                        .unwrap();
                        if !x.is_invertible() {
                            continue;
                        }
                        count += 1;
                        assert_eq!(line.image(&x) == line, l.in_parabolic(&x));
                    }
                }
            }
        }
        assert_eq!(count, 48);
    }

    #[test]
    fn invalid_flags() {
        let a = Subspace::coordinate(q(), 3, &[0]);
        let b = Subspace::coordinate(q(), 3, &[1]);
        assert!(matches!(
            cocharacter_from_flag(&[a.clone(), b, Subspace::full(q(), 3)]),
            Err(Error::InvalidFlag(_))
        ));
        assert!(matches!(
            cocharacter_from_flag(std::slice::from_ref(&a)),
            Err(Error::InvalidFlag(_))
        ));
        assert!(matches!(
            cocharacter_from_flag(&[a.clone(), a, Subspace::full(q(), 3)]),
            Err(Error::InvalidFlag(_))
        ));
        assert!(matches!(cocharacter_from_flag(&[]), Err(Error::InvalidFlag(_))));
    }
}
