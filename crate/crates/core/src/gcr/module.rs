//! Minimal invariant subspaces and composition series of the natural module.

use itertools::Itertools;

use crate::linalg::{
    commutant, enveloping_algebra, kernel, spin, FieldSpec, Matrix, Scalar, Subspace,
};

/// Largest `q^d` for which every vector of a candidate subspace is spun.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

/// A minimal invariant subspace together with how its irreducibility was
/// established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MinimalSubmodule {
    pub subspace: Subspace,
    pub certified: bool,
}

fn unit(field: FieldSpec, d: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); d];
    v[j] = field.one();
    v
}

/// Coefficient vectors over a finite field whose first nonzero entry is 1,
/// in lexicographic order. One representative per line.
fn projective_points(field: FieldSpec, d: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let q = field.order().expect("finite field");
    (0..d).flat_map(move |lead| {
        let tail = (d - lead - 1) as u32;
        (0..q.pow(tail)).map(move |mut code| {
            let mut v = vec![field.zero(); d];
            v[lead] = field.one();
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = field.from_i64((code % q) as i64);
                code /= q;
            }
            v
        })
    })
}

fn enumerable(field: FieldSpec, d: usize) -> bool {
    match field.order() {
        None => false,
        Some(q) => (q as f64).powi(d as i32) <= ENUMERATION_LIMIT as f64,
    }
}

/// Proper nonzero invariant subspace of `k^d` under `gens`, if one of the
/// deterministic probes finds it. Also reports whether absence is certain.
fn probe_proper_submodule(field: FieldSpec, d: usize, gens: &[Matrix]) -> (Option<Subspace>, bool) {
    if d <= 1 {
        return (None, true);
    }
    if enumerable(field, d) {
        for v in projective_points(field, d) {
            let s = spin(&[v], gens).expect("nonempty seeds");
            if s.dim() < d {
                return (Some(s), true);
            }
        }
        return (None, true);
    }
    // Unit vectors, then pairwise sums.
    for j in 0..d {
        let s = spin(&[unit(field, d, j)], gens).expect("seed");
        if s.dim() < d {
            return (Some(s), false);
        }
    }
    // Dual module: an invariant subspace X of the transposed action gives the
    // invariant subspace ann(X).
    let transposed: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    for j in 0..d {
        let s = spin(&[unit(field, d, j)], &transposed).expect("seed");
        if s.dim() < d {
            return (Some(s.annihilator()), false);
        }
    }
    let algebra = enveloping_algebra(field, d, gens);
    if algebra.len() == d * d {
        // Burnside: the action is absolutely irreducible.
        return (None, true);
    }
    if field.characteristic() == 0 {
        if let Some(s) = radical_submodule(field, d, &algebra) {
            return (Some(s), false);
        }
    }
    let eigen_candidates: Vec<Scalar> = match field.order() {
        Some(q) if q <= 1024 => field.elements().expect("finite"),
        _ => Vec::new(),
    };
    for e in commutant(field, d, gens) {
        let mut shifts: Vec<Scalar> = vec![field.zero()];
        shifts.extend((0..d).map(|i| e.get(i, i).clone()));
        shifts.extend(eigen_candidates.iter().cloned());
        for c in shifts.into_iter().unique() {
            let shifted = e.sub(&Matrix::identity(field, d).scale(&c));
            if shifted.is_zero() {
                continue;
            }
            let ker = kernel(&shifted);
            if !ker.is_empty() {
                return (Some(Subspace::span(field, d, &ker)), false);
            }
        }
    }
    (None, false)
}

/// `rad(A)·k^d` via the trace form (characteristic zero only).
fn radical_submodule(field: FieldSpec, d: usize, algebra: &[Matrix]) -> Option<Subspace> {
    let k = algebra.len();
    let trace = |m: &Matrix| (0..d).fold(field.zero(), |acc, i| &acc + m.get(i, i));
    let mut gram = Matrix::zeros(field, k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, trace(&algebra[i].mul(&algebra[j])));
        }
    }
    let mut vectors = Vec::new();
    for coef in kernel(&gram) {
        let mut r = Matrix::zeros(field, d, d);
        for (c, a) in coef.iter().zip(algebra) {
            r = r.add(&a.scale(c));
        }
        for j in 0..d {
            vectors.push(r.column(j));
        }
    }
    let s = Subspace::span(field, d, &vectors);
    (!s.is_zero() && s.dim() < d).then_some(s)
}

/// A minimal nonzero invariant subspace of `k^d` (`d ≥ 1`).
///
/// Starts from the smallest spin of a unit vector (first on ties) and keeps
/// shrinking with [`probe_proper_submodule`] restricted to the candidate.
pub(crate) fn minimal_submodule(field: FieldSpec, d: usize, gens: &[Matrix]) -> MinimalSubmodule {
    let mut current = (0..d)
        .map(|j| spin(&[unit(field, d, j)], gens).expect("seed"))
        .min_by_key(Subspace::dim)
        .expect("d >= 1");
    loop {
        let restricted = current.restricted_action(gens);
        let (found, certain) = probe_proper_submodule(field, current.dim(), &restricted);
        match found {
            Some(inner) => {
                let vectors: Vec<Vec<Scalar>> = inner
                    .basis_vectors()
                    .iter()
                    .map(|c| current.from_coordinates(c))
                    .collect();
                current = Subspace::span(field, d, &vectors);
            }
            None => {
                return MinimalSubmodule {
                    subspace: current,
                    certified: certain,
                }
            }
        }
    }
}

/// A composition series `0 = V_0 ⊂ ... ⊂ V_s = V` and per-factor data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Series {
    pub members: Vec<Subspace>,
    pub certified: Vec<bool>,
}

pub(crate) fn composition_series_of(field: FieldSpec, n: usize, gens: &[Matrix]) -> Series {
    let mut members = vec![Subspace::zero(field, n)];
    let mut certified = Vec::new();
    while !members.last().unwrap().is_full() {
        let current = members.last().unwrap().clone();
        let action = current.quotient_action(gens);
        let d = n - current.dim();
        let minimal = minimal_submodule(field, d, &action);
        let mut vectors = current.basis_vectors();
        vectors.extend(
            minimal
                .subspace
                .basis_vectors()
                .iter()
                .map(|c| current.quotient_lift(c)),
        );
        members.push(Subspace::span(field, n, &vectors));
        certified.push(minimal.certified);
    }
    Series { members, certified }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_points_count() {
        let f = FieldSpec::prime(3).unwrap();
        // (3^3 - 1)/2 = 13 lines in F_3^3
        assert_eq!(projective_points(f, 3).count(), 13);
        let first: Vec<Vec<Scalar>> = projective_points(f, 2).collect();
        assert_eq!(first.len(), 4);
        assert_eq!(first[0], vec![f.one(), f.zero()]);
        assert_eq!(first[3], vec![f.zero(), f.one()]);
    }

    #[test]
    fn irreducible_rotation_over_q() {
        let q = FieldSpec::Rationals;
        let r = Matrix::from_i64(q, &[&[0, -1], &[1, 0]]);
        let m = minimal_submodule(q, 2, &[r]);
        assert!(m.subspace.is_full());
        // commutant ℚ(i) is 2-dimensional: not absolutely irreducible, no Burnside certificate
        assert!(!m.certified);
    }

    #[test]
    fn twisted_sum_of_rotations_is_split_over_q() {
        let q = FieldSpec::Rationals;
        let r = Matrix::from_i64(q, &[&[0, -1], &[1, 0]]);
        let block = r.direct_sum(&r);
        let g = Matrix::from_i64(q, &[&[1, 1, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 1], &[0, 0, 1, 1]]);
        let g_inv = g.inverse().unwrap();
        let h = g.conjugate(&block, &g_inv);
        let m = minimal_submodule(q, 4, std::slice::from_ref(&h));
        assert_eq!(m.subspace.dim(), 2);
        assert!(m.subspace.is_stable_under(&[h]));
    }

    #[test]
    fn borel_over_q_is_certified() {
        let q = FieldSpec::Rationals;
        let a = Matrix::from_i64(q, &[&[1, 1], &[0, 1]]);
        let d = Matrix::from_i64(q, &[&[1, 0], &[0, 2]]);
        let s = composition_series_of(q, 2, &[a, d]);
        assert_eq!(s.members.len(), 3);
        assert_eq!(s.members[1], Subspace::coordinate(q, 2, &[0]));
        assert!(s.certified.iter().all(|&c| c));
    }
}
