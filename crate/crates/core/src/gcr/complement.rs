use crate::error::{Error, Result};
use crate::linalg::{kernel, solve_affine, Matrix, Scalar, Subspace};

/// Searches for a subspace `W'` with `V = W ⊕ W'` and `h W' ⊆ W'` for every
/// generator.
///
/// Such a complement exists iff there is a projection `π` onto `W` commuting
/// with every generator; this is a linear system in the `n²` entries of `π`
/// (`π h = h π`, `π w = w` on a basis of `W`, `a π = 0` on a basis of the
/// annihilator of `W`). The complement returned is `ker π` for the particular
/// solution read off the RREF.
pub fn has_invariant_complement(gens: &[Matrix], w: &Subspace) -> Result<Option<Subspace>> {
    let n = w.ambient();
    let field = w.field();
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch(
            "generators and subspace have different dimensions".into(),
        ));
    }
    if !w.is_stable_under(gens) {
        return Err(Error::NotInvariant);
    }
    let nn = n * n;
    let var = |i: usize, j: usize| i * n + j;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for h in gens {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![field.zero(); nn];
                for l in 0..n {
                    row[var(i, l)] = &row[var(i, l)] + h.get(l, j);
                    row[var(l, j)] = &row[var(l, j)] - h.get(i, l);
                }
                rows.push(row);
                rhs.push(field.zero());
            }
        }
    }
    for b in w.basis_vectors() {
        for i in 0..n {
            let mut row = vec![field.zero(); nn];
            for (j, bj) in b.iter().enumerate() {
                row[var(i, j)] = bj.clone();
            }
            rows.push(row);
            rhs.push(b[i].clone());
        }
    }
    for a in w.annihilator().basis_vectors() {
        for j in 0..n {
            let mut row = vec![field.zero(); nn];
            for (i, ai) in a.iter().enumerate() {
                row[var(i, j)] = ai.clone();
            }
            rows.push(row);
            rhs.push(field.zero());
        }
    }
    let system = Matrix::from_rows(field, rows).expect("rectangular system");
    let Some(sol) = solve_affine(&system, &rhs)? else {
        return Ok(None);
    };
    let pi_rows: Vec<Vec<Scalar>> = sol.particular.chunks(n).map(<[Scalar]>::to_vec).collect();
    let pi = Matrix::from_rows(field, pi_rows).expect("square");
    let complement = Subspace::span(field, n, &kernel(&pi));
    if !complement.is_stable_under(gens)
        || !complement.intersection(w).is_zero()
        || complement.dim() + w.dim() != n
    {
        return Err(Error::Internal("projection kernel is not a complement".into()));
    }
    Ok(Some(complement))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    #[test]
    fn unipotent_line_has_no_complement() {
        let q = FieldSpec::Rationals;
        let h = Matrix::from_i64(q, &[&[1, 1], &[0, 1]]);
        let w = Subspace::coordinate(q, 2, &[0]);
        assert_eq!(has_invariant_complement(&[h], &w).unwrap(), None);
    }

    #[test]
    fn diagonal_splits() {
        let q = FieldSpec::Rationals;
        let h = Matrix::from_i64(q, &[&[1, 0], &[0, 2]]);
        let w = Subspace::coordinate(q, 2, &[0]);
        assert_eq!(
            has_invariant_complement(&[h], &w).unwrap(),
            Some(Subspace::coordinate(q, 2, &[1]))
        );
    }

    #[test]
    fn corner_transvection_plane() {
        let q = FieldSpec::Rationals;
        let h = Matrix::from_i64(q, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
        let w = Subspace::coordinate(q, 3, &[0, 1]);
        assert_eq!(has_invariant_complement(&[h], &w).unwrap(), None);
    }

    #[test]
    fn not_invariant_is_an_error() {
        let q = FieldSpec::Rationals;
        let h = Matrix::from_i64(q, &[&[1, 1], &[0, 1]]);
        let w = Subspace::coordinate(q, 2, &[1]);
        assert_eq!(has_invariant_complement(&[h], &w), Err(Error::NotInvariant));
    }

    #[test]
    fn trivial_subspaces() {
        let f = FieldSpec::prime(3).unwrap();
        let h = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
        assert!(has_invariant_complement(std::slice::from_ref(&h), &Subspace::zero(f, 2))
            .unwrap()
            .unwrap()
            .is_full());
        assert!(has_invariant_complement(&[h], &Subspace::full(f, 2))
            .unwrap()
            .unwrap()
            .is_zero());
    }
}
