use crate::error::{Error, Result};
use crate::gcr::{WitnessParabolic, WitnessReason};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::torus::cocharacter_from_flag;
use crate::tuple::MatrixTuple;

fn is_unipotent(h: &Matrix) -> bool {
    let n = h.rows();
    let nil = h.sub(&Matrix::identity(h.field(), n));
    nil.pow(n as u32).is_zero()
}

/// Iterated fixed-point flag of a unipotent group.
///
/// `V_1` is the common fixed space of the generators and `V_{i+1}` is the
/// preimage of the common fixed space of the induced action on `V / V_i`.
/// Every generator acts trivially on each successive quotient.
pub fn borel_tits_flag(u: &MatrixTuple) -> Result<WitnessParabolic> {
    for (i, h) in u.iter().enumerate() {
        if !is_unipotent(h) {
            return Err(Error::NotUnipotent(i));
        }
    }
    if u.iter().all(Matrix::is_identity) {
        return Err(Error::TrivialSubgroup);
    }
    let field = u.field();
    let n = u.dim();
    let id = Matrix::identity(field, n);
    let nilpotents: Vec<Matrix> = u.iter().map(|h| h.sub(&id)).collect();
    let mut flag: Vec<Subspace> = Vec::new();
    let mut current = Subspace::zero(field, n);
    while !current.is_full() {
        // v with (h - 1) v ∈ current for all h  ⇔  Q (h - 1) v = 0
        let q = current.quotient_map();
        let mut rows = Vec::new();
        for x in &nilpotents {
            rows.extend(q.mul(x).row_vectors());
        }
        let system = Matrix::from_rows(field, rows).expect("rectangular");
        let next = Subspace::span(field, n, &kernel(&system));
        if next.dim() <= current.dim() {
            return Err(Error::NotUnipotentGroup);
        }
        flag.push(next.clone());
        current = next;
    }
    let cocharacter = cocharacter_from_flag(&flag)?;
    Ok(WitnessParabolic {
        flag,
        cocharacter,
        reason: WitnessReason::BorelTits,
    })
}
