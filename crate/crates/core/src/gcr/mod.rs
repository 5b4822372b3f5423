//! Complete reducibility of subgroups `⟨h_1, ..., h_m⟩ ≤ GL_n`.
//!
//! For `GL_n` a subgroup is completely reducible in the group-theoretic
//! sense iff the natural module is semisimple, so every verdict here comes
//! from module computations: composition series, invariant complements, and
//! the flags they produce. Failures are reported as witness flags whose
//! stabiliser is a parabolic containing the group but none of its Levi
//! subgroups.

mod borel_tits;
mod complement;
pub mod finite;
mod module;

pub use borel_tits::borel_tits_flag;
pub use complement::has_invariant_complement;
pub use finite::{normal_closure, ru_conjugator};
pub use module::ENUMERATION_LIMIT;

use crate::error::{Error, Result};
use crate::instability::{optimal_cocharacter, InstabilityReport, WeightSet};
use crate::linalg::{commutant_dimension, FieldSpec, Matrix, Subspace};
use crate::torus::{cocharacter_from_flag, limit_tuple, Cocharacter};
use crate::tuple::MatrixTuple;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessReason {
    /// `flag[step]` has no invariant complement inside `flag[step + 1]`.
    NoComplement { step: usize },
    /// Iterated fixed-point flag of a unipotent group.
    BorelTits,
}

/// A generator-stable flag whose stabiliser contains the group but none of
/// its Levi subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessParabolic {
    /// Nonzero members, strictly increasing, ending at the full space.
    pub flag: Vec<Subspace>,
    pub cocharacter: Cocharacter,
    pub reason: WitnessReason,
}

impl WitnessParabolic {
    /// Re-checks the witness against the generators.
    pub fn verify(&self, gens: &[Matrix]) -> std::result::Result<(), String> {
        let last = self.flag.last().ok_or("empty flag")?;
        if !last.is_full() {
            return Err("flag does not end at the full space".into());
        }
        if self.flag.len() < 2 {
            return Err("flag has no proper member".into());
        }
        for (i, member) in self.flag.iter().enumerate() {
            if !member.is_stable_under(gens) {
                return Err(format!("flag member {i} is not stable"));
            }
        }
        if let Some(g) = gens.iter().find(|g| !self.cocharacter.in_parabolic(g)) {
            return Err(format!("generator {g} lies outside the parabolic"));
        }
        match &self.reason {
            WitnessReason::NoComplement { step } => {
                let (inner, outer) = match (self.flag.get(*step), self.flag.get(step + 1)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err("step index out of range".into()),
                };
                match step_complement(gens, inner, outer) {
                    Ok(None) => Ok(()),
                    Ok(Some(_)) => Err(format!("step {step} splits")),
                    Err(e) => Err(e.to_string()),
                }
            }
            WitnessReason::BorelTits => {
                let n = last.ambient();
                let id = Matrix::identity(last.field(), n);
                let mut prev = Subspace::zero(last.field(), n);
                for member in &self.flag {
                    for g in gens {
                        let x = g.sub(&id);
                        for v in member.basis_vectors() {
                            if !prev.contains(&x.apply(&v)) {
                                return Err("generator acts nontrivially on a quotient".into());
                            }
                        }
                    }
                    prev = member.clone();
                }
                Ok(())
            }
        }
    }
}

/// Composition series of the natural module with per-step splitting data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecomposition {
    /// `0 = V_0 ⊂ V_1 ⊂ ... ⊂ V_s = V`.
    pub series: Vec<Subspace>,
    /// Whether irreducibility of `V_{i+1}/V_i` was certified (exhaustive spin
    /// or Burnside), per factor.
    pub factor_certified: Vec<bool>,
    /// For `i = 1..s-1`: an invariant complement of `V_i` in `V_{i+1}`, if any.
    pub step_complements: Vec<Option<Subspace>>,
    pub semisimple: bool,
    /// Commutant dimension of each factor; above 1 means the factor is not
    /// absolutely irreducible.
    pub factor_commutant_dims: Vec<usize>,
}

impl ModuleDecomposition {
    pub fn factor_dims(&self) -> Vec<usize> {
        self.series.windows(2).map(|w| w[1].dim() - w[0].dim()).collect()
    }

    pub fn step_splits(&self) -> Vec<bool> {
        self.step_complements.iter().map(Option::is_some).collect()
    }

    /// Every factor was certified irreducible.
    pub fn certified(&self) -> bool {
        self.factor_certified.iter().all(|&c| c)
    }
}

/// Invariant complement of `inner` within `outer` (both stable), in ambient
/// coordinates.
fn step_complement(gens: &[Matrix], inner: &Subspace, outer: &Subspace) -> Result<Option<Subspace>> {
    if !outer.contains_subspace(inner) || !outer.is_stable_under(gens) {
        return Err(Error::NotInvariant);
    }
    let field = outer.field();
    let restricted = outer.restricted_action(gens);
    let coords: Vec<_> = inner
        .basis_vectors()
        .iter()
        .map(|v| outer.coordinates(v).expect("contained"))
        .collect();
    let w = Subspace::span(field, outer.dim(), &coords);
    let found = has_invariant_complement(&restricted, &w)?;
    Ok(found.map(|c| {
        let vectors: Vec<_> = c
            .basis_vectors()
            .iter()
            .map(|x| outer.from_coordinates(x))
            .collect();
        Subspace::span(field, outer.ambient(), &vectors)
    }))
}

fn factor_commutant(gens: &[Matrix], inner: &Subspace, outer: &Subspace) -> usize {
    let field = outer.field();
    let restricted = outer.restricted_action(gens);
    let coords: Vec<_> = inner
        .basis_vectors()
        .iter()
        .map(|v| outer.coordinates(v).expect("contained"))
        .collect();
    let w = Subspace::span(field, outer.dim(), &coords);
    let action = w.quotient_action(&restricted);
    commutant_dimension(field, outer.dim() - inner.dim(), &action)
}

/// Composition series, chosen deterministically: each step adds the minimal
/// invariant subspace of the current quotient found from the smallest spin of
/// a unit vector.
pub fn composition_series(h: &MatrixTuple) -> Result<ModuleDecomposition> {
    let series = module::composition_series_of(h.field(), h.dim(), h);
    let mut step_complements = Vec::new();
    for i in 1..series.members.len().saturating_sub(1) {
        step_complements.push(step_complement(
            h,
            &series.members[i],
            &series.members[i + 1],
        )?);
    }
    let factor_commutant_dims = series
        .members
        .windows(2)
        .map(|w| factor_commutant(h, &w[0], &w[1]))
        .collect();
    let semisimple = step_complements.iter().all(Option::is_some);
    Ok(ModuleDecomposition {
        series: series.members,
        factor_certified: series.certified,
        step_complements,
        semisimple,
        factor_commutant_dims,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrVerdict {
    pub completely_reducible: bool,
    pub decomposition: ModuleDecomposition,
    pub witness: Option<WitnessParabolic>,
}

/// Decides whether `⟨h⟩` is completely reducible in `GL_n`.
///
/// A `false` verdict always comes with a witness flag `V_i ⊂ V` where `V_i`
/// is the first member of the composition series lacking an invariant
/// complement in `V_{i+1}` (hence in `V`).
pub fn is_completely_reducible(h: &MatrixTuple) -> Result<CrVerdict> {
    let decomposition = composition_series(h)?;
    let failing = decomposition.step_complements.iter().position(Option::is_none);
    let witness = match failing {
        None => None,
        Some(k) => {
            let member = decomposition.series[k + 1].clone();
            let flag = vec![member, Subspace::full(h.field(), h.dim())];
            Some(WitnessParabolic {
                cocharacter: cocharacter_from_flag(&flag)?,
                flag,
                reason: WitnessReason::NoComplement { step: 0 },
            })
        }
    };
    Ok(CrVerdict {
        completely_reducible: witness.is_none(),
        decomposition,
        witness,
    })
}

/// Closedness of the conjugation orbit of `h`; equals complete reducibility.
pub fn orbit_closed(h: &MatrixTuple) -> Result<bool> {
    Ok(is_completely_reducible(h)?.completely_reducible)
}

/// Limit of `h` under a cocharacter adapted to its composition series: the
/// block-diagonal associated graded tuple.
pub fn semisimplify(h: &MatrixTuple) -> Result<(MatrixTuple, Cocharacter)> {
    let dec = composition_series(h)?;
    let lambda = cocharacter_from_flag(&dec.series)?;
    let limit = limit_tuple(&lambda, h)
        .ok_or_else(|| Error::Internal("tuple outside its flag parabolic".into()))?;
    Ok((limit, lambda))
}

/// `dim G·h = n² - dim of the commutant`.
pub fn orbit_dimension(h: &MatrixTuple) -> usize {
    let n = h.dim();
    n * n - commutant_dimension(h.field(), n, h)
}

/// Verdicts for `h_1`, `h_2`, and their block-diagonal embedding.
pub fn product_check(h1: &MatrixTuple, h2: &MatrixTuple) -> Result<(bool, bool, bool)> {
    let sum = h1.direct_sum(h2)?;
    Ok((orbit_closed(h1)?, orbit_closed(h2)?, orbit_closed(&sum)?))
}

/// Result of the per-tuple witness heuristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleWitness {
    pub witness: WitnessParabolic,
    /// Optimisation over the torus of cocharacters constant on the
    /// composition-series blocks; weights live in `ℤ^s`, `s` = number of factors.
    pub report: InstabilityReport,
    pub block_weights: WeightSet,
    /// The optimal block cocharacter expanded to `GL_n`, conjugated into the
    /// composition-series basis.
    pub cocharacter: Cocharacter,
    /// `lim λ(a)·h` for that cocharacter.
    pub limit: MatrixTuple,
    /// Always true: optimality is only over one torus and one basis.
    pub heuristic: bool,
}

/// Heuristic optimal witness for a tuple that is not completely reducible.
///
/// Works in the basis adapted to the composition series, where the tuple is
/// block upper triangular. The off-block entries give weights
/// `e_a - e_b ∈ ℤ^s` of the block torus; the optimal destabilising
/// cocharacter of that support kills them all in the limit while fixing the
/// diagonal blocks. The witness is the first non-split step of the flag of
/// that cocharacter.
pub fn tuple_witness_search(h: &MatrixTuple) -> Result<Option<TupleWitness>> {
    let verdict = is_completely_reducible(h)?;
    if verdict.completely_reducible {
        return Ok(None);
    }
    let field = h.field();
    let n = h.dim();
    let series = &verdict.decomposition.series;
    let blocks = series.len() - 1;
    let adapted = cocharacter_from_flag(series)?;
    let id = Matrix::identity(field, n);
    let g = adapted.conjugator().cloned().unwrap_or(id);
    let block_of: Vec<usize> = adapted
        .exponents()
        .iter()
        .map(|&e| blocks - 1 - e as usize)
        .collect();
    let mut weights = Vec::new();
    for x in h.iter() {
        let y = adapted.to_frame(x);
        for i in 0..n {
            for j in 0..n {
                if block_of[i] != block_of[j] && !y.get(i, j).is_zero() {
                    let mut w = vec![0i64; blocks];
                    w[block_of[i]] += 1;
                    w[block_of[j]] -= 1;
                    weights.push(w);
                }
            }
        }
    }
    weights.sort();
    weights.dedup();
    let block_weights = WeightSet::new(weights)?;
    let report = optimal_cocharacter(&block_weights)?;
    let lambda_blocks = report
        .lambda
        .clone()
        .ok_or_else(|| Error::Internal("off-block support is semistable".into()))?;
    let exponents: Vec<i64> = block_of.iter().map(|&b| lambda_blocks[b]).collect();
    let cocharacter = if g.is_identity() {
        Cocharacter::new(exponents.clone())
    } else {
        Cocharacter::conjugated(exponents.clone(), g.clone())?
    };
    let limit = limit_tuple(&cocharacter, h)
        .ok_or_else(|| Error::Internal("tuple outside the optimal parabolic".into()))?;

    // flag of the cocharacter: spans of basis columns with exponent ≥ c
    let mut values = exponents.clone();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    let members: Vec<Subspace> = values
        .iter()
        .map(|&c| {
            let cols: Vec<_> = (0..n).filter(|&i| exponents[i] >= c).map(|i| g.column(i)).collect();
            Subspace::span(field, n, &cols)
        })
        .collect();
    let mut failing = None;
    for k in 0..members.len().saturating_sub(1) {
        if step_complement(h, &members[k], &members[k + 1])?.is_none() {
            failing = Some(k);
            break;
        }
    }
    let k = failing.ok_or_else(|| Error::Internal("optimal flag splits at every step".into()))?;
    let flag = vec![members[k].clone(), Subspace::full(field, n)];
    let witness = WitnessParabolic {
        cocharacter: cocharacter_from_flag(&flag)?,
        flag,
        reason: WitnessReason::NoComplement { step: 0 },
    };
    Ok(Some(TupleWitness {
        witness,
        report,
        block_weights,
        cocharacter,
        limit,
        heuristic: true,
    }))
}

/// Conjugation action of `⟨[[1,1],[0,1]], [[1,0],[1,1]]⟩ ≤ SL_2` on the
/// trace-zero matrices, in the basis `(E_12, diag(1,-1), E_21)`.
pub fn adjoint_sl2_tuple(field: FieldSpec) -> MatrixTuple {
    let basis = [
        Matrix::unit(field, 2, 0, 1),
        Matrix::diagonal(field, &[field.one(), field.from_i64(-1)]),
        Matrix::unit(field, 2, 1, 0),
    ];
    let coords = |x: &Matrix| vec![x.get(0, 1).clone(), x.get(0, 0).clone(), x.get(1, 0).clone()];
    let gens = [
        Matrix::from_i64(field, &[&[1, 1], &[0, 1]]),
        Matrix::from_i64(field, &[&[1, 0], &[1, 1]]),
    ];
    let components = gens
        .iter()
        .map(|g| {
            let gi = g.inverse().expect("unimodular");
            let columns: Vec<_> = basis.iter().map(|b| coords(&g.conjugate(b, &gi))).collect();
            Matrix::from_columns(field, 3, &columns)
        })
        .collect();
    MatrixTuple::new(components).expect("invertible action")
}

/// The adjoint action of `SL_2(F_4)` on `sl_2(F_4)`, written over `F_2` by
/// restriction of scalars (`F_4 = F_2[ω]`, basis `(x, ωx)` for each of
/// `E_12, diag(1,1), E_21`). Generated by the elementary matrices with
/// entries `1` and `ω`.
pub fn adjoint_sl2_f4_over_f2() -> MatrixTuple {
    let f2 = FieldSpec::prime(2).expect("prime");
    // multiplication by 0, 1, ω, ω² = 1 + ω on (1, ω)
    let mult = |c: usize| -> Matrix {
        match c {
            0 => Matrix::zeros(f2, 2, 2),
            1 => Matrix::identity(f2, 2),
            2 => Matrix::from_i64(f2, &[&[0, 1], &[1, 1]]),
            _ => Matrix::from_i64(f2, &[&[1, 1], &[1, 0]]),
        }
    };
    let block = |entries: [[usize; 2]; 2]| -> Matrix {
        let mut m = Matrix::zeros(f2, 4, 4);
        for (bi, row) in entries.iter().enumerate() {
            for (bj, &c) in row.iter().enumerate() {
                let b = mult(c);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(2 * bi + i, 2 * bj + j, b.get(i, j).clone());
                    }
                }
            }
        }
        m
    };
    let basis = [block([[0, 1], [0, 0]]), block([[1, 0], [0, 1]]), block([[0, 0], [1, 0]])];
    let positions = [(0, 1), (0, 0), (1, 0)];
    let gens = [
        block([[1, 1], [0, 1]]),
        block([[1, 2], [0, 1]]),
        block([[1, 0], [1, 1]]),
        block([[1, 0], [2, 1]]),
    ];
    let components = gens
        .iter()
        .map(|g| {
            let gi = g.inverse().expect("unimodular");
            let mut action = Matrix::zeros(f2, 6, 6);
            for (bj, b) in basis.iter().enumerate() {
                let image = g.conjugate(b, &gi);
                for (bi, &(r, c)) in positions.iter().enumerate() {
                    for i in 0..2 {
                        for j in 0..2 {
                            action.set(2 * bi + i, 2 * bj + j, image.get(2 * r + i, 2 * c + j).clone());
                        }
                    }
                }
            }
            action
        })
        .collect();
    MatrixTuple::new(components).expect("invertible action")
}
