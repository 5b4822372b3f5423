//! Bundled self-test cases: worked examples and small oracle cross-checks.

use itertools::Itertools;

use crate::error::Result;
use crate::gcr::finite::{are_conjugate, general_linear_group};
use crate::gcr::{
    adjoint_sl2_f4_over_f2, adjoint_sl2_tuple, borel_tits_flag, composition_series,
    is_completely_reducible, normal_closure, orbit_closed, orbit_dimension, product_check,
    ru_conjugator, semisimplify,
};
use crate::instability::{brute_force_optimum, f_compare, optimal_cocharacter, WeightSet};
use crate::linalg::{FieldSpec, Matrix};
use crate::torus::{limit_conj, limit_tuple, Cocharacter};
use crate::tuple::MatrixTuple;

#[derive(Clone)]
pub struct Case {
    pub name: &'static str,
    pub expected: String,
    pub compute: fn(u128) -> Result<String>,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: &'static str,
    pub expected: String,
    pub actual: Result<String>,
    pub passed: bool,
}

fn f2() -> FieldSpec {
    FieldSpec::PrimeField(2)
}

fn single(m: Matrix) -> MatrixTuple {
    MatrixTuple::new(vec![m]).expect("invertible")
}

fn dims(h: &MatrixTuple) -> Result<String> {
    let dec = composition_series(h)?;
    Ok(format!("{:?}", dec.series.iter().map(|s| s.dim()).collect::<Vec<_>>()))
}

fn verdict(h: &MatrixTuple) -> Result<String> {
    let v = is_completely_reducible(h)?;
    if let Some(w) = &v.witness {
        if let Err(e) = w.verify(h) {
            return Ok(format!("witness rejected: {e}"));
        }
        return Ok(format!("not completely reducible, witness dim {}", w.flag[0].dim()));
    }
    Ok("completely reducible".into())
}

fn limit_upper(_: u128) -> Result<String> {
    let l = Cocharacter::new(vec![1, -1]);
    let x = Matrix::from_i64(f2(), &[&[1, 1], &[0, 1]]);
    Ok(limit_conj(&l, &x).map_or("none".into(), |m| m.to_string()))
}

fn limit_lower(_: u128) -> Result<String> {
    let l = Cocharacter::new(vec![1, -1]);
    let x = Matrix::from_i64(f2(), &[&[1, 0], &[1, 1]]);
    Ok(limit_conj(&l, &x).map_or("none".into(), |m| m.to_string()))
}

fn limit_generic(_: u128) -> Result<String> {
    let q = FieldSpec::Rationals;
    let l = Cocharacter::new(vec![1, -1]);
    let x = Matrix::from_i64(q, &[&[2, 3], &[0, 5]]);
    Ok(limit_conj(&l, &x).map_or("none".into(), |m| m.to_string()))
}

fn adjoint_f3(_: u128) -> Result<String> {
    dims(&adjoint_sl2_tuple(FieldSpec::PrimeField(3)))
}

fn adjoint_f2(_: u128) -> Result<String> {
    verdict(&adjoint_sl2_tuple(f2()))
}

fn adjoint_char2(_: u128) -> Result<String> {
    verdict(&adjoint_sl2_f4_over_f2())
}

fn adjoint_char2_product(_: u128) -> Result<String> {
    let h = adjoint_sl2_f4_over_f2();
    Ok(format!("{:?}", product_check(&h, &h)?))
}

fn unipotent_closed(_: u128) -> Result<String> {
    let j = single(Matrix::from_i64(FieldSpec::Rationals, &[&[1, 1], &[0, 1]]));
    Ok(orbit_closed(&j)?.to_string())
}

fn borel_tits_jordan(_: u128) -> Result<String> {
    let j = single(Matrix::from_i64(
        FieldSpec::Rationals,
        &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]],
    ));
    let w = borel_tits_flag(&j)?;
    Ok(format!("{:?}", w.flag.iter().map(|s| s.dim()).collect::<Vec<_>>()))
}

fn optimize_pair(_: u128) -> Result<String> {
    let w = WeightSet::new(vec![vec![2, 0], vec![0, 2]])?;
    let r = optimal_cocharacter(&w)?;
    Ok(format!("{:?} {}", r.lambda, r.optimal_value_sq))
}

fn optimize_semistable(_: u128) -> Result<String> {
    let w = WeightSet::new(vec![vec![1], vec![-1]])?;
    Ok(optimal_cocharacter(&w)?.semistable.to_string())
}

fn ru_f5(budget: u128) -> Result<String> {
    let f5 = FieldSpec::PrimeField(5);
    let u0 = Matrix::from_i64(f5, &[&[1, 1], &[0, 1]]);
    let d = Matrix::from_i64(f5, &[&[1, 0], &[0, 2]]);
    let u0i = u0.inverse().expect("unipotent");
    let h = single(u0.conjugate(&d, &u0i));
    let u = ru_conjugator(&h, &Cocharacter::new(vec![1, 0]), budget)?;
    Ok(u.map_or("none".into(), |u| u.to_string()))
}

fn ru_jordan_f2(budget: u128) -> Result<String> {
    let j = single(Matrix::from_i64(f2(), &[&[1, 1], &[0, 1]]));
    let u = ru_conjugator(&j, &Cocharacter::new(vec![1, 0]), budget)?;
    Ok(u.map_or("none".into(), |u| u.to_string()))
}

fn s3_normal_closure(budget: u128) -> Result<String> {
    let cyc = Matrix::from_i64(f2(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    let tr = Matrix::from_i64(f2(), &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let h = MatrixTuple::new(vec![tr, cyc])?;
    let n = normal_closure(&h, &[1], budget)?;
    Ok(format!("{} elements, {}", n.len(), verdict(&n)?))
}

fn jordan_orbit_dim(_: u128) -> Result<String> {
    let j = single(Matrix::from_i64(FieldSpec::Rationals, &[&[1, 1], &[0, 1]]));
    Ok(orbit_dimension(&j).to_string())
}

fn optimizer_oracle(budget: u128) -> Result<String> {
    let sets: [&[&[i64]]; 4] = [
        &[&[1, 0], &[0, 2]],
        &[&[2, -1], &[-1, 3], &[1, 1]],
        &[&[1, 0, 0], &[0, 1, -1], &[1, 1, 1]],
        &[&[-1, 2], &[3, 1]],
    ];
    for set in sets {
        let w = WeightSet::new(set.iter().map(|r| r.to_vec()).collect())?;
        let r = optimal_cocharacter(&w)?;
        let b = brute_force_optimum(&w, 4, budget)?;
        let lambda = r.lambda.clone().unwrap_or_default();
        if r.semistable != (b.mu <= 0) {
            return Ok(format!("semistability disagrees on {set:?}"));
        }
        if !r.semistable && f_compare(&w, &lambda, &b.lambda)? == std::cmp::Ordering::Less {
            return Ok(format!("box beats optimizer on {set:?}"));
        }
    }
    Ok("agree".into())
}

/// All single-generator tuples in `GL_2(F_2)` against all `λ ∈ [-1,1]^2`:
/// the limit is conjugate to the tuple iff an `R_u(P_λ)` conjugator exists.
fn limit_orbit_oracle(budget: u128) -> Result<String> {
    let group = general_linear_group(f2(), 2, budget)?;
    for x in group.elements() {
        let h = single(x.clone());
        for e in (0..2).map(|_| -1i64..=1).multi_cartesian_product() {
            let l = Cocharacter::new(e);
            let Some(lim) = limit_tuple(&l, &h) else { continue };
            let conj = are_conjugate(&h, &lim, &group);
            let ru = ru_conjugator(&h, &l, budget)?.is_some();
            if conj != ru {
                return Ok(format!("disagree on {x} with λ = {:?}", l.exponents()));
            }
        }
    }
    Ok("agree".into())
}

/// Complete reducibility iff the semisimplification is conjugate, over
/// `GL_2(F_2)` pairs.
fn gcr_criterion_oracle(budget: u128) -> Result<String> {
    let group = general_linear_group(f2(), 2, budget)?;
    for pair in group.elements().iter().combinations_with_replacement(2) {
        let h = MatrixTuple::new(pair.into_iter().cloned().collect())?;
        let cr = is_completely_reducible(&h)?.completely_reducible;
        let (s, _) = semisimplify(&h)?;
        if cr != are_conjugate(&h, &s, &group) {
            return Ok(format!("disagree on {:?}", h.components()));
        }
    }
    Ok("agree".into())
}

pub fn corpus() -> Vec<Case> {
    let case = |name, expected: &str, compute| Case {
        name,
        expected: expected.to_string(),
        compute,
    };
    vec![
        case("limit-unipotent-upper", "[[1, 0], [0, 1]]", limit_upper),
        case("limit-unipotent-lower", "none", limit_lower),
        case("limit-upper-triangular-rational", "[[2, 0], [0, 5]]", limit_generic),
        case("adjoint-sl2-f3-irreducible", "[0, 3]", adjoint_f3),
        case("adjoint-sl2-f2-finite-splits", "completely reducible", adjoint_f2),
        case(
            "adjoint-sl2-char2-not-cr",
            "not completely reducible, witness dim 2",
            adjoint_char2,
        ),
        case("adjoint-sl2-char2-product", "(false, false, false)", adjoint_char2_product),
        case("unipotent-orbit-not-closed", "false", unipotent_closed),
        case("borel-tits-jordan-block", "[1, 2, 3]", borel_tits_jordan),
        case("optimize-two-weights", "Some([1, 1]) 2", optimize_pair),
        case("optimize-semistable", "true", optimize_semistable),
        case("ru-conjugator-f5", "[[1, 4], [0, 1]]", ru_f5),
        case("ru-conjugator-jordan-f2", "none", ru_jordan_f2),
        case("normal-closure-s3", "3 elements, completely reducible", s3_normal_closure),
        case("orbit-dimension-jordan", "2", jordan_orbit_dim),
        case("oracle-optimizer-box", "agree", optimizer_oracle),
        case("oracle-limit-orbit-gl2-f2", "agree", limit_orbit_oracle),
        case("oracle-gcr-criterion-gl2-f2", "agree", gcr_criterion_oracle),
    ]
}

pub fn run_corpus(cases: &[Case], budget: u128) -> Vec<CaseOutcome> {
    cases
        .iter()
        .map(|c| {
            let actual = (c.compute)(budget);
            let passed = matches!(&actual, Ok(a) if *a == c.expected);
            CaseOutcome {
                name: c.name,
                expected: c.expected.clone(),
                actual,
                passed,
            }
        })
        .collect()
}
