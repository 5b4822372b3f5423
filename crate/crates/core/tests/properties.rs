use gcr_core::gcr::{
    composition_series, has_invariant_complement, is_completely_reducible, product_check,
    semisimplify,
};
use gcr_core::instability::{f_compare, mu, mu_conjugated, optimal_cocharacter, support_of_tuple, WeightSet};
use gcr_core::io::{parse_request, run, serialize_request, Command, JobRequest, Payload};
use gcr_core::linalg::{commutant, commutant_dimension, rref, spin};
use gcr_core::torus::{limit_conj, pairing};
use gcr_core::{Character, Cocharacter, FieldSpec, Matrix, MatrixTuple, Scalar, Subspace};
use num_integer::Integer;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
    ]
}

fn finite_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
    ]
}

fn build(field: FieldSpec, n: usize, m: usize, entries: &[i64]) -> Matrix {
    let rows = (0..n)
        .map(|i| (0..m).map(|j| field.from_i64(entries[i * m + j])).collect())
        .collect();
    Matrix::from_rows(field, rows).unwrap()
}

fn matrix(field: FieldSpec, n: usize, m: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, n * m).prop_map(move |e| build(field, n, m, &e))
}

fn invertible(field: FieldSpec, n: usize) -> impl Strategy<Value = Matrix> {
    matrix(field, n, n).prop_filter("invertible", Matrix::is_invertible)
}

/// A tuple of 1–3 invertible matrices, optionally forced block upper
/// triangular with respect to a random split so non-semisimple cases occur.
fn tuple() -> impl Strategy<Value = MatrixTuple> {
    (field(), 1usize..=4, 1usize..=3, any::<bool>()).prop_flat_map(|(f, n, m, triangular)| {
        proptest::collection::vec(invertible(f, n), m).prop_map(move |gens| {
            let gens = if triangular {
                gens.into_iter()
                    .map(|g| {
                        let mut t = g.clone();
                        for i in 0..n {
                            for j in 0..i {
                                t.set(i, j, f.zero());
                            }
                            if t.get(i, i).is_zero() {
                                t.set(i, i, f.one());
                            }
                        }
                        t
                    })
                    .collect()
            } else {
                gens
            };
            MatrixTuple::new(gens).unwrap()
        })
    })
}

fn exponents(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, n)
}

/// Element of `P_λ`: zero the entries where `λ_i < λ_j`, then force an
/// invertible diagonal-block part by adding the identity where needed.
fn in_parabolic(l: &[i64], x: &Matrix) -> Matrix {
    let mut y = x.clone();
    for i in 0..l.len() {
        for j in 0..l.len() {
            if l[i] < l[j] {
                y.set(i, j, x.field().zero());
            }
        }
    }
    y
}

fn weight_set() -> impl Strategy<Value = WeightSet> {
    (1usize..=3).prop_flat_map(|r| {
        proptest::collection::btree_set(proptest::collection::vec(-4i64..=4, r), 1..=5)
            .prop_map(|s| WeightSet::new(s.into_iter().collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(f in field(), n in 1usize..=4, m in 1usize..=4, seed in proptest::collection::vec(-3i64..=3, 16)) {
        let a = build(f, n, m, &seed);
        let once = rref(&a);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, a.rank());
    }

    #[test]
    fn spin_contains_seeds_and_is_stable(h in tuple(), seed in proptest::collection::vec(-3i64..=3, 4)) {
        let f = h.field();
        let v: Vec<Scalar> = (0..h.dim()).map(|i| f.from_i64(seed[i])).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let s = spin(std::slice::from_ref(&v), &h).unwrap();
        prop_assert!(s.contains(&v));
        prop_assert!(s.is_stable_under(&h));
    }

    #[test]
    fn commutant_bounds_and_conjugation_invariance(
        (h, g) in tuple().prop_flat_map(|h| { let (f, n) = (h.field(), h.dim()); (Just(h), invertible(f, n)) })
    ) {
        let n = h.dim();
        let basis = commutant(h.field(), n, &h);
        let d = basis.len();
        prop_assert!(d >= 1 && d <= n * n);
        let id = Matrix::identity(h.field(), n);
        prop_assert!(Subspace::span(h.field(), n * n, &basis.iter().map(|b| b.entries().to_vec()).collect::<Vec<_>>())
            .contains(id.entries()));
        let gi = g.inverse().unwrap();
        prop_assert_eq!(commutant_dimension(h.field(), n, &h.conjugate_by(&g, &gi)), d);
    }

    #[test]
    fn pairing_is_permutation_equivariant(
        (l, chi, sigma) in (1usize..=6).prop_flat_map(|n| (
            exponents(n), exponents(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
        ))
    ) {
        let pl: Vec<i64> = sigma.iter().map(|&i| l[i]).collect();
        let pc: Vec<i64> = sigma.iter().map(|&i| chi[i]).collect();
        prop_assert_eq!(
            pairing(&Cocharacter::new(l), &Character(chi)).unwrap(),
            pairing(&Cocharacter::new(pl), &Character(pc)).unwrap()
        );
    }

    #[test]
    fn limit_matches_parabolic_pattern(
        (l, x) in (field(), 1usize..=4).prop_flat_map(|(f, n)| (exponents(n), matrix(f, n, n)))
    ) {
        let lambda = Cocharacter::new(l.clone());
        let lim = limit_conj(&lambda, &x);
        prop_assert_eq!(lim.is_some(), lambda.in_parabolic(&x));
        if let Some(y) = lim {
            prop_assert!(lambda.in_levi(&y));
            prop_assert_eq!(limit_conj(&lambda, &y), Some(y));
        }
    }

    #[test]
    fn limit_of_parabolic_conjugate(
        (l, x, g) in (finite_field(), 1usize..=4).prop_flat_map(|(f, n)| (exponents(n), matrix(f, n, n), matrix(f, n, n)))
    ) {
        let lambda = Cocharacter::new(l.clone());
        let x = in_parabolic(&l, &x);
        let g = in_parabolic(&l, &g);
        prop_assume!(g.is_invertible());
        let gi = g.inverse().unwrap();
        let x_lim = limit_conj(&lambda, &x).unwrap();
        let c = limit_conj(&lambda, &g).unwrap();
        let ci = c.inverse().unwrap();
        prop_assert_eq!(limit_conj(&lambda, &g.conjugate(&x, &gi)), Some(c.conjugate(&x_lim, &ci)));
    }

    #[test]
    fn parabolic_is_scale_invariant((l, x) in (field(), 1usize..=4).prop_flat_map(|(f, n)| (exponents(n), matrix(f, n, n))), k in 1i64..=7) {
        let lambda = Cocharacter::new(l);
        let scaled = lambda.scaled(k);
        prop_assert_eq!(lambda.parabolic().unipotent_positions(), scaled.parabolic().unipotent_positions());
        prop_assert_eq!(lambda.in_parabolic(&x), scaled.in_parabolic(&x));
        prop_assert_eq!(limit_conj(&lambda, &x), limit_conj(&scaled, &x));
    }

    #[test]
    fn levi_times_radical_factorisation(
        (l, x) in (field(), 1usize..=4).prop_flat_map(|(f, n)| (exponents(n), matrix(f, n, n)))
    ) {
        let lambda = Cocharacter::new(l.clone());
        let p = in_parabolic(&l, &x);
        prop_assume!(p.is_invertible());
        let levi = lambda.parabolic().levi_part(&p);
        let u = levi.inverse().unwrap().mul(&p);
        prop_assert!(lambda.in_levi(&levi));
        prop_assert!(lambda.in_unipotent_radical(&u));
        prop_assert_eq!(levi.mul(&u), p);
        // R_u ∩ L = {1}
        if lambda.in_levi(&u) {
            prop_assert!(u.is_identity());
        }
    }

    #[test]
    fn f_compare_is_scale_invariant(w in weight_set(), raw in exponents(3), c in 1i64..=20) {
        let l: Vec<i64> = raw.into_iter().take(w.rank()).collect();
        prop_assume!(l.iter().any(|&x| x != 0));
        let scaled: Vec<i64> = l.iter().map(|x| c * x).collect();
        prop_assert_eq!(f_compare(&w, &l, &scaled).unwrap(), std::cmp::Ordering::Equal);
    }

    #[test]
    fn radical_conjugation_raises_weights(
        (l, i, j, bits) in (2usize..=4).prop_flat_map(|n| (exponents(n), 0..n, 0..n, any::<u16>()))
    ) {
        let f = FieldSpec::prime(3).unwrap();
        let n = l.len();
        let lambda = Cocharacter::new(l.clone());
        let mut u = Matrix::identity(f, n);
        for (k, &(a, b)) in lambda.parabolic().unipotent_positions().iter().enumerate() {
            u.set(a, b, f.from_i64(((bits >> (k % 16)) & 1) as i64 + 1));
        }
        let x = Matrix::unit(f, n, i, j);
        let ui = u.inverse().unwrap();
        let diff = u.conjugate(&x, &ui).sub(&x);
        let base = l[i] - l[j];
        for a in 0..n {
            for b in 0..n {
                if !diff.get(a, b).is_zero() {
                    prop_assert!(l[a] - l[b] > base);
                }
            }
        }
    }

    #[test]
    fn mu_is_radical_conjugation_invariant(
        (h, l, bits) in tuple().prop_flat_map(|h| { let n = h.dim(); (Just(h), exponents(n), any::<u16>()) })
    ) {
        let f = h.field();
        let n = h.dim();
        let lambda = Cocharacter::new(l.clone());
        let mut u = Matrix::identity(f, n);
        for (k, &(a, b)) in lambda.parabolic().unipotent_positions().iter().enumerate() {
            u.set(a, b, f.from_i64(((bits >> (k % 16)) & 3) as i64 - 1));
        }
        let conj = Cocharacter::conjugated(l.clone(), u).unwrap();
        let direct = mu(&support_of_tuple(&h, &Matrix::identity(f, n)).unwrap(), &l).unwrap();
        prop_assert_eq!(mu_conjugated(&h, &conj).unwrap(), direct);
    }

    #[test]
    fn optimal_certificate_is_exact(w in weight_set()) {
        let r = optimal_cocharacter(&w).unwrap();
        prop_assert!(r.verify(&w).is_ok());
        if let Some(l) = &r.lambda {
            let m = mu(&w, l).unwrap();
            let norm: i64 = l.iter().map(|x| x * x).sum();
            let lhs = num_rational::BigRational::from_integer((m * m).into());
            prop_assert_eq!(lhs, r.optimal_value_sq.clone() * num_rational::BigRational::from_integer(norm.into()));
            prop_assert_eq!(l.iter().fold(0i64, |g, &x| g.gcd(&x)), 1);
            let dot = l.iter().zip(&r.point).fold(num_rational::BigRational::from_integer(0.into()), |acc, (a, p)| {
                acc + p * num_rational::BigRational::from_integer((*a).into())
            });
            prop_assert!(dot > num_rational::BigRational::from_integer(0.into()));
            for probe in [vec![1i64; w.rank()], (0..w.rank() as i64).map(|k| k - 1).collect()] {
                if probe.iter().any(|&x| x != 0) {
                    prop_assert_ne!(f_compare(&w, l, &probe).unwrap(), std::cmp::Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn complements_are_sound(h in tuple(), k in 1usize..=3) {
        let n = h.dim();
        let dec = composition_series(&h).unwrap();
        let w = &dec.series[k.min(dec.series.len() - 1)];
        if let Some(c) = has_invariant_complement(&h, w).unwrap() {
            prop_assert!(c.is_stable_under(&h));
            prop_assert!(w.intersection(&c).is_zero());
            prop_assert!(w.sum(&c).is_full());
            prop_assert_eq!(w.dim() + c.dim(), n);
        }
    }

    #[test]
    fn semisimplification_properties(h in tuple()) {
        let v = is_completely_reducible(&h).unwrap();
        let (s, l) = semisimplify(&h).unwrap();
        prop_assert!(s.iter().all(|x| l.fixes(x)));
        let mut before = v.decomposition.factor_dims();
        let mut after = composition_series(&s).unwrap().factor_dims();
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
        prop_assert!(is_completely_reducible(&s).unwrap().completely_reducible);
        let (f, n) = (h.field(), h.dim());
        if v.completely_reducible {
            prop_assert!(v.witness.is_none());
        } else {
            prop_assert!(v.witness.as_ref().unwrap().verify(&h).is_ok());
            prop_assert!(commutant_dimension(f, n, &s) > commutant_dimension(f, n, &h));
        }
    }

    #[test]
    fn product_verdict_is_conjunction(
        (a, b) in (field(), 1usize..=2, 1usize..=3, 1usize..=3).prop_flat_map(|(f, m, n1, n2)| (
            proptest::collection::vec(invertible(f, n1), m),
            proptest::collection::vec(invertible(f, n2), m),
        ))
    ) {
        let h1 = MatrixTuple::new(a).unwrap();
        let h2 = MatrixTuple::new(b).unwrap();
        let (x, y, z) = product_check(&h1, &h2).unwrap();
        prop_assert_eq!(z, x && y);
    }

    #[test]
    fn requests_round_trip(h in tuple(), l in exponents(4), budget in proptest::option::of(1u128..1_000_000)) {
        let lambda: Vec<i64> = l.into_iter().take(h.dim()).collect();
        for (command, payload) in [
            (Command::Check, Payload::Tuple(h.clone())),
            (Command::Limit, Payload::Limit { lambda: lambda.clone(), conjugator: None, tuple: h.clone() }),
            (Command::Limit, Payload::Limit { lambda: lambda.clone(), conjugator: Some(h[0].clone()), tuple: h.clone() }),
        ] {
            let req = JobRequest { command, field: h.field(), payload, budget };
            prop_assert_eq!(parse_request(&serialize_request(&req)).unwrap(), req);
        }
    }

    #[test]
    fn reports_are_reproducible(h in tuple()) {
        let req = JobRequest { command: Command::Witness, field: h.field(), payload: Payload::Tuple(h), budget: None };
        let a = run(&req).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = single.install(|| run(&req).unwrap());
        prop_assert_eq!(a.body, b.body);
    }
}
