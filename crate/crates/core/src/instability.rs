//! The numerical function `μ`, its normalisation `μ/‖λ‖`, and the optimal
//! destabilising cocharacter of a weight support.
//!
//! Over a fixed torus the supremum of `min_i ⟨λ, χ_i⟩ / ‖λ‖` equals the
//! Euclidean distance from the origin to the convex hull of the weights
//! when the origin lies outside the hull, and is attained on the ray through
//! the minimum-norm point `p` of the hull. Everything here is exact: `p` is
//! rational and `f`-values are compared through squared cross-products.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_budget, Error, Result};
use crate::linalg::{solve_affine, FieldSpec, Matrix, Scalar};
use crate::torus::Cocharacter;
use crate::tuple::MatrixTuple;

/// The support `{χ_1, ..., χ_t} ⊂ ℤ^r` of a vector, pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSet {
    rank: usize,
    weights: Vec<Vec<i64>>,
}

impl WeightSet {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let rank = weights.first().ok_or(Error::EmptyWeightSet)?.len();
        for (i, w) in weights.iter().enumerate() {
            if w.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "weight {i} has length {}, expected {rank}",
                    w.len()
                )));
            }
            if weights[..i].contains(w) {
                return Err(Error::DuplicateWeight(w.clone()));
            }
        }
        Ok(WeightSet { rank, weights })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[i64]) -> i64 {
    dot(a, a)
}

/// Weights `e_i - e_j` of the conjugation module carried by the nonzero
/// entries of `g⁻¹ h_k g`, sorted and deduplicated.
pub fn support_of_tuple(h: &MatrixTuple, g: &Matrix) -> Result<WeightSet> {
    let n = h.dim();
    if !g.is_square() || g.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "basis change is {}x{}, tuple has dimension {n}",
            g.rows(),
            g.cols()
        )));
    }
    let g_inv = g.inverse().ok_or(Error::NotInvertible)?;
    let mut weights = Vec::new();
    for x in h.iter() {
        let y = g_inv.mul(x).mul(g);
        for i in 0..n {
            for j in 0..n {
                if !y.get(i, j).is_zero() {
                    let mut w = vec![0i64; n];
                    w[i] += 1;
                    w[j] -= 1;
                    weights.push(w);
                }
            }
        }
    }
    weights.sort();
    weights.dedup();
    WeightSet::new(weights)
}

/// `μ(λ) = min_i ⟨λ, χ_i⟩`.
pub fn mu(w: &WeightSet, lambda: &[i64]) -> Result<i64> {
    if lambda.len() != w.rank {
        return Err(Error::DimensionMismatch(format!(
            "cocharacter of length {} vs weights of rank {}",
            lambda.len(),
            w.rank
        )));
    }
    w.weights
        .iter()
        .map(|chi| dot(lambda, chi))
        .min()
        .ok_or(Error::EmptyWeightSet)
}

/// Compares `f(λ_1)` with `f(λ_2)` where `f(λ) = μ(λ)/‖λ‖`.
pub fn f_compare(w: &WeightSet, l1: &[i64], l2: &[i64]) -> Result<Ordering> {
    if l1.iter().all(|&x| x == 0) || l2.iter().all(|&x| x == 0) {
        return Err(Error::ZeroCocharacter);
    }
    let m1 = mu(w, l1)?;
    let m2 = mu(w, l2)?;
    Ok(compare_normalised(m1, norm_sq(l1), m2, norm_sq(l2)))
}

/// Orders `m1/√n1` against `m2/√n2` with `n1, n2 > 0`.
fn compare_normalised(m1: i64, n1: i64, m2: i64, n2: i64) -> Ordering {
    let s1 = m1.signum();
    let s2 = m2.signum();
    if s1 != s2 {
        return s1.cmp(&s2);
    }
    let lhs = (m1 as i128) * (m1 as i128) * (n2 as i128);
    let rhs = (m2 as i128) * (m2 as i128) * (n1 as i128);
    if s1 >= 0 {
        lhs.cmp(&rhs)
    } else {
        rhs.cmp(&lhs)
    }
}

/// A point of the convex hull written as a convex combination of weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPoint {
    pub point: Vec<BigRational>,
    /// `(weight index, coefficient)`, coefficients positive and summing to 1.
    pub coefficients: Vec<(usize, BigRational)>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_dot_int(p: &[BigRational], chi: &[i64]) -> BigRational {
    p.iter()
        .zip(chi)
        .fold(BigRational::zero(), |acc, (a, &b)| acc + a * rat(b))
}

fn rat_norm_sq(p: &[BigRational]) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, a| acc + a * a)
}

/// Minimum-norm point of `affine hull(subset)` in barycentric coordinates,
/// when the subset is affinely independent.
fn project_origin(w: &WeightSet, subset: &[usize]) -> Option<Vec<BigRational>> {
    let q = FieldSpec::Rationals;
    let k = subset.len();
    // [ G  1 ] [α]   [0]
    // [ 1ᵀ 0 ] [ν] = [1]
    let mut kkt = Matrix::zeros(q, k + 1, k + 1);
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            kkt.set(a, b, q.from_i64(dot(&w.weights[i], &w.weights[j])));
        }
        kkt.set(a, k, q.one());
        kkt.set(k, a, q.one());
    }
    let mut rhs = vec![q.zero(); k + 1];
    rhs[k] = q.one();
    let sol = solve_affine(&kkt, &rhs).ok()??;
    if !sol.kernel.is_empty() {
        return None;
    }
    let alpha: Vec<BigRational> = sol.particular[..k]
        .iter()
        .map(|s| s.as_rational().expect("rational").clone())
        .collect();
    Some(alpha)
}

/// Exact minimum-norm point of `conv(W)` with a convex-combination certificate.
///
/// Affinely independent subsets are visited by size and then
/// lexicographically; the first subset whose projection of the origin lies in
/// its simplex and satisfies `⟨p, χ⟩ ≥ ⟨p, p⟩` for every weight is returned.
/// That inequality characterises the (unique) minimiser.
pub fn min_norm_point(w: &WeightSet) -> Result<HullPoint> {
    if w.is_empty() {
        return Err(Error::EmptyWeightSet);
    }
    let max_size = w.len().min(w.rank + 1);
    for size in 1..=max_size {
        for subset in (0..w.len()).combinations(size) {
            let Some(alpha) = project_origin(w, &subset) else {
                continue;
            };
            if alpha.iter().any(|a| a.is_negative()) {
                continue;
            }
            let mut point = vec![BigRational::zero(); w.rank];
            for (a, &i) in alpha.iter().zip(&subset) {
                for (x, &c) in point.iter_mut().zip(&w.weights[i]) {
                    *x += a * rat(c);
                }
            }
            let pp = rat_norm_sq(&point);
            if w.weights.iter().all(|chi| rat_dot_int(&point, chi) >= pp) {
                let coefficients = subset
                    .iter()
                    .zip(alpha)
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(&i, a)| (i, a))
                    .collect();
                return Ok(HullPoint {
                    point,
                    coefficients,
                });
            }
        }
    }
    Err(Error::Internal("no minimum-norm point found".into()))
}

/// Exact certificate attached to an [`InstabilityReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub coefficients: Vec<(usize, BigRational)>,
    /// `⟨p, χ_i⟩ - ⟨p, p⟩` for every weight, in weight order.
    pub margins: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstabilityReport {
    pub semistable: bool,
    pub point: Vec<BigRational>,
    /// `C² = ⟨p, p⟩`.
    pub optimal_value_sq: BigRational,
    pub lambda: Option<Vec<i64>>,
    pub mu: Option<i64>,
    pub lambda_norm_sq: Option<i64>,
    pub certificate: Certificate,
}

impl InstabilityReport {
    /// Re-checks every exact claim of the report against `w`.
    pub fn verify(&self, w: &WeightSet) -> std::result::Result<(), String> {
        let mut sum = BigRational::zero();
        let mut recon = vec![BigRational::zero(); w.rank];
        for (i, a) in &self.certificate.coefficients {
            if a.is_negative() {
                return Err(format!("negative hull coefficient for weight {i}"));
            }
            let chi = w.weights.get(*i).ok_or("coefficient index out of range")?;
            sum += a;
            for (x, &c) in recon.iter_mut().zip(chi) {
                *x += a * rat(c);
            }
        }
        if !sum.is_one() {
            return Err(format!("hull coefficients sum to {sum}"));
        }
        if recon != self.point {
            return Err("point is not the stated convex combination".into());
        }
        let pp = rat_norm_sq(&self.point);
        if pp != self.optimal_value_sq {
            return Err("C² differs from ⟨p,p⟩".into());
        }
        if self.certificate.margins.len() != w.len() {
            return Err("margin count differs from weight count".into());
        }
        for (chi, m) in w.weights.iter().zip(&self.certificate.margins) {
            let actual = rat_dot_int(&self.point, chi) - &pp;
            if &actual != m || m.is_negative() {
                return Err(format!("bad margin for weight {chi:?}"));
            }
        }
        match (&self.lambda, self.semistable) {
            (None, true) if pp.is_zero() => Ok(()),
            (Some(l), false) if !pp.is_zero() => {
                let g = l.iter().fold(0i64, |acc, &x| acc.gcd(&x));
                if g != 1 {
                    return Err("λ_opt is not primitive".into());
                }
                if !rat_dot_int(&self.point, l).is_positive() {
                    return Err("λ_opt does not point along p".into());
                }
                let m = mu(w, l).map_err(|e| e.to_string())?;
                let n2 = norm_sq(l);
                if Some(m) != self.mu || Some(n2) != self.lambda_norm_sq {
                    return Err("μ or ‖λ‖² misreported".into());
                }
                if rat(m) * rat(m) != &pp * rat(n2) {
                    return Err("μ(λ_opt)² ≠ C²·‖λ_opt‖²".into());
                }
                Ok(())
            }
            _ => Err("semistable flag inconsistent with p".into()),
        }
    }
}

/// Shortest lattice point on the ray through a nonzero rational vector.
fn primitive_on_ray(p: &[BigRational]) -> Result<Vec<i64>> {
    let l = p
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = p.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            (x / &g)
                .to_i64()
                .ok_or_else(|| Error::Internal("λ_opt entry overflows i64".into()))
        })
        .collect()
}

/// Optimal destabilising cocharacter within the torus of `W`.
pub fn optimal_cocharacter(w: &WeightSet) -> Result<InstabilityReport> {
    let hull = min_norm_point(w)?;
    let pp = rat_norm_sq(&hull.point);
    let margins = w
        .weights
        .iter()
        .map(|chi| rat_dot_int(&hull.point, chi) - &pp)
        .collect();
    let certificate = Certificate {
        coefficients: hull.coefficients,
        margins,
    };
    if pp.is_zero() {
        return Ok(InstabilityReport {
            semistable: true,
            point: hull.point,
            optimal_value_sq: pp,
            lambda: None,
            mu: None,
            lambda_norm_sq: None,
            certificate,
        });
    }
    let lambda = primitive_on_ray(&hull.point)?;
    let m = mu(w, &lambda)?;
    let n2 = norm_sq(&lambda);
    if rat(m) * rat(m) != &pp * rat(n2) {
        return Err(Error::Internal("optimal value identity fails".into()));
    }
    Ok(InstabilityReport {
        semistable: false,
        point: hull.point,
        optimal_value_sq: pp,
        lambda: Some(lambda),
        mu: Some(m),
        lambda_norm_sq: Some(n2),
        certificate,
    })
}

/// Best nonzero `λ ∈ [-B, B]^r` under [`f_compare`] by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxOptimum {
    pub lambda: Vec<i64>,
    pub mu: i64,
    pub norm_sq: i64,
}

pub fn brute_force_optimum(w: &WeightSet, radius: i64, budget: u128) -> Result<BoxOptimum> {
    if w.is_empty() {
        return Err(Error::EmptyWeightSet);
    }
    if radius < 1 {
        return Err(Error::DimensionMismatch("box radius must be at least 1".into()));
    }
    let side = (2 * radius + 1) as u128;
    let needed = (w.rank as u128).saturating_mul(side.saturating_pow(w.rank as u32));
    check_budget(needed, budget)?;
    let mut best: Option<BoxOptimum> = None;
    for lambda in (0..w.rank)
        .map(|_| -radius..=radius)
        .multi_cartesian_product()
    {
        if lambda.iter().all(|&x| x == 0) {
            continue;
        }
        let m = mu(w, &lambda)?;
        let n2 = norm_sq(&lambda);
        let better = match &best {
            None => true,
            Some(b) => compare_normalised(m, n2, b.mu, b.norm_sq) == Ordering::Greater,
        };
        if better {
            best = Some(BoxOptimum {
                lambda,
                mu: m,
                norm_sq: n2,
            });
        }
    }
    best.ok_or_else(|| Error::Internal("empty box".into()))
}

/// `μ` of a tuple for a cocharacter of the conjugated torus `g D_n g⁻¹`.
pub fn mu_conjugated(h: &MatrixTuple, lambda: &Cocharacter) -> Result<i64> {
    if lambda.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cocharacter of length {} vs tuple dimension {}",
            lambda.dim(),
            h.dim()
        )));
    }
    let id = Matrix::identity(h.field(), h.dim());
    let g = lambda.conjugator().unwrap_or(&id);
    mu(&support_of_tuple(h, g)?, lambda.exponents())
}

/// Converts a rational vector to literal strings `"a/b"` (or `"a"`).
pub fn rational_literals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| Scalar::Rational(x.clone()).to_string()).collect()
}
