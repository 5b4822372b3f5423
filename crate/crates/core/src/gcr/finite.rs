//! Brute-force machinery over finite fields: `GL_n(F_q)` enumeration,
//! conjugacy, group closures, and the `R_u(P_λ)` conjugator search.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};
use crate::linalg::{FieldSpec, Matrix};
use crate::torus::{limit_tuple, Cocharacter};
use crate::tuple::MatrixTuple;

/// Elements of a finite matrix group with their inverses, in a fixed order.
#[derive(Debug, Clone)]
pub struct GroupElements {
    elements: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl GroupElements {
    fn from_elements(elements: Vec<Matrix>) -> Self {
        let inverses = elements
            .iter()
            .map(|g| g.inverse().expect("group elements are invertible"))
            .collect();
        GroupElements { elements, inverses }
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Matrix, &Matrix)> {
        self.elements.iter().zip(&self.inverses)
    }
}

fn matrix_from_code(field: FieldSpec, n: usize, mut code: u64, q: u64) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for idx in (0..n * n).rev() {
        m.set(idx / n, idx % n, field.from_i64((code % q) as i64));
        code /= q;
    }
    m
}

fn field_order(field: FieldSpec) -> Result<u64> {
    field.order().ok_or(Error::InfiniteField)
}

/// All of `GL_n(F_q)`, enumerating the `q^(n²)` matrices lexicographically.
pub fn general_linear_group(field: FieldSpec, n: usize, budget: u128) -> Result<GroupElements> {
    let q = field_order(field)?;
    let needed = (q as u128).saturating_pow((n * n) as u32);
    check_budget(needed, budget)?;
    let elements: Vec<Matrix> = (0..needed as u64)
        .into_par_iter()
        .map(|code| matrix_from_code(field, n, code, q))
        .filter(Matrix::is_invertible)
        .collect();
    Ok(GroupElements::from_elements(elements))
}

/// First `g` in group order with `g h_i g⁻¹ = k_i` for every `i`.
pub fn conjugating_element(
    h: &MatrixTuple,
    k: &MatrixTuple,
    group: &GroupElements,
) -> Option<Matrix> {
    if h.len() != k.len() || h.dim() != k.dim() {
        return None;
    }
    group
        .elements
        .par_iter()
        .find_first(|g| h.iter().zip(k.iter()).all(|(a, b)| g.mul(a) == b.mul(g)))
        .cloned()
}

pub fn are_conjugate(h: &MatrixTuple, k: &MatrixTuple, group: &GroupElements) -> bool {
    conjugating_element(h, k, group).is_some()
}

/// The full conjugation orbit of `h` under `group`.
pub fn conjugacy_orbit(h: &MatrixTuple, group: &GroupElements) -> HashSet<MatrixTuple> {
    group
        .iter()
        .map(|(g, gi)| h.conjugate_by(g, gi))
        .collect()
}

/// All elements of the group generated by `gens`, breadth-first from the
/// identity. Fails once more than `budget` elements have been found.
pub fn group_closure(gens: &[Matrix], budget: u128) -> Result<Vec<Matrix>> {
    let first = gens.first().ok_or(Error::EmptyTuple)?;
    let id = Matrix::identity(first.field(), first.rows());
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    order.push(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                check_budget(seen.len() as u128, budget)?;
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

fn sort_canonically(elements: &mut [Matrix]) {
    elements.sort_by(|a, b| {
        let ka: Vec<_> = a.entries().iter().map(|s| s.order_key()).collect();
        let kb: Vec<_> = b.entries().iter().map(|s| s.order_key()).collect();
        ka.cmp(&kb)
    });
}

/// Elements of the smallest normal subgroup of `⟨h⟩` containing the selected
/// generators, sorted entrywise.
pub fn normal_closure(h: &MatrixTuple, indices: &[usize], budget: u128) -> Result<MatrixTuple> {
    field_order(h.field())?;
    if let Some(&bad) = indices.iter().find(|&&i| i >= h.len()) {
        return Err(Error::IndexOutOfRange(bad));
    }
    let group = group_closure(h, budget)?;
    let selected: Vec<&Matrix> = indices.iter().map(|&i| &h[i]).collect();
    let mut conjugates: HashSet<Matrix> = HashSet::new();
    for g in &group {
        let gi = g.inverse().expect("invertible");
        for s in &selected {
            conjugates.insert(g.conjugate(s, &gi));
        }
    }
    let mut gens: Vec<Matrix> = conjugates.into_iter().collect();
    if gens.is_empty() {
        gens.push(Matrix::identity(h.field(), h.dim()));
    }
    sort_canonically(&mut gens);
    let mut elements = group_closure(&gens, budget)?;
    sort_canonically(&mut elements);
    Ok(MatrixTuple::from_trusted(h.field(), h.dim(), elements))
}

/// Searches `R_u(P_λ)(F_q)` for `u` such that `λ` fixes `u h u⁻¹`.
///
/// Candidates are enumerated lexicographically over the free positions of the
/// unipotent radical (row-major), entries in the order `0, 1, ..., q-1`; the
/// first hit is returned. `u` is given in the ambient frame, i.e. conjugated
/// back by `λ`'s conjugator when present.
pub fn ru_conjugator(h: &MatrixTuple, lambda: &Cocharacter, budget: u128) -> Result<Option<Matrix>> {
    let field = h.field();
    let q = field_order(field)?;
    if lambda.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cocharacter of length {} vs tuple dimension {}",
            lambda.dim(),
            h.dim()
        )));
    }
    if limit_tuple(lambda, h).is_none() {
        return Err(Error::LimitAbsent);
    }
    let par = lambda.parabolic();
    let positions = par.unipotent_positions();
    let needed = (q as u128).saturating_pow(positions.len() as u32);
    check_budget(needed, budget)?;
    let n = h.dim();
    let framed: Vec<Matrix> = h.iter().map(|x| lambda.to_frame(x)).collect();
    let found = (0..needed as u64).into_par_iter().find_first(|&code| {
        let u = radical_element(field, n, &positions, code, q);
        let ui = u.inverse().expect("unipotent");
        framed.iter().all(|x| par.contains_levi(&u.conjugate(x, &ui)))
    });
    Ok(found.map(|code| lambda.from_frame(&radical_element(field, n, &positions, code, q))))
}

fn radical_element(
    field: FieldSpec,
    n: usize,
    positions: &[(usize, usize)],
    mut code: u64,
    q: u64,
) -> Matrix {
    let mut u = Matrix::identity(field, n);
    for &(i, j) in positions.iter().rev() {
        u.set(i, j, field.from_i64((code % q) as i64));
        code /= q;
    }
    u
}
