//! Pfaffians and Pfaffian type vectors taken modulo a global sign.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// Pfaffian by expansion along the first row.
pub fn pfaffian(a: &Matrix) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::shape("pfaffian needs a square matrix"));
    }
    if a.rows() % 2 == 1 {
        return Err(Error::OddSize);
    }
    if !a.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(pf_rec(a, &idx))
}

fn pf_rec(a: &Matrix, idx: &[usize]) -> Scalar {
    let field = a.field();
    if idx.is_empty() {
        return field.one();
    }
    let first = idx[0];
    let mut total = field.zero();
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let entry = &a[(first, j)];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let term = entry * &pf_rec(a, &rest);
        // Sign (−1)^{k+1} for the k-th remaining index, k ≥ 1.
        total = if k % 2 == 1 { &total + &term } else { &total - &term };
    }
    total
}

/// Signs `τ_p ∈ {±1}`, one per fixed point, modulo a global sign. Stored
/// with the first entry normalized to `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector {
    taus: Vec<i8>,
}

impl TypeVector {
    pub fn new(mut taus: Vec<i8>) -> Result<Self> {
        if taus.is_empty() || taus.len() % 2 == 1 {
            return Err(Error::Malformed(
                "a type vector needs an even, nonzero number of signs".into(),
            ));
        }
        if taus.iter().any(|&t| t != 1 && t != -1) {
            return Err(Error::Malformed("type entries must be +1 or -1".into()));
        }
        if taus[0] == -1 {
            taus.iter_mut().for_each(|t| *t = -*t);
        }
        Ok(TypeVector { taus })
    }

    /// `τ_p = pf(ψ_p)` for alternating `ψ_p` of determinant 1.
    pub fn from_forms(psis: &[Matrix]) -> Result<Self> {
        let taus = psis
            .iter()
            .map(|psi| {
                let pf = pfaffian(psi)?;
                if !psi.det().is_one() {
                    return Err(Error::NotUnitPfaffian(format!("determinant is {}", psi.det())));
                }
                if pf.is_one() {
                    Ok(1)
                } else if (-&pf).is_one() {
                    Ok(-1)
                } else {
                    Err(Error::NotUnitPfaffian(pf.to_string()))
                }
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(taus)
    }

    pub fn taus(&self) -> &[i8] {
        &self.taus
    }
}

/// Distinct type vectors over all sign patterns on `points` fixed points.
pub fn all_type_vectors(points: usize) -> Result<BTreeSet<TypeVector>> {
    if points == 0 || points % 2 == 1 || points > 20 {
        return Err(Error::Malformed(format!("unsupported number of fixed points {points}")));
    }
    (0u32..1 << points)
        .map(|mask| TypeVector::new((0..points).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()))
        .collect()
}
