//! Exhaustive fiber computations over small prime fields.
//!
//! The fixed set is enumerated from the closed-form predicates; the raw
//! involution is evaluated on every pair `(g, h)` as an independent oracle
//! whenever that is small enough.

use rand::Rng;
use serde::Serialize;

use super::dual::{
    alternating_involution, check_alternating_form, dn_det, dn_mul, is_fixed_alternating, is_fixed_plus,
    is_fixed_unramified, plus_involution, DualNumberMatrix,
};
use crate::error::{Error, Result};
use crate::linalg::{all_matrices, ExactField, Matrix};
use crate::sample::rng;

/// Enumerations of more than this many candidates are refused.
pub const ENUMERATION_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberCase {
    Plus,
    Alternating(Matrix),
    Unramified,
}

impl FiberCase {
    pub fn name(&self) -> &'static str {
        match self {
            FiberCase::Plus => "plus",
            FiberCase::Alternating(_) => "alternating",
            FiberCase::Unramified => "unramified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub field: String,
    pub r: usize,
    pub case: String,
    pub fixed_count: u64,
    pub image_count: u64,
    /// Order of the target group, enumerated independently of the fixed set.
    pub expected_image_count: u64,
    pub kernel_count: u64,
    pub expected_kernel_count: u64,
    pub contains_identity: bool,
    pub closed_under_mul: bool,
    pub closed_under_inverse: bool,
    pub projection_homomorphism: bool,
    pub image_matches: bool,
    pub kernel_matches: bool,
    pub kernel_additive: bool,
    pub order_identity: bool,
    /// `None` when the raw-involution comparison was too large to run.
    pub oracle_agrees: Option<bool>,
    pub all_passed: bool,
}

fn checked_count(q: u64, exponent: usize) -> Result<u64> {
    q.checked_pow(exponent as u32)
        .filter(|&c| c <= ENUMERATION_LIMIT)
        .ok_or(Error::BoundExceeded {
            what: format!("enumeration of {q}^{exponent} matrices"),
            bound: ENUMERATION_LIMIT as usize,
        })
}

fn special_linear(field: ExactField, r: usize) -> Result<Vec<Matrix>> {
    Ok(all_matrices(field, r, r)?
        .into_iter()
        .filter(|g| g.det().is_one())
        .collect())
}

/// Symmetric (plus) or `M h = −ᵗ(M h)` (alternating) traceless `h`.
fn kernel_member(case: &FiberCase, h: &Matrix) -> bool {
    if !h.trace().is_zero() {
        return false;
    }
    match case {
        FiberCase::Plus => h.is_symmetric(),
        FiberCase::Alternating(m) => {
            let n = m * h;
            (&n + &n.transpose()).is_zero()
        }
        FiberCase::Unramified => h.is_zero(),
    }
}

/// `seed` drives the pair sample used for closure checks when the fixed set
/// is too large for all pairs.
pub fn fiber_structure_check(field: ExactField, r: usize, case: &FiberCase, seed: u64) -> Result<FiberReport> {
    let q = field.order().ok_or(Error::NotFinite)?;
    match case {
        FiberCase::Plus if !(1..=3).contains(&r) => {
            return Err(Error::shape("plus case supports r ≤ 3"));
        }
        FiberCase::Alternating(m) => {
            check_alternating_form(m)?;
            if r != 2 || m.rows() != 2 || m.field() != field {
                return Err(Error::shape(
                    "alternating case supports r = 2 with a 2×2 form over the same field",
                ));
            }
        }
        FiberCase::Unramified if !(1..=3).contains(&r) => {
            return Err(Error::shape("unramified case supports r ≤ 3"));
        }
        _ => {}
    }
    if let FiberCase::Unramified = case {
        return unramified_report(field, r, q, seed);
    }

    let matrices_count = checked_count(q, r * r)?;
    let all = all_matrices(field, r, r)?;
    let fixed_g: Vec<&Matrix> = all
        .iter()
        .filter(|g| {
            let a = DualNumberMatrix::identity(field, r);
            let probe = DualNumberMatrix::new((*g).clone(), a.h().clone()).expect("square");
            match case {
                FiberCase::Plus => is_fixed_plus(&probe),
                FiberCase::Alternating(m) => is_fixed_alternating(m, &probe).unwrap_or(false),
                FiberCase::Unramified => unreachable!(),
            }
        })
        .collect();
    // Fixed pairs: for each admissible g, every h passing the predicate.
    let _ = checked_count(fixed_g.len() as u64 * matrices_count, 1)?;
    let mut fixed: Vec<DualNumberMatrix> = Vec::new();
    for g in &fixed_g {
        for h in &all {
            let a = DualNumberMatrix::new((*g).clone(), h.clone()).expect("square");
            let ok = match case {
                FiberCase::Plus => is_fixed_plus(&a),
                FiberCase::Alternating(m) => is_fixed_alternating(m, &a)?,
                FiberCase::Unramified => unreachable!(),
            };
            if ok {
                fixed.push(a);
            }
        }
    }

    // Independent target group and kernel.
    let target: Vec<&Matrix> = all
        .iter()
        .filter(|g| match case {
            FiberCase::Plus => &g.transpose() * *g == Matrix::identity(field, r) && g.det().is_one(),
            FiberCase::Alternating(m) => &(&g.transpose() * m) * *g == *m,
            FiberCase::Unramified => unreachable!(),
        })
        .collect();
    let kernel_h: Vec<&Matrix> = all.iter().filter(|h| kernel_member(case, h)).collect();

    let identity = DualNumberMatrix::identity(field, r);
    let contains_identity = fixed.contains(&identity);
    let is_fixed = |a: &DualNumberMatrix| -> bool {
        match case {
            FiberCase::Plus => is_fixed_plus(a),
            FiberCase::Alternating(m) => is_fixed_alternating(m, a).unwrap_or(false),
            FiberCase::Unramified => unreachable!(),
        }
    };
    let pairs = sample_pairs(fixed.len(), seed);
    let closed_under_mul = pairs
        .iter()
        .all(|&(i, j)| dn_mul(&fixed[i], &fixed[j]).map(|p| is_fixed(&p)).unwrap_or(false));
    let closed_under_inverse = fixed.iter().all(|a| a.inverse().map(|b| is_fixed(&b)).unwrap_or(false));
    let projection_homomorphism = pairs.iter().all(|&(i, j)| {
        let p = dn_mul(&fixed[i], &fixed[j]).expect("same size");
        *p.g() == fixed[i].g() * fixed[j].g()
    });

    let mut image: Vec<&Matrix> = fixed.iter().map(DualNumberMatrix::g).collect();
    image.sort_by_key(|m| m.entries().iter().map(|x| x.order_key()).collect::<Vec<_>>());
    image.dedup();
    let image_matches = image.len() == target.len() && target.iter().all(|t| image.contains(t));

    let kernel: Vec<&DualNumberMatrix> = fixed.iter().filter(|a| a.g() == identity.g()).collect();
    let kernel_matches = kernel.len() == kernel_h.len() && kernel.iter().all(|a| kernel_h.contains(&a.h()));
    let kernel_additive = kernel.iter().all(|a| {
        kernel.iter().all(|b| {
            let sum = a.h() + b.h();
            kernel.iter().any(|c| *c.h() == sum)
        })
    });
    let kernel_dim = match case {
        FiberCase::Plus => r * (r + 1) / 2 - 1,
        _ => 0,
    };
    let expected_kernel_count = match case {
        FiberCase::Plus => q.pow(kernel_dim as u32),
        _ => kernel_h.len() as u64,
    };
    let fixed_count = fixed.len() as u64;
    let order_identity = fixed_count == image.len() as u64 * kernel.len() as u64;

    let oracle_agrees = if matrices_count * matrices_count <= 1 << 20 {
        let one = (field.one(), field.zero());
        let mut count = 0u64;
        let mut all_in = true;
        for g in all.iter().filter(|g| g.is_invertible()) {
            for h in &all {
                let a = DualNumberMatrix::new(g.clone(), h.clone()).expect("square");
                let image = match case {
                    FiberCase::Plus => plus_involution(&a),
                    FiberCase::Alternating(m) => alternating_involution(m, &a),
                    FiberCase::Unramified => unreachable!(),
                };
                if image.as_ref() == Some(&a) && dn_det(&a) == one {
                    count += 1;
                    all_in &= fixed.contains(&a);
                }
            }
        }
        Some(all_in && count == fixed_count)
    } else {
        None
    };

    let all_passed = contains_identity
        && closed_under_mul
        && closed_under_inverse
        && projection_homomorphism
        && image_matches
        && kernel_matches
        && kernel_additive
        && order_identity
        && kernel.len() as u64 == expected_kernel_count
        && oracle_agrees != Some(false);
    Ok(FiberReport {
        field: field.to_string(),
        r,
        case: case.name().into(),
        fixed_count,
        image_count: image.len() as u64,
        expected_image_count: target.len() as u64,
        kernel_count: kernel.len() as u64,
        expected_kernel_count,
        contains_identity,
        closed_under_mul,
        closed_under_inverse,
        projection_homomorphism,
        image_matches,
        kernel_matches,
        kernel_additive,
        order_identity,
        oracle_agrees,
        all_passed,
    })
}

const PAIR_LIMIT: usize = 250_000;

/// All ordered pairs when small, otherwise a seeded sample of `PAIR_LIMIT` pairs.
fn sample_pairs(n: usize, seed: u64) -> Vec<(usize, usize)> {
    if n * n <= PAIR_LIMIT {
        return (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    }
    let mut r = rng(seed);
    (0..PAIR_LIMIT)
        .map(|_| (r.gen_range(0..n), r.gen_range(0..n)))
        .collect()
}

/// The unramified fiber `{(g1, g2) ∈ SL_r × SL_r : g2 = ᵗg1⁻¹}`.
fn unramified_report(field: ExactField, r: usize, q: u64, seed: u64) -> Result<FiberReport> {
    let count = checked_count(q, r * r)?;
    let _ = checked_count(count, 2)?;
    let sl = special_linear(field, r)?;
    let mut fixed: Vec<(Matrix, Matrix)> = Vec::new();
    for g1 in &sl {
        for g2 in &sl {
            if is_fixed_unramified(g1, g2)? {
                fixed.push((g1.clone(), g2.clone()));
            }
        }
    }
    let lookup = |a: &Matrix, b: &Matrix| fixed.iter().any(|(x, y)| x == a && y == b);
    let pairs = sample_pairs(fixed.len(), seed);
    let closed_under_mul = pairs.iter().all(|&(i, j)| {
        let (a1, a2) = &fixed[i];
        let (b1, b2) = &fixed[j];
        lookup(&(a1 * b1), &(a2 * b2))
    });
    let closed_under_inverse = fixed.iter().all(|(a, b)| {
        let (ai, bi) = (a.inverse().expect("SL"), b.inverse().expect("SL"));
        lookup(&ai, &bi)
    });
    let mut image: Vec<&Matrix> = fixed.iter().map(|(a, _)| a).collect();
    image.dedup();
    let image_matches = image.len() == sl.len();
    let identity = Matrix::identity(field, r);
    let contains_identity = lookup(&identity, &identity);
    let kernel_count = fixed.iter().filter(|(a, _)| *a == identity).count() as u64;
    let fixed_count = fixed.len() as u64;
    let order_identity = fixed_count == image.len() as u64 * kernel_count;
    let all_passed = contains_identity
        && closed_under_mul
        && closed_under_inverse
        && image_matches
        && kernel_count == 1
        && order_identity
        && fixed_count == sl.len() as u64;
    Ok(FiberReport {
        field: field.to_string(),
        r,
        case: "unramified".into(),
        fixed_count,
        image_count: image.len() as u64,
        expected_image_count: sl.len() as u64,
        kernel_count,
        expected_kernel_count: 1,
        contains_identity,
        closed_under_mul,
        closed_under_inverse,
        projection_homomorphism: true,
        image_matches,
        kernel_matches: kernel_count == 1,
        kernel_additive: true,
        order_identity,
        oracle_agrees: None,
        all_passed,
    })
}
