//! Witness search and certification for modules over ℚ.
//!
//! Rational totally isotropic candidates come from the radical, coordinate
//! subspaces, small-integer isotropic lines and their isotropic sums, radicals
//! of orthogonals, and lifts of isotropic subspaces found modulo primes.
//!
//! Reducing a saturated lattice basis of a rational `V` modulo `p` can only
//! lower the rank of the relations defining `V^{⊥σ}`, so the excess
//! `dim V + dim V^{⊥σ} − dim H` never decreases. Hence semistability (or
//! stability) modulo a single prime certifies it over ℚ.

use std::collections::HashSet;

use num_traits::Signed;

use super::{excess, excess_table, Analysis, Provenance, SearchConfig, Status};
use crate::error::{Error, Result};
use crate::linalg::enumerate::combinations;
use crate::linalg::{ExactField, Matrix, Scalar, Subspace};
use crate::sigmamod::SigmaModule;

const MAX_CANDIDATES: usize = 4096;
const MAX_LINE_VECTORS: usize = 100_000;

fn integer_vectors(n: usize, height: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-height..=height).map(move |c| {
                    let mut v = p.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

fn lift(v: &Subspace) -> Option<Subspace> {
    let q = ExactField::Rational;
    let vecs: Vec<Vec<Scalar>> = v
        .basis_vectors()
        .iter()
        .map(|row| row.iter().map(Scalar::lift_symmetric).collect())
        .collect();
    let lifted = Subspace::span(q, v.ambient_dim(), &vecs).ok()?;
    (lifted.dim() == v.dim()).then_some(lifted)
}

/// Isotropic lines `span{v}` for integer `v` with entries in `[-h, h]`,
/// lowering `h` until the box is small enough.
fn isotropic_lines(q: &SigmaModule, height: i64) -> Vec<Subspace> {
    let n = q.dim_h();
    let field = q.field();
    let mut h = height.max(1);
    while h > 0
        && (2 * h + 1)
            .checked_pow(n as u32)
            .is_none_or(|c| c as usize > MAX_LINE_VECTORS)
    {
        h -= 1;
    }
    if h == 0 {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in integer_vectors(n, h) {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let x: Vec<Scalar> = v.iter().map(|&c| field.from_i64(c)).collect();
        if q.forms().iter().all(|b| b.bilinear(&x, &x).is_zero()) {
            let line = Subspace::span(field, n, &[x]).expect("length");
            if seen.insert(line.clone()) {
                out.push(line);
            }
        }
    }
    out
}

/// Rational nonzero totally isotropic subspaces found by the heuristics, in
/// search order.
pub fn rational_candidates(q: &SigmaModule, config: &SearchConfig) -> Result<Vec<Subspace>> {
    let field = q.field();
    let n = q.dim_h();
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut queue: Vec<Subspace> = Vec::new();
    let push = |v: Subspace, seen: &mut HashSet<Subspace>, queue: &mut Vec<Subspace>| -> Result<()> {
        if !v.is_zero() && seen.len() < MAX_CANDIDATES && !seen.contains(&v) && q.is_totally_isotropic(&v)? {
            seen.insert(v.clone());
            queue.push(v);
        }
        Ok(())
    };

    push(q.radical(), &mut seen, &mut queue)?;
    if n <= 10 {
        for k in 1..=n {
            for idx in combinations(n, k) {
                push(Subspace::coordinate(field, n, &idx), &mut seen, &mut queue)?;
            }
        }
    }
    let lines = isotropic_lines(q, config.height);
    for l in &lines {
        push(l.clone(), &mut seen, &mut queue)?;
    }
    if n <= config.enum_bound {
        for &p in &config.primes {
            let Some(reduced) = q.reduce_mod(p) else { continue };
            for v in super::enumerate_totally_isotropic(&reduced, config.enum_bound)? {
                if let Some(l) = lift(&v) {
                    push(l, &mut seen, &mut queue)?;
                }
            }
        }
    }

    // Grow by isotropic lines inside the orthogonal, and add radicals of orthogonals.
    let mut i = 0;
    while i < queue.len() && seen.len() < MAX_CANDIDATES {
        let v = queue[i].clone();
        let perp = q.orthogonal(&v)?;
        let perp_perp = q.orthogonal(&perp)?;
        push(perp.intersection(&perp_perp), &mut seen, &mut queue)?;
        for l in &lines {
            if l.is_subspace_of(&perp) && !l.is_subspace_of(&v) {
                push(v.sum(l), &mut seen, &mut queue)?;
            }
        }
        i += 1;
    }

    queue.sort_by(Subspace::search_cmp);
    Ok(queue)
}

fn combos(w: usize) -> Vec<Vec<i64>> {
    integer_vectors(w, 1)
        .into_iter()
        .filter(|c| c.iter().any(|&x| x != 0))
        .collect()
}

fn combination(q: &SigmaModule, c: &[i64]) -> Matrix {
    let field = q.field();
    let n = q.dim_h();
    q.forms()
        .iter()
        .zip(c)
        .fold(Matrix::zeros(field, n, n), |acc, (b, &k)| {
            &acc + &b.scale(&field.from_i64(k))
        })
}

/// Sylvester's criterion on the symmetric matrix `s`.
fn is_definite(s: &Matrix) -> bool {
    let n = s.rows();
    if n == 0 {
        return false;
    }
    let minors: Vec<Scalar> = (1..=n)
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            s.select(&idx, &idx).det()
        })
        .collect();
    let signs: Vec<i32> = minors
        .iter()
        .map(|d| {
            d.as_rational().map_or(0, |r| {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            })
        })
        .collect();
    let positive = signs.iter().all(|&x| x == 1);
    let negative = signs
        .iter()
        .enumerate()
        .all(|(i, &x)| x == if i % 2 == 0 { -1 } else { 1 });
    positive || negative
}

/// Some `Σ c_k B_k` has a definite symmetric part, so no vector is isotropic.
fn definite_combination(q: &SigmaModule) -> bool {
    q.dim_h() > 0
        && combos(q.w().dim()).iter().any(|c| {
            let m = combination(q, c);
            is_definite(&(&m + &m.transpose()))
        })
}

/// Some `Σ c_k B_k` is invertible, which bounds `dim V^{⊥σ} ≤ dim H − dim V`.
fn invertible_combination(q: &SigmaModule) -> bool {
    combos(q.w().dim()).iter().any(|c| combination(q, c).is_invertible())
}

pub(crate) fn analyze_rational(q: &SigmaModule, config: &SearchConfig) -> Result<Analysis> {
    let provenance = Provenance::Heuristic(config.primes.clone());
    let candidates = rational_candidates(q, config)?;
    let table: Vec<(Subspace, i64)> = candidates
        .into_iter()
        .map(|v| {
            let e = excess(q, &v)?;
            Ok((v, e))
        })
        .collect::<Result<_>>()?;
    if let Some((v, _)) = table.iter().find(|(_, e)| *e > 0) {
        return Ok(Analysis {
            status: Status::Unstable,
            witness: Some(v.clone()),
            witness_minimal: false,
            provenance,
        });
    }

    let mut reductions: Vec<Vec<(Subspace, i64)>> = Vec::new();
    if q.dim_h() <= config.enum_bound {
        for &p in &config.primes {
            if let Some(m) = q.reduce_mod(p) {
                reductions.push(excess_table(&m, config.enum_bound)?);
            }
        }
    }
    let stable = definite_combination(q) || reductions.iter().any(|t| t.iter().all(|(_, e)| *e < 0));
    let semistable = stable || invertible_combination(q) || reductions.iter().any(|t| t.iter().all(|(_, e)| *e <= 0));
    let first_equal = table.into_iter().find(|(_, e)| *e == 0).map(|(v, _)| v);

    if stable {
        if first_equal.is_some() {
            return Err(Error::Internal(
                "certified stable module has an equality witness".into(),
            ));
        }
        return Ok(Analysis {
            status: Status::Stable,
            witness: None,
            witness_minimal: true,
            provenance,
        });
    }
    match first_equal {
        Some(v) if semistable => {
            let d = v.dim();
            let minimal = d == 1 || reductions.iter().any(|t| t.iter().all(|(w, e)| w.dim() >= d || *e < 0));
            Ok(Analysis {
                status: Status::StrictlySemistable,
                witness: Some(v),
                witness_minimal: minimal,
                provenance,
            })
        }
        _ => Ok(Analysis {
            status: Status::NoDestabilizerFound,
            witness: None,
            witness_minimal: false,
            provenance,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigmamod::{InvolutionSpace, Sign};

    const Q: ExactField = ExactField::Rational;

    fn single(rows: &[&[i64]]) -> SigmaModule {
        SigmaModule::single(Sign::Plus, Matrix::from_i64(Q, rows)).unwrap()
    }

    #[test]
    fn candidates_are_totally_isotropic_and_sorted() {
        let q = single(&[&[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let c = rational_candidates(&q, &SearchConfig::default()).unwrap();
        assert_eq!(c[0], Subspace::coordinate(Q, 3, &[0]));
        for w in c.windows(2) {
            assert!(w[0].search_cmp(&w[1]).is_lt());
        }
        assert!(c.iter().all(|v| q.is_totally_isotropic(v).unwrap()));
    }

    #[test]
    fn sylvester() {
        assert!(is_definite(&Matrix::from_i64(Q, &[&[2, 1], &[1, 2]])));
        assert!(is_definite(&Matrix::from_i64(Q, &[&[-2, 0], &[0, -1]])));
        assert!(!is_definite(&Matrix::from_i64(Q, &[&[1, 0], &[0, -1]])));
        assert!(!is_definite(&Matrix::from_i64(Q, &[&[0, 1], &[1, 0]])));
    }

    #[test]
    fn anisotropic_mod_p_but_not_definite() {
        // x² − 3y² has no rational zero; modulo 5, 3 is not a square either.
        let q = single(&[&[1, 0], &[0, -3]]);
        let a = analyze_rational(&q, &SearchConfig::default()).unwrap();
        assert_eq!(a.status, Status::Stable);
    }

    #[test]
    fn zero_form_is_unstable() {
        let z = SigmaModule::zero(Q, Sign::Minus, InvolutionSpace::swap(Q), 2);
        let a = analyze_rational(&z, &SearchConfig::default()).unwrap();
        assert_eq!(a.status, Status::Unstable);
        assert_eq!(a.witness, Some(Subspace::coordinate(Q, 2, &[0])));
    }
}
