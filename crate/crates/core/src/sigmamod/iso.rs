//! Isomorphism of σ-modules: `f` with `B_k = fᵀ B'_k f` for every `k`.
//!
//! Two ingredients are shared by the registered strategies: cheap invariants
//! that can refute an isomorphism outright, and a column-by-column
//! backtracking search for a witness over a finite candidate set.

use num_traits::Signed;

use super::SigmaModule;
use crate::error::{Error, Result};
use crate::linalg::{all_vectors, ExactField, Matrix, Scalar, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Yes(Matrix),
    No,
    Unknown,
}

impl IsoOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsoOutcome::Yes(_) => "yes",
            IsoOutcome::No => "no",
            IsoOutcome::Unknown => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, IsoOutcome::Yes(_))
    }
}

pub fn check_compatible(a: &SigmaModule, b: &SigmaModule) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::Incompatible(format!("fields {} and {}", a.field(), b.field())));
    }
    if a.sign() != b.sign() {
        return Err(Error::Incompatible("signs differ".into()));
    }
    if a.w() != b.w() {
        return Err(Error::Incompatible("coefficient spaces W differ".into()));
    }
    Ok(())
}

/// True iff `f` is invertible and `B_k = fᵀ B'_k f` for all `k`.
pub fn verify_witness(a: &SigmaModule, b: &SigmaModule, f: &Matrix) -> bool {
    f.rows() == b.dim_h()
        && f.cols() == a.dim_h()
        && f.is_invertible()
        && a.forms().iter().zip(b.forms()).all(|(ba, bb)| {
            let ft = f.transpose();
            &(&ft * bb) * f == *ba
        })
}

fn is_square(x: &Scalar) -> bool {
    match x {
        Scalar::Modular { value, modulus } => {
            if *value == 0 || *modulus == 2 {
                return true;
            }
            x.pow((modulus - 1) / 2).is_one() && *value != 0
        }
        Scalar::Rational(r) => {
            if r.is_negative() {
                return false;
            }
            let n = r.numer();
            let d = r.denom();
            let sn = n.sqrt();
            let sd = d.sqrt();
            &(&sn * &sn) == n && &(&sd * &sd) == d
        }
    }
}

/// Returns a reason when an invariant separates the two modules: dimension,
/// the ranks of `Σ c_k B_k` for small integer `c`, and the determinant ratio of
/// those combinations, which must be one common square `det(f)²`.
pub fn distinguishing_invariant(a: &SigmaModule, b: &SigmaModule, bound: i64) -> Option<String> {
    if a.dim_h() != b.dim_h() {
        return Some(format!("dimensions {} and {}", a.dim_h(), b.dim_h()));
    }
    let field = a.field();
    let w = a.w().dim();
    let mut common_ratio: Option<Scalar> = None;
    for coeffs in integer_tuples(w, bound) {
        let combo = |q: &SigmaModule| {
            let n = q.dim_h();
            q.forms()
                .iter()
                .zip(&coeffs)
                .fold(Matrix::zeros(field, n, n), |acc, (m, &c)| {
                    &acc + &m.scale(&field.from_i64(c))
                })
        };
        let (ca, cb) = (combo(a), combo(b));
        let (ra, rb) = (ca.rank(), cb.rank());
        if ra != rb {
            return Some(format!("rank of combination {coeffs:?}: {ra} vs {rb}"));
        }
        if ra == a.dim_h() && ra > 0 {
            let ratio = &ca.det() * &cb.det().inv().expect("full rank");
            if !is_square(&ratio) {
                return Some(format!("determinant ratio of combination {coeffs:?} is not a square"));
            }
            match &common_ratio {
                None => common_ratio = Some(ratio),
                Some(r) if *r != ratio => {
                    return Some("determinant ratios are not constant across combinations".into())
                }
                Some(_) => {}
            }
        }
    }
    None
}

fn integer_tuples(len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |c| {
                    let mut v = p.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&c| c != 0));
    out
}

/// Backtracking witness search with columns drawn from a candidate set.
pub struct IsoSearch<'a> {
    a: &'a SigmaModule,
    b: &'a SigmaModule,
    /// Per candidate: (c, B'_k c, cᵀ B'_k) for every k.
    candidates: Vec<Candidate>,
    /// Node budget; `None` is unlimited.
    budget: Option<u64>,
    visited: u64,
}

struct Candidate {
    v: Vec<Scalar>,
    right: Vec<Vec<Scalar>>,
    left: Vec<Vec<Scalar>>,
    diag: Vec<Scalar>,
}

pub enum SearchEnd {
    Found(Matrix),
    Exhausted,
    BudgetSpent,
}

fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    let field = x.first().map_or(ExactField::Rational, Scalar::field);
    x.iter().zip(y).fold(field.zero(), |acc, (a, b)| &acc + &(a * b))
}

impl<'a> IsoSearch<'a> {
    pub fn new(a: &'a SigmaModule, b: &'a SigmaModule, vectors: Vec<Vec<Scalar>>) -> Self {
        let candidates = vectors
            .into_iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .map(|v| {
                let right: Vec<Vec<Scalar>> = b.forms().iter().map(|m| m.mul_vec(&v)).collect();
                let left: Vec<Vec<Scalar>> = b.forms().iter().map(|m| m.transpose().mul_vec(&v)).collect();
                let diag = right.iter().map(|r| dot(&v, r)).collect();
                Candidate { v, right, left, diag }
            })
            .collect();
        IsoSearch {
            a,
            b,
            candidates,
            budget: None,
            visited: 0,
        }
    }

    /// All nonzero vectors of `F_p^n`.
    pub fn exhaustive(a: &'a SigmaModule, b: &'a SigmaModule) -> Result<Self> {
        Ok(Self::new(a, b, all_vectors(b.field(), b.dim_h())?))
    }

    /// Integer vectors with entries in `[-height, height]`, simplest first.
    pub fn bounded(a: &'a SigmaModule, b: &'a SigmaModule, height: i64) -> Self {
        let field = b.field();
        let mut vecs: Vec<Vec<Scalar>> = integer_tuples(b.dim_h(), height)
            .into_iter()
            .map(|v| v.into_iter().map(|c| field.from_i64(c)).collect())
            .collect();
        vecs.sort_by_key(|v| v.iter().map(Scalar::order_key).collect::<Vec<_>>());
        vecs.dedup();
        Self::new(a, b, vecs)
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget = Some(nodes);
        self
    }

    pub fn run(&mut self) -> SearchEnd {
        let n = self.a.dim_h();
        if n != self.b.dim_h() {
            return SearchEnd::Exhausted;
        }
        let field = self.a.field();
        if n == 0 {
            return SearchEnd::Found(Matrix::zeros(field, 0, 0));
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        match self.extend(&mut chosen, &Subspace::zero(field, n)) {
            Some(true) => {
                let cols: Vec<Vec<Scalar>> = chosen.iter().map(|&i| self.candidates[i].v.clone()).collect();
                SearchEnd::Found(Matrix::from_columns(field, n, &cols))
            }
            Some(false) => SearchEnd::Exhausted,
            None => SearchEnd::BudgetSpent,
        }
    }

    /// `Some(true)` when a full witness was completed in `chosen`.
    fn extend(&mut self, chosen: &mut Vec<usize>, span: &Subspace) -> Option<bool> {
        let n = self.a.dim_h();
        let j = chosen.len();
        if j == n {
            return Some(true);
        }
        for idx in 0..self.candidates.len() {
            self.visited += 1;
            if let Some(b) = self.budget {
                if self.visited > b {
                    return None;
                }
            }
            if !self.consistent(chosen, idx) {
                continue;
            }
            let c = &self.candidates[idx].v;
            if span.contains_vector(c) {
                continue;
            }
            let next = span.sum(&Subspace::span(span.field(), n, std::slice::from_ref(c)).expect("length"));
            chosen.push(idx);
            match self.extend(chosen, &next) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            chosen.pop();
        }
        Some(false)
    }

    fn consistent(&self, chosen: &[usize], idx: usize) -> bool {
        let j = chosen.len();
        let c = &self.candidates[idx];
        for (k, target) in self.a.forms().iter().enumerate() {
            if c.diag[k] != target[(j, j)] {
                return false;
            }
            for (i, &prev) in chosen.iter().enumerate() {
                let p = &self.candidates[prev];
                // f_iᵀ B'_k c and cᵀ B'_k f_i.
                if dot(&p.v, &c.right[k]) != target[(i, j)] {
                    return false;
                }
                if dot(&p.v, &c.left[k]) != target[(j, i)] {
                    return false;
                }
            }
        }
        true
    }
}

/// Complete decision over `F_p`: invariants, then exhaustive backtracking.
pub fn iso_exhaustive(a: &SigmaModule, b: &SigmaModule, bound: usize) -> Result<IsoOutcome> {
    check_compatible(a, b)?;
    if !a.field().is_finite() {
        return Err(Error::NotFinite);
    }
    if let Some(f) = trivial_witness(a, b) {
        return Ok(IsoOutcome::Yes(f));
    }
    if distinguishing_invariant(a, b, 1).is_some() {
        return Ok(IsoOutcome::No);
    }
    if a.dim_h() > bound {
        return Err(Error::BoundExceeded {
            what: format!("isomorphism search in dimension {}", a.dim_h()),
            bound,
        });
    }
    match IsoSearch::exhaustive(a, b)?.run() {
        SearchEnd::Found(f) => Ok(IsoOutcome::Yes(f)),
        SearchEnd::Exhausted => Ok(IsoOutcome::No),
        SearchEnd::BudgetSpent => Ok(IsoOutcome::Unknown),
    }
}

/// Sound but incomplete: `No` only from invariants, `Yes` only with a
/// verified witness whose columns have small integer entries.
pub fn iso_bounded(a: &SigmaModule, b: &SigmaModule, height: i64, budget: u64) -> Result<IsoOutcome> {
    check_compatible(a, b)?;
    if let Some(f) = trivial_witness(a, b) {
        return Ok(IsoOutcome::Yes(f));
    }
    if distinguishing_invariant(a, b, 1).is_some() {
        return Ok(IsoOutcome::No);
    }
    match IsoSearch::bounded(a, b, height).with_budget(budget).run() {
        SearchEnd::Found(f) => Ok(IsoOutcome::Yes(f)),
        SearchEnd::Exhausted | SearchEnd::BudgetSpent => Ok(IsoOutcome::Unknown),
    }
}

fn trivial_witness(a: &SigmaModule, b: &SigmaModule) -> Option<Matrix> {
    (a == b).then(|| Matrix::identity(a.field(), a.dim_h()))
}
