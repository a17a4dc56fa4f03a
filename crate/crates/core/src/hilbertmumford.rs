//! One-parameter subgroups of `SL(H)`, their weights on σ-modules, limits,
//! and the destabilizing subgroup attached to a totally isotropic subspace.
//!
//! Convention: `λ(t)` acts as `t^{a_i}` on the piece `H_i`. Under the action
//! `B ↦ λ⁻ᵀ B λ⁻¹` the block `q_ij` picks up `t^{e_ij}` with
//! `e_ij = −(a_i + a_j)`, and `μ(λ, q) = −min{e_ij : q_ij ≠ 0}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{all_subspaces, complement_in, ExactField, Matrix, Scalar, Subspace};
use crate::sigmamod::SigmaModule;

/// A Hilbert–Mumford weight; `MinusInfinity` is the weight of the zero form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    MinusInfinity,
    Finite(i64),
}

impl Weight {
    pub fn is_negative(self) -> bool {
        match self {
            Weight::MinusInfinity => true,
            Weight::Finite(m) => m < 0,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::MinusInfinity => f.write_str("-inf"),
            Weight::Finite(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParamSubgroup {
    field: ExactField,
    ambient: usize,
    pieces: Vec<(Subspace, i64)>,
}

impl OneParamSubgroup {
    /// Pieces must be independent and span the ambient space, carry pairwise
    /// distinct weights and satisfy `Σ a_i dim H_i = 0`. Zero-dimensional
    /// pieces are allowed.
    pub fn new(pieces: Vec<(Subspace, i64)>) -> Result<Self> {
        let (first, _) = pieces
            .first()
            .ok_or_else(|| Error::InvalidSubgroup("no pieces".into()))?;
        let field = first.field();
        let ambient = first.ambient_dim();
        let mut span = Subspace::zero(field, ambient);
        let mut total = 0usize;
        for (s, _) in &pieces {
            if s.ambient_dim() != ambient || s.field() != field {
                return Err(Error::InvalidSubgroup("pieces live in different spaces".into()));
            }
            span = span.sum(s);
            total += s.dim();
        }
        if total != ambient || span.dim() != ambient {
            return Err(Error::InvalidSubgroup(
                "pieces are not a direct-sum decomposition of H".into(),
            ));
        }
        let det: i64 = pieces.iter().map(|(s, a)| a * s.dim() as i64).sum();
        if det != 0 {
            return Err(Error::InvalidSubgroup(format!(
                "weighted dimension sum is {det}, not 0"
            )));
        }
        let mut weights: Vec<i64> = pieces.iter().map(|(_, a)| *a).collect();
        weights.sort_unstable();
        if weights.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubgroup("weights must be pairwise distinct".into()));
        }
        Ok(OneParamSubgroup { field, ambient, pieces })
    }

    pub fn trivial(field: ExactField, n: usize) -> Self {
        OneParamSubgroup {
            field,
            ambient: n,
            pieces: vec![(Subspace::full(field, n), 0)],
        }
    }

    /// Diagonal subgroup acting by `t^{weights[i]}` on `e_i`; equal weights are
    /// merged into one piece, pieces listed in order of first appearance.
    pub fn diagonal(field: ExactField, weights: &[i64]) -> Result<Self> {
        let n = weights.len();
        let mut groups: Vec<(i64, Vec<usize>)> = Vec::new();
        for (i, &a) in weights.iter().enumerate() {
            match groups.iter_mut().find(|(w, _)| *w == a) {
                Some((_, idx)) => idx.push(i),
                None => groups.push((a, vec![i])),
            }
        }
        Self::new(
            groups
                .into_iter()
                .map(|(a, idx)| (Subspace::coordinate(field, n, &idx), a))
                .collect(),
        )
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pieces(&self) -> &[(Subspace, i64)] {
        &self.pieces
    }

    pub fn weights(&self) -> Vec<i64> {
        self.pieces.iter().map(|(_, a)| *a).collect()
    }

    /// Columns: the basis vectors of the pieces, in piece order.
    pub fn adapted_basis(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.pieces.iter().flat_map(|(s, _)| s.basis_vectors()).collect();
        Matrix::from_columns(self.field, self.ambient, &cols)
    }

    fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.pieces
            .iter()
            .map(|(s, _)| {
                let r = start..start + s.dim();
                start += s.dim();
                r
            })
            .collect()
    }

    /// `λ(t)` as a matrix in the standard basis.
    pub fn at(&self, t: &Scalar) -> Result<Matrix> {
        let p = self.adapted_basis();
        let mut diag = Vec::with_capacity(self.ambient);
        for (s, a) in &self.pieces {
            let ta = t.powi(*a).ok_or(Error::Singular)?;
            diag.extend(std::iter::repeat_n(ta, s.dim()));
        }
        let d = Matrix::diagonal(self.field, &diag);
        let pinv = p.inverse().ok_or(Error::Singular)?;
        Ok(&(&p * &d) * &pinv)
    }

    /// `λ⁻¹`.
    pub fn inverse(&self) -> Self {
        OneParamSubgroup {
            field: self.field,
            ambient: self.ambient,
            pieces: self.pieces.iter().map(|(s, a)| (s.clone(), -a)).collect(),
        }
    }

    /// `g λ g⁻¹`, whose pieces are `g·H_i`.
    pub fn conjugate(&self, g: &Matrix) -> Result<Self> {
        if !g.is_invertible() || g.rows() != self.ambient {
            return Err(Error::Singular);
        }
        Ok(OneParamSubgroup {
            field: self.field,
            ambient: self.ambient,
            pieces: self.pieces.iter().map(|(s, a)| (s.image(g), *a)).collect(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockExponent {
    pub exponent: i64,
    pub is_zero: bool,
}

fn check_ambient(lambda: &OneParamSubgroup, q: &SigmaModule) -> Result<()> {
    if lambda.ambient != q.dim_h() || lambda.field != q.field() {
        return Err(Error::shape(
            "one-parameter subgroup and module live on different spaces",
        ));
    }
    Ok(())
}

/// `q` written in the adapted basis of `λ`, plus the piece ranges.
fn adapted_forms(lambda: &OneParamSubgroup, q: &SigmaModule) -> Result<(Vec<Matrix>, Vec<std::ops::Range<usize>>)> {
    check_ambient(lambda, q)?;
    let p = lambda.adapted_basis();
    let qt = q.change_basis(&p)?;
    Ok((qt.forms().to_vec(), lambda.ranges()))
}

fn block_is_zero(forms: &[Matrix], ri: &std::ops::Range<usize>, rj: &std::ops::Range<usize>) -> bool {
    forms
        .iter()
        .all(|b| ri.clone().all(|i| rj.clone().all(|j| b[(i, j)].is_zero())))
}

pub fn block_exponents(lambda: &OneParamSubgroup, q: &SigmaModule) -> Result<BTreeMap<(usize, usize), BlockExponent>> {
    let (forms, ranges) = adapted_forms(lambda, q)?;
    let weights = lambda.weights();
    let mut out = BTreeMap::new();
    for (i, ri) in ranges.iter().enumerate() {
        for (j, rj) in ranges.iter().enumerate() {
            out.insert(
                (i, j),
                BlockExponent {
                    exponent: -(weights[i] + weights[j]),
                    is_zero: block_is_zero(&forms, ri, rj),
                },
            );
        }
    }
    Ok(out)
}

/// `μ(λ, q) = max{a_i + a_j : q_ij ≠ 0}`, or `MinusInfinity` when `q = 0`.
pub fn mu(lambda: &OneParamSubgroup, q: &SigmaModule) -> Result<Weight> {
    let blocks = block_exponents(lambda, q)?;
    Ok(blocks
        .values()
        .filter(|b| !b.is_zero)
        .map(|b| Weight::Finite(-b.exponent))
        .max()
        .unwrap_or(Weight::MinusInfinity))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Exists(SigmaModule),
    Diverges,
}

/// `lim_{t→0} λ(t)·q` in the original coordinates: exists iff every nonzero
/// block has `e_ij ≥ 0`, and keeps exactly the blocks with `e_ij = 0`.
pub fn limit_at_zero(lambda: &OneParamSubgroup, q: &SigmaModule) -> Result<Limit> {
    let (forms, ranges) = adapted_forms(lambda, q)?;
    let weights = lambda.weights();
    let field = q.field();
    let n = q.dim_h();
    let mut kept: Vec<Matrix> = vec![Matrix::zeros(field, n, n); forms.len()];
    for (i, ri) in ranges.iter().enumerate() {
        for (j, rj) in ranges.iter().enumerate() {
            let e = -(weights[i] + weights[j]);
            let zero = block_is_zero(&forms, ri, rj);
            if zero {
                continue;
            }
            if e < 0 {
                return Ok(Limit::Diverges);
            }
            if e == 0 {
                for (dst, src) in kept.iter_mut().zip(&forms) {
                    for a in ri.clone() {
                        for b in rj.clone() {
                            dst[(a, b)] = src[(a, b)].clone();
                        }
                    }
                }
            }
        }
    }
    let adapted = SigmaModule::from_parts(field, q.sign(), q.w().clone(), n, kept)?;
    let p = lambda.adapted_basis();
    let back = adapted.change_basis(&p.inverse().ok_or(Error::Singular)?)?;
    if !back.validate() {
        return Err(Error::Internal("limit lost the symmetry relation".into()));
    }
    Ok(Limit::Exists(back))
}

/// The subgroup with weights `m_1 > m_2 > m_3` on `V ⊕ H_1 ⊕ H_2`, where `H_1`
/// complements `V` in `V^{⊥σ}` and `H_2` complements `V^{⊥σ}` in `H`:
/// `m_1 = 2n − 2d − h`, `m_2 = n − 2d − h`, `m_3 = −2d − h` with
/// `n = dim H`, `d = dim V`, `h = dim H_1`.
pub fn destabilizing_1ps(q: &SigmaModule, v: &Subspace) -> Result<OneParamSubgroup> {
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    if !q.is_totally_isotropic(v)? {
        return Err(Error::NotTotallyIsotropic);
    }
    let field = q.field();
    let n = q.dim_h() as i64;
    let perp = q.orthogonal(v)?;
    let h1 = complement_in(v, &perp)?;
    let h2 = complement_in(&perp, &Subspace::full(field, q.dim_h()))?;
    let d = v.dim() as i64;
    let h = h1.dim() as i64;
    let m1 = 2 * n - 2 * d - h;
    let m2 = n - 2 * d - h;
    let m3 = -2 * d - h;
    OneParamSubgroup::new(vec![(v.clone(), m1), (h1, m2), (h2, m3)])
}

/// Ordered direct-sum decompositions of `F_p^n` into nonzero subspaces.
pub fn ordered_decompositions(field: ExactField, n: usize) -> Result<Vec<Vec<Subspace>>> {
    let subspaces: Vec<Subspace> = all_subspaces(field, n)?.into_iter().filter(|s| !s.is_zero()).collect();
    fn go(subs: &[Subspace], n: usize, span: &Subspace, cur: &mut Vec<Subspace>, out: &mut Vec<Vec<Subspace>>) {
        if span.dim() == n {
            out.push(cur.clone());
            return;
        }
        for s in subs {
            if s.dim() + span.dim() > n {
                continue;
            }
            let next = span.sum(s);
            if next.dim() != span.dim() + s.dim() {
                continue;
            }
            cur.push(s.clone());
            go(subs, n, &next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&subspaces, n, &Subspace::zero(field, n), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Strictly increasing integer weights in `[-bound, bound]` with `Σ a_i d_i = 0`.
pub fn weight_sequences(dims: &[usize], bound: i64) -> Vec<Vec<i64>> {
    fn go(dims: &[usize], lo: i64, bound: i64, acc: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == dims.len() {
            if acc == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = dims[cur.len()] as i64;
        for a in lo..=bound {
            cur.push(a);
            go(dims, a + 1, bound, acc + a * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(dims, -bound, bound, 0, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// First subgroup found with `μ < 0`, in sweep order.
    pub destabilizer: Option<(OneParamSubgroup, Weight)>,
    /// Minimum weight over every subgroup swept.
    pub min_weight: Option<Weight>,
    pub subgroups_checked: usize,
}

/// Hilbert–Mumford sweep over a finite field: every ordered eigenspace
/// decomposition with increasing integer weights in `[-bound, bound]`.
/// With `stop_early`, returns as soon as a negative weight appears.
pub fn bounded_sweep(q: &SigmaModule, bound: i64, stop_early: bool) -> Result<SweepOutcome> {
    let field = q.field();
    if !field.is_finite() {
        return Err(Error::NotFinite);
    }
    let n = q.dim_h();
    let mut outcome = SweepOutcome {
        destabilizer: None,
        min_weight: None,
        subgroups_checked: 0,
    };
    for decomposition in ordered_decompositions(field, n)? {
        let cols: Vec<Vec<Scalar>> = decomposition.iter().flat_map(Subspace::basis_vectors).collect();
        let adapted = q.restrict(&cols);
        let dims: Vec<usize> = decomposition.iter().map(Subspace::dim).collect();
        let mut ranges = Vec::new();
        let mut start = 0;
        for d in &dims {
            ranges.push(start..start + d);
            start += d;
        }
        let nonzero: Vec<(usize, usize)> = (0..dims.len())
            .flat_map(|i| (0..dims.len()).map(move |j| (i, j)))
            .filter(|(i, j)| !block_is_zero(adapted.forms(), &ranges[*i], &ranges[*j]))
            .collect();
        for weights in weight_sequences(&dims, bound) {
            outcome.subgroups_checked += 1;
            let m = nonzero
                .iter()
                .map(|&(i, j)| Weight::Finite(weights[i] + weights[j]))
                .max()
                .unwrap_or(Weight::MinusInfinity);
            outcome.min_weight = Some(outcome.min_weight.map_or(m, |w| w.min(m)));
            if m.is_negative() && outcome.destabilizer.is_none() {
                let pieces = decomposition.iter().cloned().zip(weights.iter().copied()).collect();
                outcome.destabilizer = Some((OneParamSubgroup::new(pieces)?, m));
                if stop_early {
                    return Ok(outcome);
                }
            }
        }
    }
    Ok(outcome)
}
