//! The isotropic filtration `0 ⊂ H_1 ⊂ … ⊂ H_k`, the graded module and
//! S-equivalence.
//!
//! Each step works inside the current reduced module `M` (coordinates along a
//! frame of `H`): `V` is the first minimal equality witness, `C_1` complements
//! `V` in `V^{⊥σ}` and carries the next `M`, and `C_3` complements `V^{⊥σ}` in
//! `M`. The hyperbolic piece has `α = C_3ᵀ B V`.
//!
//! Assembled layout: `V_1, …, V_k, core, V_k^∨, …, V_1^∨`, with `α_i` in the
//! `(V_i^∨, V_i)` block and its twisted transpose in `(V_i, V_i^∨)`.

use super::{analyze, check_valid, excess, SearchConfig, Status};
use crate::error::{Error, Result};
use crate::hilbertmumford::OneParamSubgroup;
use crate::linalg::{complement_in, ExactField, Matrix, Scalar, Subspace};
use crate::registry::IsomorphismStrategy;
use crate::sigmamod::{IsoOutcome, LinearPiece, SigmaModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// `H_1 ⊂ … ⊂ H_k` as subspaces of `H`.
    pub chain: Vec<Subspace>,
}

impl Filtration {
    pub fn length(&self) -> usize {
        self.chain.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub filtration: Filtration,
    pub pieces: Vec<LinearPiece>,
    /// The stable part `H_k^{⊥σ}/H_k`.
    pub core: SigmaModule,
    pub assembled: SigmaModule,
    /// Columns: `V_1, …, V_k`, core, `C_3` of level `k`, …, `C_3` of level 1.
    pub adapted_basis: Matrix,
    /// Weight `k − i + 1` on `V_i`, its negative on the dual complement, 0 on the core.
    pub lambda: OneParamSubgroup,
}

struct Level {
    v: Vec<Vec<Scalar>>,
    dual: Vec<Vec<Scalar>>,
    alpha: Vec<Matrix>,
}

fn apply_frame(field: ExactField, frame: &[Vec<Scalar>], coords: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); n];
    for (c, f) in coords.iter().zip(frame) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(f) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Runs the filtration; returns the levels and the final frame.
fn levels(q: &SigmaModule, config: &SearchConfig) -> Result<(Vec<Level>, Vec<Vec<Scalar>>)> {
    check_valid(q)?;
    let n = q.dim_h();
    let field = q.field();
    let mut frame: Vec<Vec<Scalar>> = Subspace::full(field, n).basis_vectors();
    let mut out = Vec::new();
    loop {
        let m = q.restrict(&frame);
        let analysis = analyze(&m, config)?;
        match analysis.status {
            Status::Stable => break,
            Status::Unstable => return Err(Error::Unstable),
            Status::NoDestabilizerFound => {
                return Err(Error::VerdictUnavailable(format!(
                    "no certified verdict for a reduced module of dimension {}",
                    m.dim_h()
                )))
            }
            Status::StrictlySemistable => {}
        }
        if !analysis.witness_minimal {
            return Err(Error::VerdictUnavailable(
                "minimality of the equality witness is not certified".into(),
            ));
        }
        let v = analysis.witness.expect("strictly semistable analysis has a witness");
        if excess(&m, &v)? != 0 {
            return Err(Error::Internal("filtration witness does not meet equality".into()));
        }
        let perp = m.orthogonal(&v)?;
        let c1 = complement_in(&v, &perp)?;
        let c3 = complement_in(&perp, &Subspace::full(field, m.dim_h()))?;
        let vb = v.basis_vectors();
        let c3b = c3.basis_vectors();
        let vm = Matrix::from_columns(field, m.dim_h(), &vb);
        let c3t = Matrix::from_columns(field, m.dim_h(), &c3b).transpose();
        let alpha = m.forms().iter().map(|b| &(&c3t * b) * &vm).collect();
        out.push(Level {
            v: vb.iter().map(|x| apply_frame(field, &frame, x, n)).collect(),
            dual: c3b.iter().map(|x| apply_frame(field, &frame, x, n)).collect(),
            alpha,
        });
        frame = c1
            .basis_vectors()
            .iter()
            .map(|x| apply_frame(field, &frame, x, n))
            .collect();
    }
    Ok((out, frame))
}

/// The filtration with minimal equality witnesses chosen first in search order.
pub fn iso_filtration(q: &SigmaModule, config: &SearchConfig) -> Result<Filtration> {
    let (levels, _) = levels(q, config)?;
    Ok(filtration_of(q, &levels))
}

fn filtration_of(q: &SigmaModule, levels: &[Level]) -> Filtration {
    let field = q.field();
    let n = q.dim_h();
    let mut acc: Vec<Vec<Scalar>> = Vec::new();
    let chain = levels
        .iter()
        .map(|l| {
            acc.extend(l.v.iter().cloned());
            Subspace::span(field, n, &acc).expect("length")
        })
        .collect();
    Filtration { chain }
}

pub fn graded(q: &SigmaModule, config: &SearchConfig) -> Result<GradedModule> {
    let (levels, core_frame) = levels(q, config)?;
    let field = q.field();
    let n = q.dim_h();
    let filtration = filtration_of(q, &levels);
    let core = q.restrict(&core_frame);

    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for l in &levels {
        columns.extend(l.v.iter().cloned());
    }
    columns.extend(core_frame.iter().cloned());
    for l in levels.iter().rev() {
        columns.extend(l.dual.iter().cloned());
    }
    let adapted_basis = Matrix::from_columns(field, n, &columns);

    let dims: Vec<usize> = levels.iter().map(|l| l.v.len()).collect();
    let offset_v: Vec<usize> = dims
        .iter()
        .scan(0, |s, d| {
            let o = *s;
            *s += d;
            Some(o)
        })
        .collect();
    let core_start: usize = dims.iter().sum();
    let core_dim = core.dim_h();
    // The dual of level i sits after the duals of levels i+1..k.
    let offset_dual: Vec<usize> = (0..levels.len())
        .map(|i| core_start + core_dim + dims[i + 1..].iter().sum::<usize>())
        .collect();

    let pieces: Vec<LinearPiece> = levels
        .iter()
        .map(|l| LinearPiece::new(l.alpha.clone()))
        .collect::<Result<_>>()?;
    let mut forms: Vec<Matrix> = vec![Matrix::zeros(field, n, n); q.w().dim()];
    for (k, f) in forms.iter_mut().enumerate() {
        f.set_block(core_start, core_start, &core.forms()[k]);
    }
    for (i, piece) in pieces.iter().enumerate() {
        let top = SigmaModule::twisted_transpose(q.sign(), q.w(), piece.alpha());
        for (k, f) in forms.iter_mut().enumerate() {
            f.set_block(offset_dual[i], offset_v[i], &piece.alpha()[k]);
            f.set_block(offset_v[i], offset_dual[i], &top[k]);
        }
    }
    let assembled = SigmaModule::from_parts(field, q.sign(), q.w().clone(), n, forms)?;
    if !assembled.validate() {
        return Err(Error::Internal("assembled graded module fails validation".into()));
    }

    let k = levels.len() as i64;
    let mut lambda_pieces: Vec<(Subspace, i64)> = Vec::new();
    for (i, l) in levels.iter().enumerate() {
        lambda_pieces.push((Subspace::span(field, n, &l.v)?, k - i as i64));
    }
    lambda_pieces.push((Subspace::span(field, n, &core_frame)?, 0));
    for (i, l) in levels.iter().enumerate().rev() {
        lambda_pieces.push((Subspace::span(field, n, &l.dual)?, -(k - i as i64)));
    }
    let lambda = if levels.is_empty() {
        OneParamSubgroup::trivial(field, n)
    } else {
        OneParamSubgroup::new(lambda_pieces)?
    };

    Ok(GradedModule {
        filtration,
        pieces,
        core,
        assembled,
        adapted_basis,
        lambda,
    })
}

/// Isomorphism of the assembled graded modules.
pub fn s_equivalent(
    a: &SigmaModule,
    b: &SigmaModule,
    strategy: &dyn IsomorphismStrategy,
    config: &SearchConfig,
) -> Result<IsoOutcome> {
    let ga = graded(a, config)?;
    let gb = graded(b, config)?;
    strategy.decide(&ga.assembled, &gb.assembled, config)
}
