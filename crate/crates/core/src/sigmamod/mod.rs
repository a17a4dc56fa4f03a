//! σ-quadratic and σ-alternating modules.
//!
//! A module is stored as the tuple of bilinear forms `B_1, …, B_w` with
//! `q(x)(y) = Σ_k (xᵀ B_k y)·w_k`. The involution `σ` on `W` is the matrix `S`
//! acting on coordinates, and the twisted symmetry reads
//! `B_l = sign · Σ_k S_lk · B_kᵀ` for every `l`.

pub mod iso;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{complement_in, kernel, ExactField, Matrix, Scalar, Subspace};

pub use iso::{iso_bounded, iso_exhaustive, verify_witness, IsoOutcome, IsoSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn scalar(self, field: ExactField) -> Scalar {
        match self {
            Sign::Plus => field.one(),
            Sign::Minus => field.from_i64(-1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            other => Err(Error::Malformed(format!(
                "sign must be \"+1\" or \"-1\", got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The coefficient space `W` with its involution, as a matrix `S` with `S² = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvolutionSpace {
    involution: Matrix,
}

impl InvolutionSpace {
    pub fn new(involution: Matrix) -> Result<Self> {
        if !involution.is_square() {
            return Err(Error::shape("involution matrix must be square"));
        }
        let id = Matrix::identity(involution.field(), involution.rows());
        if &involution * &involution != id {
            return Err(Error::InvolutionNotIdempotent);
        }
        Ok(InvolutionSpace { involution })
    }

    /// One-dimensional `W` with `σ = id`.
    pub fn trivial(field: ExactField) -> Self {
        InvolutionSpace {
            involution: Matrix::identity(field, 1),
        }
    }

    /// `W = k²` with `σ` swapping the two coordinates.
    pub fn swap(field: ExactField) -> Self {
        InvolutionSpace {
            involution: Matrix::from_i64(field, &[&[0, 1], &[1, 0]]),
        }
    }

    pub fn dim(&self) -> usize {
        self.involution.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.involution
    }

    pub fn field(&self) -> ExactField {
        self.involution.field()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsotropyClass {
    NotIsotropic,
    SigmaIsotropic,
    TotallySigmaIsotropic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaModule {
    field: ExactField,
    dim_h: usize,
    w: InvolutionSpace,
    sign: Sign,
    forms: Vec<Matrix>,
}

/// The map `α : V → (V^∨)* ⊗ W` induced on a totally isotropic `V`, stored as
/// one square block per coordinate of `W`: block `k` holds `q(u)(v)_k` for `u`
/// running over a lift of `V^∨` (rows) and `v` over `V` (columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearPiece {
    dim: usize,
    alpha: Vec<Matrix>,
}

impl LinearPiece {
    pub fn new(alpha: Vec<Matrix>) -> Result<Self> {
        let dim = alpha.first().map(Matrix::rows).ok_or_else(|| Error::shape("empty α"))?;
        if alpha.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::shape("α blocks must be square of a common size"));
        }
        Ok(LinearPiece { dim, alpha })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> &[Matrix] {
        &self.alpha
    }
}

/// `V^{⊥σ}/V` realised on a complement of `V` inside `V^{⊥σ}`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub perp: Subspace,
    pub complement: Subspace,
    pub module: SigmaModule,
}

impl SigmaModule {
    /// Builds a module and checks shapes only; see [`SigmaModule::validate`].
    pub fn from_parts(
        field: ExactField,
        sign: Sign,
        w: InvolutionSpace,
        dim_h: usize,
        forms: Vec<Matrix>,
    ) -> Result<Self> {
        if w.field() != field {
            return Err(Error::FieldMismatch(
                "involution field differs from module field".into(),
            ));
        }
        if forms.len() != w.dim() {
            return Err(Error::shape(format!(
                "{} forms for a {}-dimensional W",
                forms.len(),
                w.dim()
            )));
        }
        for (k, b) in forms.iter().enumerate() {
            if b.rows() != dim_h || b.cols() != dim_h {
                return Err(Error::shape(format!(
                    "form {k} is {}x{}, expected {dim_h}x{dim_h}",
                    b.rows(),
                    b.cols()
                )));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch(format!("form {k} over {}", b.field())));
            }
        }
        Ok(SigmaModule {
            field,
            dim_h,
            w,
            sign,
            forms,
        })
    }

    /// Builds a module and requires the twisted symmetry relation.
    pub fn new(field: ExactField, sign: Sign, w: InvolutionSpace, dim_h: usize, forms: Vec<Matrix>) -> Result<Self> {
        let q = Self::from_parts(field, sign, w, dim_h, forms)?;
        if !q.validate() {
            return Err(Error::SymmetryViolated);
        }
        Ok(q)
    }

    /// A module with trivial `W`, given by one bilinear form.
    pub fn single(sign: Sign, form: Matrix) -> Result<Self> {
        let field = form.field();
        let n = form.rows();
        Self::new(field, sign, InvolutionSpace::trivial(field), n, vec![form])
    }

    pub fn zero(field: ExactField, sign: Sign, w: InvolutionSpace, dim_h: usize) -> Self {
        let forms = vec![Matrix::zeros(field, dim_h, dim_h); w.dim()];
        SigmaModule {
            field,
            dim_h,
            w,
            sign,
            forms,
        }
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn w(&self) -> &InvolutionSpace {
        &self.w
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn forms(&self) -> &[Matrix] {
        &self.forms
    }

    pub fn is_zero(&self) -> bool {
        self.forms.iter().all(Matrix::is_zero)
    }

    /// `sign · Σ_k S_lk · B_kᵀ` for every `l`; fixed exactly by valid modules.
    pub fn twisted_transpose(sign: Sign, w: &InvolutionSpace, forms: &[Matrix]) -> Vec<Matrix> {
        let field = w.field();
        let s = w.matrix();
        let eps = sign.scalar(field);
        let transposed: Vec<Matrix> = forms.iter().map(Matrix::transpose).collect();
        (0..w.dim())
            .map(|l| {
                let n = forms.first().map_or(0, Matrix::rows);
                let mut acc = Matrix::zeros(field, n, n);
                for (k, bt) in transposed.iter().enumerate() {
                    let c = &s[(l, k)] * &eps;
                    if !c.is_zero() {
                        acc = &acc + &bt.scale(&c);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn validate(&self) -> bool {
        Self::twisted_transpose(self.sign, &self.w, &self.forms) == self.forms
    }

    /// `q(x)(y)` as its coordinate vector in `W`.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.forms.iter().map(|b| b.bilinear(x, y)).collect()
    }

    fn check_ambient(&self, v: &Subspace) -> Result<()> {
        if v.ambient_dim() != self.dim_h || v.field() != self.field {
            return Err(Error::shape(format!(
                "subspace of {}^{} used with a module on {}^{}",
                v.field(),
                v.ambient_dim(),
                self.field,
                self.dim_h
            )));
        }
        Ok(())
    }

    /// `V^{⊥σ} = {x : q(x)(v) = 0 for all v ∈ V}`.
    pub fn orthogonal(&self, v: &Subspace) -> Result<Subspace> {
        self.check_ambient(v)?;
        let rows: Vec<Vec<Scalar>> = v
            .basis_vectors()
            .iter()
            .flat_map(|b| self.forms.iter().map(move |f| f.mul_vec(b)))
            .collect();
        if rows.is_empty() {
            return Ok(Subspace::full(self.field, self.dim_h));
        }
        let m = Matrix::from_rows(self.field, self.dim_h, rows)?;
        Ok(kernel(&m))
    }

    /// The radical `H^{⊥σ}`.
    pub fn radical(&self) -> Subspace {
        self.orthogonal(&Subspace::full(self.field, self.dim_h))
            .expect("full space has the right ambient")
    }

    pub fn isotropy_class(&self, v: &Subspace) -> Result<IsotropyClass> {
        self.check_ambient(v)?;
        if v.is_zero() {
            return Err(Error::ZeroSubspace);
        }
        let perp = self.orthogonal(v)?;
        Ok(if v.is_subspace_of(&perp) {
            IsotropyClass::TotallySigmaIsotropic
        } else if !v.intersection(&perp).is_zero() {
            IsotropyClass::SigmaIsotropic
        } else {
            IsotropyClass::NotIsotropic
        })
    }

    /// Totally isotropic test that accepts the zero subspace.
    pub fn is_totally_isotropic(&self, v: &Subspace) -> Result<bool> {
        let basis = v.basis_vectors();
        self.check_ambient(v)?;
        Ok(basis.iter().all(|x| {
            basis
                .iter()
                .all(|y| self.forms.iter().all(|b| b.bilinear(x, y).is_zero()))
        }))
    }

    /// Forms `Pᵀ B_k P` for the matrix `P` whose columns are `vectors`: the
    /// restriction of `q` to their span, in those coordinates.
    pub fn restrict(&self, vectors: &[Vec<Scalar>]) -> SigmaModule {
        let p = Matrix::from_columns(self.field, self.dim_h, vectors);
        let pt = p.transpose();
        let forms = self.forms.iter().map(|b| &(&pt * b) * &p).collect();
        SigmaModule {
            field: self.field,
            dim_h: vectors.len(),
            w: self.w.clone(),
            sign: self.sign,
            forms,
        }
    }

    /// The same form written in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<SigmaModule> {
        if p.rows() != self.dim_h || !p.is_invertible() {
            return Err(Error::Singular);
        }
        let cols: Vec<Vec<Scalar>> = (0..p.cols()).map(|j| p.column(j)).collect();
        Ok(self.restrict(&cols))
    }

    /// The `GL(H)` action `B_k ↦ g⁻ᵀ B_k g⁻¹`.
    pub fn act(&self, g: &Matrix) -> Result<SigmaModule> {
        if g.rows() != self.dim_h || g.cols() != self.dim_h {
            return Err(Error::shape("acting matrix has the wrong size"));
        }
        let inv = g.inverse().ok_or(Error::Singular)?;
        self.change_basis(&inv)
    }

    pub fn reduction(&self, v: &Subspace) -> Result<Reduction> {
        self.check_ambient(v)?;
        if !self.is_totally_isotropic(v)? {
            return Err(Error::NotTotallyIsotropic);
        }
        let perp = self.orthogonal(v)?;
        let complement = complement_in(v, &perp)?;
        let module = self.restrict(&complement.basis_vectors());
        Ok(Reduction {
            perp,
            complement,
            module,
        })
    }

    /// The reduced form on `V^{⊥σ}/V`, realised on the deterministic complement.
    pub fn reduced_form(&self, v: &Subspace) -> Result<SigmaModule> {
        Ok(self.reduction(v)?.module)
    }

    /// Ranks of `B_1, …, B_w`.
    pub fn form_ranks(&self) -> Vec<usize> {
        self.forms.iter().map(Matrix::rank).collect()
    }

    /// `q` restricted to the direct sum with `other` placed after it.
    pub fn direct_sum(&self, other: &SigmaModule) -> Result<SigmaModule> {
        if self.field != other.field || self.sign != other.sign || self.w != other.w {
            return Err(Error::Incompatible(
                "direct sum needs the same field, sign and W".into(),
            ));
        }
        let forms = self
            .forms
            .iter()
            .zip(&other.forms)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(SigmaModule {
            field: self.field,
            dim_h: self.dim_h + other.dim_h,
            w: self.w.clone(),
            sign: self.sign,
            forms,
        })
    }

    /// Reduction modulo `p` of a rational module; `None` if some entry has a
    /// denominator divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<SigmaModule> {
        let field = ExactField::prime(p).ok()?;
        let red = |m: &Matrix| -> Option<Matrix> {
            let data = m
                .entries()
                .iter()
                .map(|x| x.reduce_mod(p))
                .collect::<Option<Vec<_>>>()?;
            Matrix::from_vec(field, m.rows(), m.cols(), data).ok()
        };
        let s = red(self.w.matrix())?;
        let forms = self.forms.iter().map(red).collect::<Option<Vec<_>>>()?;
        Some(SigmaModule {
            field,
            dim_h: self.dim_h,
            w: InvolutionSpace { involution: s },
            sign: self.sign,
            forms,
        })
    }
}

/// The module on `V ⊕ V^∨` with `α` in the `(V^∨, V)` block and its twisted
/// transpose in the `(V, V^∨)` block.
pub fn hyperbolic_module(piece: &LinearPiece, w: &InvolutionSpace, sign: Sign) -> Result<SigmaModule> {
    if piece.alpha.len() != w.dim() {
        return Err(Error::shape("α needs one block per coordinate of W"));
    }
    let field = w.field();
    let d = piece.dim;
    let top_right = SigmaModule::twisted_transpose(sign, w, &piece.alpha);
    let forms = piece
        .alpha
        .iter()
        .zip(&top_right)
        .map(|(a, t)| {
            let mut b = Matrix::zeros(field, 2 * d, 2 * d);
            b.set_block(0, d, t);
            b.set_block(d, 0, a);
            b
        })
        .collect();
    SigmaModule::new(field, sign, w.clone(), 2 * d, forms)
}
