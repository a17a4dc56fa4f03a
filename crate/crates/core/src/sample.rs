//! Seeded random generation of scalars, matrices and σ-modules.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{kernel, ExactField, Matrix, Scalar, Subspace};
use crate::sigmamod::{InvolutionSpace, SigmaModule, Sign};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `F_p`; over ℚ a small integer, occasionally halved or thirded.
pub fn random_scalar<R: Rng>(field: ExactField, rng: &mut R) -> Scalar {
    match field {
        ExactField::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        ExactField::Rational => {
            let num = rng.gen_range(-3..=3);
            let den = if rng.gen_bool(0.2) { rng.gen_range(2..=3) } else { 1 };
            field.from_ratio(num, den).expect("nonzero denominator")
        }
    }
}

pub fn random_matrix<R: Rng>(field: ExactField, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| random_scalar(field, rng)).collect();
    Matrix::from_vec(field, rows, cols, data).expect("sizes agree")
}

pub fn random_invertible<R: Rng>(field: ExactField, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// `P D P⁻¹` with `D = diag(±1)`.
pub fn random_involution<R: Rng>(field: ExactField, dim: usize, rng: &mut R) -> InvolutionSpace {
    let signs: Vec<Scalar> = (0..dim)
        .map(|_| field.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    let d = Matrix::diagonal(field, &signs);
    let p = random_invertible(field, dim, rng);
    let s = &(&p * &d) * &p.inverse().expect("invertible");
    InvolutionSpace::new(s).expect("conjugate of a diagonal involution")
}

pub fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// `B_l = A_l + sign·Σ_k S_lk A_kᵀ` for random `A_k`, which always satisfies
/// the symmetry relation.
pub fn symmetrized_module<R: Rng>(
    field: ExactField,
    sign: Sign,
    w: &InvolutionSpace,
    n: usize,
    rng: &mut R,
) -> SigmaModule {
    let raw: Vec<Matrix> = (0..w.dim()).map(|_| random_matrix(field, n, n, rng)).collect();
    let twisted = SigmaModule::twisted_transpose(sign, w, &raw);
    let forms = raw.iter().zip(&twisted).map(|(a, t)| a + t).collect();
    SigmaModule::new(field, sign, w.clone(), n, forms).expect("symmetrization is valid")
}

/// A basis of the space of valid form tuples, as tuples of matrices.
pub fn valid_form_basis(field: ExactField, sign: Sign, w: &InvolutionSpace, n: usize) -> Vec<Vec<Matrix>> {
    let wd = w.dim();
    let len = wd * n * n;
    let unit = |idx: usize| -> Vec<Matrix> {
        let mut forms = vec![Matrix::zeros(field, n, n); wd];
        let (k, rest) = (idx / (n * n), idx % (n * n));
        forms[k][(rest / n, rest % n)] = field.one();
        forms
    };
    // Columns of T − I on the vectorized tuple.
    let columns: Vec<Vec<Scalar>> = (0..len)
        .map(|idx| {
            let e = unit(idx);
            let t = SigmaModule::twisted_transpose(sign, w, &e);
            t.iter().zip(&e).flat_map(|(a, b)| (a - b).entries().to_vec()).collect()
        })
        .collect();
    let map = Matrix::from_columns(field, len, &columns);
    kernel(&map)
        .basis_vectors()
        .into_iter()
        .map(|v| {
            (0..wd)
                .map(|k| Matrix::from_vec(field, n, n, v[k * n * n..(k + 1) * n * n].to_vec()).expect("size"))
                .collect()
        })
        .collect()
}

/// Uniform over valid modules when the field is finite.
pub fn random_valid_module<R: Rng>(
    field: ExactField,
    sign: Sign,
    w: &InvolutionSpace,
    n: usize,
    rng: &mut R,
) -> SigmaModule {
    let basis = valid_form_basis(field, sign, w, n);
    let mut forms = vec![Matrix::zeros(field, n, n); w.dim()];
    for tuple in &basis {
        let c = random_scalar(field, rng);
        if c.is_zero() {
            continue;
        }
        for (f, b) in forms.iter_mut().zip(tuple) {
            *f = &*f + &b.scale(&c);
        }
    }
    SigmaModule::new(field, sign, w.clone(), n, forms).expect("combination of valid tuples")
}

/// A valid module supported on an `r`-dimensional subspace, moved by a random `g`.
pub fn random_degenerate_module<R: Rng>(
    field: ExactField,
    sign: Sign,
    w: &InvolutionSpace,
    n: usize,
    r: usize,
    rng: &mut R,
) -> SigmaModule {
    let small = random_valid_module(field, sign, w, r.min(n), rng);
    let pad = SigmaModule::zero(field, sign, w.clone(), n - r.min(n));
    let q = small.direct_sum(&pad).expect("same field, sign and W");
    q.act(&random_invertible(field, n, rng)).expect("invertible")
}

/// A module together with a nonzero totally isotropic `V` of dimension `d`.
/// Built in a basis whose first `d` vectors span `V`, with the `V × V` blocks
/// cleared, and additionally the `V × H` blocks cleared with probability 1/4.
pub fn random_isotropic_pair<R: Rng>(
    field: ExactField,
    sign: Sign,
    w: &InvolutionSpace,
    n: usize,
    d: usize,
    rng: &mut R,
) -> (SigmaModule, Subspace) {
    assert!(d >= 1 && d <= n);
    let base = if field.is_finite() {
        random_valid_module(field, sign, w, n, rng)
    } else {
        symmetrized_module(field, sign, w, n, rng)
    };
    let wide = rng.gen_bool(0.25);
    let forms: Vec<Matrix> = base
        .forms()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            for i in 0..n {
                for j in 0..n {
                    let vv = i < d && j < d;
                    let vh = wide && (i < d || j < d);
                    if vv || vh {
                        b[(i, j)] = field.zero();
                    }
                }
            }
            b
        })
        .collect();
    let adapted = SigmaModule::new(field, sign, w.clone(), n, forms).expect("cleared blocks come in transposed pairs");
    let g = random_invertible(field, n, rng);
    let q = adapted.act(&g).expect("invertible");
    let v = Subspace::coordinate(field, n, &(0..d).collect::<Vec<_>>()).image(&g);
    (q, v)
}
