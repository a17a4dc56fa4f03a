//! Matrices over the dual numbers `k[ε]`, `ε² = 0`, stored as pairs `g + εh`.

use crate::error::{Error, Result};
use crate::linalg::{ExactField, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualNumberMatrix {
    g: Matrix,
    h: Matrix,
}

impl DualNumberMatrix {
    pub fn new(g: Matrix, h: Matrix) -> Result<Self> {
        if !g.is_square() || g.rows() != h.rows() || g.cols() != h.cols() {
            return Err(Error::shape("dual-number matrix needs square g and h of equal size"));
        }
        if g.field() != h.field() {
            return Err(Error::FieldMismatch("g and h live over different fields".into()));
        }
        Ok(DualNumberMatrix { g, h })
    }

    pub fn identity(field: ExactField, r: usize) -> Self {
        DualNumberMatrix {
            g: Matrix::identity(field, r),
            h: Matrix::zeros(field, r, r),
        }
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn size(&self) -> usize {
        self.g.rows()
    }

    pub fn field(&self) -> ExactField {
        self.g.field()
    }

    pub fn transpose(&self) -> Self {
        DualNumberMatrix {
            g: self.g.transpose(),
            h: self.h.transpose(),
        }
    }

    /// `ε ↦ −ε`.
    pub fn conjugate_epsilon(&self) -> Self {
        DualNumberMatrix {
            g: self.g.clone(),
            h: -&self.h,
        }
    }

    /// `(g + εh)⁻¹ = g⁻¹ − ε g⁻¹ h g⁻¹`.
    pub fn inverse(&self) -> Option<Self> {
        let gi = self.g.inverse()?;
        let h = -&(&(&gi * &self.h) * &gi);
        Some(DualNumberMatrix { g: gi, h })
    }

    pub fn is_invertible(&self) -> bool {
        self.g.is_invertible()
    }
}

/// `(g, h)(k, l) = (gk, gl + hk)`.
pub fn dn_mul(a: &DualNumberMatrix, b: &DualNumberMatrix) -> Result<DualNumberMatrix> {
    if a.size() != b.size() || a.field() != b.field() {
        return Err(Error::shape("dual-number matrices of different sizes"));
    }
    Ok(DualNumberMatrix {
        g: &a.g * &b.g,
        h: &(&a.g * &b.h) + &(&a.h * &b.g),
    })
}

/// `det(g + εh) = d0 + ε d1`.
pub fn dn_det(a: &DualNumberMatrix) -> (Scalar, Scalar) {
    let d0 = a.g.det();
    let d1 = match a.g.inverse() {
        Some(gi) => &d0 * &(&gi * &a.h).trace(),
        None => dn_det_expansion(a),
    };
    (d0, d1)
}

/// The ε-coefficient by multilinearity in the columns: `Σ_j det(g with column j of h)`.
pub fn dn_det_expansion(a: &DualNumberMatrix) -> Scalar {
    let r = a.size();
    let field = a.field();
    (0..r).fold(field.zero(), |acc, j| {
        let mut m = a.g.clone();
        for i in 0..r {
            m[(i, j)] = a.h[(i, j)].clone();
        }
        &acc + &m.det()
    })
}

/// `(g, h)` is fixed by `A(ε) ↦ ᵗA(−ε)⁻¹` inside `SL_r(k[ε])`: `g` is special
/// orthogonal, `ᵗg h` is symmetric and `Tr(ᵗg h) = 0`.
pub fn is_fixed_plus(a: &DualNumberMatrix) -> bool {
    let field = a.field();
    let r = a.size();
    let gt = a.g.transpose();
    let n = &gt * &a.h;
    &gt * &a.g == Matrix::identity(field, r) && a.g.det().is_one() && n.is_symmetric() && n.trace().is_zero()
}

/// `g2 = ᵗg1⁻¹` for a pair in `SL_r × SL_r`.
pub fn is_fixed_unramified(g1: &Matrix, g2: &Matrix) -> Result<bool> {
    if !g1.is_square() || g1.rows() != g2.rows() || !g2.is_square() {
        return Err(Error::shape("unramified pair needs square matrices of equal size"));
    }
    let inv = g1.inverse().ok_or(Error::Singular)?;
    if !g2.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(g1.det().is_one() && g2.det().is_one() && *g2 == inv.transpose())
}

/// Checks that `m` is alternating, invertible and of even size.
pub fn check_alternating_form(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::shape("alternating form must be square"));
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddSize);
    }
    if !m.is_alternating() {
        return Err(Error::NotAlternating);
    }
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// `(g, h)` is fixed by `A(ε) ↦ M⁻¹ ᵗA(−ε)⁻¹ M` inside `SL_r(k[ε])`:
/// `ᵗg M g = M`, `N = ᵗg M h` satisfies `N = −ᵗN`, and `Tr(g⁻¹h) = 0`.
/// At `g = I` this is `M h = ᵗh M = −ᵗ(M h)` with `Tr h = 0`.
pub fn is_fixed_alternating(m: &Matrix, a: &DualNumberMatrix) -> Result<bool> {
    check_alternating_form(m)?;
    if m.rows() != a.size() || m.field() != a.field() {
        return Err(Error::shape("form and matrix sizes differ"));
    }
    let gt = a.g.transpose();
    if &(&gt * m) * &a.g != *m {
        return Ok(false);
    }
    let n = &(&gt * m) * &a.h;
    if !(&n + &n.transpose()).is_zero() {
        return Ok(false);
    }
    let (d0, d1) = dn_det(a);
    Ok(d0.is_one() && d1.is_zero())
}

/// The involutions themselves, for brute-force comparison.
pub fn plus_involution(a: &DualNumberMatrix) -> Option<DualNumberMatrix> {
    a.conjugate_epsilon().transpose().inverse()
}

pub fn alternating_involution(m: &Matrix, a: &DualNumberMatrix) -> Option<DualNumberMatrix> {
    let mi = m.inverse()?;
    let inner = plus_involution(a)?;
    let left = DualNumberMatrix::new(mi, Matrix::zeros(m.field(), m.rows(), m.rows())).ok()?;
    let right = DualNumberMatrix::new(m.clone(), Matrix::zeros(m.field(), m.rows(), m.rows())).ok()?;
    dn_mul(&dn_mul(&left, &inner).ok()?, &right).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: ExactField = ExactField::Rational;

    fn dn(g: &[&[i64]], h: &[&[i64]]) -> DualNumberMatrix {
        DualNumberMatrix::new(Matrix::from_i64(Q, g), Matrix::from_i64(Q, h)).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let a = dn(&[&[1, 0], &[0, 1]], &[&[1, 2], &[3, 4]]);
        let b = dn(&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]);
        assert_eq!(dn_mul(&a, &b).unwrap(), dn(&[&[1, 0], &[0, 1]], &[&[1, 3], &[4, 4]]));
        let c = dn(&[&[2, 1], &[1, 1]], &[&[5, 0], &[1, 2]]);
        assert_eq!(dn_mul(&c, &DualNumberMatrix::identity(Q, 2)).unwrap(), c);
        let g = dn(&[&[2, 1], &[1, 1]], &[&[0, 0], &[0, 0]]);
        let gi = dn(&[&[1, -1], &[-1, 2]], &[&[0, 0], &[0, 0]]);
        assert_eq!(dn_mul(&g, &gi).unwrap(), DualNumberMatrix::identity(Q, 2));
        assert_eq!(
            dn_mul(&c, &c.inverse().unwrap()).unwrap(),
            DualNumberMatrix::identity(Q, 2)
        );
        assert!(dn_mul(&c, &DualNumberMatrix::identity(Q, 3)).is_err());
    }

    #[test]
    fn determinant_examples() {
        let a = dn(&[&[1, 0], &[0, 1]], &[&[3, 7], &[1, 4]]);
        assert_eq!(dn_det(&a), (Q.one(), Q.from_i64(7)));
        let g = dn(&[&[2, 1], &[1, 3]], &[&[0, 0], &[0, 0]]);
        assert_eq!(dn_det(&g), (Q.from_i64(5), Q.zero()));
        let d = dn(&[&[2, 0], &[0, 3]], &[&[1, 0], &[0, 1]]);
        assert_eq!(dn_det(&d), (Q.from_i64(6), Q.from_i64(5)));
        // Direct expansion of (2+ε)(3+ε).
        assert_eq!(dn_det_expansion(&d), Q.from_i64(5));
        let s = dn(&[&[1, 2], &[2, 4]], &[&[1, 0], &[0, 1]]);
        assert_eq!(dn_det(&s), (Q.zero(), Q.from_i64(5)));
    }

    #[test]
    fn fixed_plus_examples() {
        assert!(is_fixed_plus(&dn(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, -1]])));
        assert!(is_fixed_plus(&dn(&[&[0, -1], &[1, 0]], &[&[0, 0], &[0, 0]])));
        let half = DualNumberMatrix::new(
            Matrix::diagonal(Q, &[Q.from_i64(2), Q.from_ratio(1, 2).unwrap()]),
            Matrix::zeros(Q, 2, 2),
        )
        .unwrap();
        assert!(!is_fixed_plus(&half));
        // Reflections are orthogonal but lie outside SL.
        assert!(!is_fixed_plus(&dn(&[&[1, 0], &[0, -1]], &[&[0, 0], &[0, 0]])));
    }

    #[test]
    fn fixed_unramified_examples() {
        let g = Matrix::from_i64(Q, &[&[1, 1], &[0, 1]]);
        let gti = g.inverse().unwrap().transpose();
        assert!(is_fixed_unramified(&g, &gti).unwrap());
        let i = Matrix::identity(Q, 2);
        assert!(is_fixed_unramified(&i, &i).unwrap());
        assert!(!is_fixed_unramified(&g, &g).unwrap());
        assert!(is_fixed_unramified(&Matrix::zeros(Q, 2, 2), &i).is_err());
    }

    #[test]
    fn fixed_alternating_examples() {
        let j = Matrix::from_i64(Q, &[&[0, 1], &[-1, 0]]);
        assert!(is_fixed_alternating(&j, &DualNumberMatrix::identity(Q, 2)).unwrap());
        let g = dn(&[&[1, 1], &[0, 1]], &[&[0, 0], &[0, 0]]);
        assert!(is_fixed_alternating(&j, &g).unwrap());
        let scalar = dn(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]);
        assert!(!is_fixed_alternating(&j, &scalar).unwrap());
        assert!(matches!(
            is_fixed_alternating(&Matrix::identity(Q, 2), &g),
            Err(Error::NotAlternating)
        ));
        assert!(matches!(
            is_fixed_alternating(&Matrix::zeros(Q, 3, 3), &DualNumberMatrix::identity(Q, 3)),
            Err(Error::OddSize)
        ));
    }

    #[test]
    fn predicates_match_involutions_on_samples() {
        let j = Matrix::from_i64(Q, &[&[0, 1], &[-1, 0]]);
        let samples = [
            dn(&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, -1]]),
            dn(&[&[0, -1], &[1, 0]], &[&[2, 1], &[1, -2]]),
            dn(&[&[1, 1], &[0, 1]], &[&[1, 0], &[0, 0]]),
            dn(&[&[2, 0], &[0, 1]], &[&[0, 0], &[0, 0]]),
        ];
        for a in &samples {
            let one = (Q.one(), Q.zero());
            let plus = plus_involution(a).as_ref() == Some(a) && dn_det(a) == one;
            assert_eq!(plus, is_fixed_plus(a));
            let alt = alternating_involution(&j, a).as_ref() == Some(a) && dn_det(a) == one;
            assert_eq!(alt, is_fixed_alternating(&j, a).unwrap());
        }
    }
}
