use std::cmp::Ordering;

use super::field::{ExactField, Scalar, ScalarKey};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A linear subspace of `field^ambient`, stored by its reduced row-echelon
/// basis. Because the RREF is unique, derived equality is equality of spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: ExactField, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: ExactField, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row span of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let e = m.echelon();
        let basis = e.reduced.block(0, 0, e.rank, m.cols());
        Subspace {
            ambient: m.cols(),
            basis,
            pivots: e.pivots,
        }
    }

    pub fn span(field: ExactField, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient, vectors.to_vec())?;
        Ok(Self::row_space(&m))
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: ExactField, ambient: usize, indices: &[usize]) -> Self {
        let vecs: Vec<Vec<Scalar>> = indices.iter().map(|&i| unit_vector(field, ambient, i)).collect();
        Self::span(field, ambient, &vecs).expect("unit vectors have the ambient length")
    }

    /// Builds directly from a matrix already in RREF without zero rows.
    pub(crate) fn from_rref_unchecked(basis: Matrix, pivots: Vec<usize>) -> Self {
        Subspace {
            ambient: basis.cols(),
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> ExactField {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        // Reduce v against the RREF rows using the pivots.
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (j, x) in self.basis.row(row).iter().enumerate() {
                r[j] = &r[j] - &(&f * x);
            }
        }
        r.iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.basis_vectors().iter().all(|v| other.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let m = Matrix::stack(self.field(), self.ambient, &[&self.basis, &other.basis]).expect("same width");
        Self::row_space(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let field = self.field();
        let (a, b) = (self.dim(), other.dim());
        // Columns are the basis vectors of self and −other; kernel vectors (c, d)
        // give c·A = d·B in the intersection.
        let mut cols = self.basis_vectors();
        cols.extend(
            other
                .basis_vectors()
                .into_iter()
                .map(|v| v.iter().map(|x| -x).collect()),
        );
        let m = Matrix::from_columns(field, self.ambient, &cols);
        let ker = kernel(&m);
        let vecs: Vec<Vec<Scalar>> = ker
            .basis_vectors()
            .into_iter()
            .map(|kv| {
                let mut out = vec![field.zero(); self.ambient];
                for (i, c) in kv[..a].iter().enumerate() {
                    for (j, x) in self.basis.row(i).iter().enumerate() {
                        out[j] = &out[j] + &(c * x);
                    }
                }
                out
            })
            .collect();
        debug_assert!(ker.dim() <= a.min(b));
        Self::span(field, self.ambient, &vecs).expect("ambient length")
    }

    /// Image under the linear map `x ↦ g·x`.
    pub fn image(&self, g: &Matrix) -> Subspace {
        assert_eq!(g.cols(), self.ambient, "map width mismatch");
        let vecs: Vec<Vec<Scalar>> = self.basis_vectors().iter().map(|v| g.mul_vec(v)).collect();
        Self::span(self.field(), g.rows(), &vecs).expect("image length")
    }

    /// Coordinates of the vectors of `self` with respect to `frame`'s basis rows,
    /// i.e. the same space seen inside `frame` identified with `field^dim(frame)`.
    pub fn coordinates_in(&self, frame: &Subspace) -> Result<Subspace> {
        if !self.is_subspace_of(frame) {
            return Err(Error::NotContained);
        }
        let coords: Vec<Vec<Scalar>> = self
            .basis_vectors()
            .iter()
            .map(|v| frame.pivots.iter().map(|&p| v[p].clone()).collect())
            .collect();
        Self::span(self.field(), frame.dim(), &coords)
    }

    /// Embeds a subspace of `field^k` into the ambient space of `frame` along an
    /// explicit ordered basis of `k` vectors.
    pub fn embed_along(&self, frame_basis: &[Vec<Scalar>], ambient: usize) -> Subspace {
        assert_eq!(frame_basis.len(), self.ambient, "frame size mismatch");
        let field = self.field();
        let vecs: Vec<Vec<Scalar>> = self
            .basis_vectors()
            .iter()
            .map(|c| {
                let mut out = vec![field.zero(); ambient];
                for (ci, fv) in c.iter().zip(frame_basis) {
                    for (j, x) in fv.iter().enumerate() {
                        out[j] = &out[j] + &(ci * x);
                    }
                }
                out
            })
            .collect();
        Self::span(field, ambient, &vecs).expect("ambient length")
    }

    /// Deterministic search order: dimension, then pivot columns, then entries
    /// in the field's simplest-first order.
    pub fn search_key(&self) -> (usize, Vec<usize>, Vec<ScalarKey>) {
        (
            self.dim(),
            self.pivots.clone(),
            self.basis.entries().iter().map(Scalar::order_key).collect(),
        )
    }

    pub fn search_cmp(&self, other: &Subspace) -> Ordering {
        self.search_key().cmp(&other.search_key())
    }
}

pub fn unit_vector(field: ExactField, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// `{x : m·x = 0}` as a canonical subspace of `field^cols(m)`.
pub fn kernel(m: &Matrix) -> Subspace {
    let field = m.field();
    let n = m.cols();
    let e = m.echelon();
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    let vecs: Vec<Vec<Scalar>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![field.zero(); n];
            v[f] = field.one();
            for (r, &p) in e.pivots.iter().enumerate() {
                v[p] = -&e.reduced[(r, f)];
            }
            v
        })
        .collect();
    Subspace::span(field, n, &vecs).expect("kernel vectors have the right length")
}

/// A complement `C` of `inner` inside `outer`: the basis rows of `outer` are
/// scanned in order and kept whenever they are independent of what is already
/// spanned. For `outer` the whole space these are the standard vectors.
pub fn complement_in(inner: &Subspace, outer: &Subspace) -> Result<Subspace> {
    if !inner.is_subspace_of(outer) {
        return Err(Error::NotContained);
    }
    let field = outer.field();
    let mut current = inner.clone();
    let mut chosen = Vec::new();
    for v in outer.basis_vectors() {
        if current.dim() == outer.dim() {
            break;
        }
        if !current.contains_vector(&v) {
            let one = Subspace::span(field, outer.ambient_dim(), std::slice::from_ref(&v))?;
            current = current.sum(&one);
            chosen.push(v);
        }
    }
    Subspace::span(field, outer.ambient_dim(), &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: ExactField = ExactField::Rational;

    #[test]
    fn kernel_trivial_cases() {
        assert_eq!(kernel(&Matrix::zeros(Q, 2, 2)), Subspace::full(Q, 2));
        assert_eq!(kernel(&Matrix::identity(Q, 3)), Subspace::zero(Q, 3));
    }

    #[test]
    fn kernel_over_f2() {
        let f2 = ExactField::Prime(2);
        let k = kernel(&Matrix::from_i64(f2, &[&[1, 1]]));
        let expected = Subspace::span(f2, 2, &[vec![f2.one(), f2.one()]]).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn complement_examples() {
        let full = Subspace::full(Q, 2);
        let e1 = Subspace::coordinate(Q, 2, &[0]);
        assert_eq!(complement_in(&e1, &full).unwrap(), Subspace::coordinate(Q, 2, &[1]));
        assert_eq!(complement_in(&Subspace::zero(Q, 2), &full).unwrap(), full);
        assert_eq!(complement_in(&full, &full).unwrap(), Subspace::zero(Q, 2));
        assert!(matches!(complement_in(&full, &e1), Err(Error::NotContained)));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::coordinate(Q, 3, &[0, 1]);
        let b = Subspace::coordinate(Q, 3, &[1, 2]);
        assert_eq!(a.intersection(&b), Subspace::coordinate(Q, 3, &[1]));
        assert_eq!(a.sum(&b), Subspace::full(Q, 3));
        let line = Subspace::span(Q, 3, &[vec![Q.one(), Q.one(), Q.zero()]]).unwrap();
        assert!(line.is_subspace_of(&a));
        assert!(!line.is_subspace_of(&b));
    }

    #[test]
    fn coordinates_round_trip() {
        let frame = Subspace::coordinate(Q, 3, &[0, 2]);
        let v = Subspace::span(Q, 3, &[vec![Q.one(), Q.zero(), Q.from_i64(5)]]).unwrap();
        let c = v.coordinates_in(&frame).unwrap();
        assert_eq!(c.basis_vectors(), vec![vec![Q.one(), Q.from_i64(5)]]);
        assert_eq!(c.embed_along(&frame.basis_vectors(), 3), v);
    }
}
