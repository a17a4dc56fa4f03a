//! Exhaustive enumeration over prime fields: vectors, matrices and
//! Grassmannians (every k-dimensional subspace exactly once, via RREF cells).

use super::field::{ExactField, Scalar};
use super::matrix::Matrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Every vector of `F_p^n` in lexicographic order (first coordinate most significant).
pub fn all_vectors(field: ExactField, n: usize) -> Result<Vec<Vec<Scalar>>> {
    let elems = field.elements().ok_or(Error::NotFinite)?;
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                elems.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

pub fn all_matrices(field: ExactField, rows: usize, cols: usize) -> Result<Vec<Matrix>> {
    Ok(all_vectors(field, rows * cols)?
        .into_iter()
        .map(|v| Matrix::from_vec(field, rows, cols, v).expect("sizes agree"))
        .collect())
}

/// `GL_n(F_p)` by filtering all matrices.
pub fn general_linear(field: ExactField, n: usize) -> Result<Vec<Matrix>> {
    Ok(all_matrices(field, n, n)?
        .into_iter()
        .filter(Matrix::is_invertible)
        .collect())
}

/// All k-dimensional subspaces of `F_p^n`, ordered by pivot set and then by
/// free entries; the count is the Gaussian binomial `[n choose k]_p`.
pub fn enumerate_subspaces(field: ExactField, n: usize, k: usize) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(Error::shape(format!("subspace dimension {k} exceeds {n}")));
    }
    let elems = field.elements().ok_or(Error::NotFinite)?;
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // Free positions: (row r, column c) with c > pivot_r and c not a pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut m = Matrix::zeros(field, k, n);
            for (r, &p) in pivots.iter().enumerate() {
                m[(r, p)] = field.one();
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m[(r, c)] = elems[d].clone();
            }
            out.push(Subspace::from_rref_unchecked(m, pivots.clone()));
            if !increment(&mut digits, elems.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// Every subspace of `F_p^n` of every dimension, in search order.
pub fn all_subspaces(field: ExactField, n: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(enumerate_subspaces(field, n, k)?);
    }
    Ok(out)
}

/// Odometer with the last digit fastest; returns false after wrapping around.
fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grassmannians() {
        let f2 = ExactField::Prime(2);
        let f3 = ExactField::Prime(3);
        assert_eq!(enumerate_subspaces(f2, 2, 1).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(f3, 2, 1).unwrap().len(), 4);
        let zero = enumerate_subspaces(f3, 3, 0).unwrap();
        assert_eq!(zero, vec![Subspace::zero(f3, 3)]);
        assert!(enumerate_subspaces(f3, 2, 3).is_err());
        assert!(enumerate_subspaces(ExactField::Rational, 2, 1).is_err());
    }

    #[test]
    fn enumeration_is_in_search_order() {
        let f3 = ExactField::Prime(3);
        let all = all_subspaces(f3, 3).unwrap();
        for w in all.windows(2) {
            assert!(w[0].search_cmp(&w[1]).is_lt());
        }
    }

    #[test]
    fn gl2_orders() {
        assert_eq!(general_linear(ExactField::Prime(2), 2).unwrap().len(), 6);
        assert_eq!(general_linear(ExactField::Prime(3), 2).unwrap().len(), 48);
    }
}
