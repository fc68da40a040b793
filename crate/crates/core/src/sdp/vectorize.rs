//! Real coordinates for Hermitian matrices: diagonal entries, then
//! `√2·Re X_ij` and `√2·Im X_ij` for `i < j`. The map is an isometry from
//! the Hilbert–Schmidt inner product to the Euclidean one.

use crate::matrix::ComplexMatrix;
use crate::scalar::{c, cr, Real};

pub fn svec<T: Real>(m: &ComplexMatrix<T>, out: &mut [T]) {
    let n = m.rows();
    let r2 = T::lit(std::f64::consts::SQRT_2);
    let mut k = 0;
    for i in 0..n {
        out[k] = m[(i, i)].re;
        k += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5);
            out[k] = z.re * r2;
            out[k + 1] = z.im * r2;
            k += 2;
        }
    }
}

pub fn smat<T: Real>(v: &[T], n: usize) -> ComplexMatrix<T> {
    let inv = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut m = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        m[(i, i)] = cr(v[k]);
        k += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = c(v[k] * inv, v[k + 1] * inv);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

/// Orthonormal basis of `n×n` Hermitian matrices matching [`svec`] coordinates.
pub fn hermitian_basis<T: Real>(n: usize) -> Vec<ComplexMatrix<T>> {
    (0..n * n)
        .map(|k| {
            let mut e = vec![T::zero(); n * n];
            e[k] = T::one();
            smat(&e, n)
        })
        .collect()
}
