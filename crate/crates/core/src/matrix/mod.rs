//! Dense complex linear algebra.
//!
//! Every bipartite operator in the crate uses one Kronecker convention: for
//! `a ⊗ b` the left factor is the slow index, so entry
//! `(i·rb + k, j·cb + l)` equals `a[i,j]·b[k,l]`. For Choi states subsystem 0
//! is the input/reference system and subsystem 1 the channel output.

mod density;
mod eigen;
mod linsolve;

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, Real, C};

pub(crate) use density::von_neumann_entropy;
pub use density::{von_neumann_entropy_of, DensityMatrix};
pub use eigen::HermEig;
pub use linsolve::{solve_real, RealMatrix};

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cr(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries; fails when the count disagrees.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let cc = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, cc, |i, j| cr(T::lit(rows[i][j])))
    }

    /// Convenience constructor from `(re, im)` row slices.
    pub fn from_complex_rows(rows: &[&[(f64, f64)]]) -> Self {
        let r = rows.len();
        let cc = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, cc, |i, j| c(T::lit(rows[i][j].0), T::lit(rows[i][j].1)))
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        m
    }

    /// `|i⟩⟨j|` in dimension `d`.
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d, d);
        m[(i, j)] = cr(T::one());
        m
    }

    /// `|v⟩⟨v|` for a column vector given by its entries.
    pub fn outer(v: &[C<T>]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C<T>] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(cr(T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `‖self − other‖_F`; the only notion of matrix equality used in the crate.
    pub fn dist(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.dist(other) <= tol
    }

    /// Hilbert–Schmidt pairing `tr(self† · other)`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.data
            .iter()
            .zip(&other.data)
            .fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }

    /// Real part of `tr(self · other)` for Hermitian arguments.
    pub fn real_pairing(&self, other: &Self) -> T {
        // tr(AB) = Σ_ij A_ij B_ji
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] * other[(j, i)]).re;
            }
        }
        acc
    }

    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitize(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * *b;
                }
            }
        }
        out
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.matmul(rhs))
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    pub fn mat_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(cr(T::zero()), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// Keeps only the diagonal (computational-basis dephasing).
    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(
            self.rows,
            self.cols,
            |i, j| {
                if i == j {
                    self[(i, j)]
                } else {
                    cr(T::zero())
                }
            },
        )
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Row-major vectorisation.
    pub fn vec(&self) -> Vec<C<T>> {
        self.data.clone()
    }

    pub fn unvec(rows: usize, cols: usize, v: &[C<T>]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self {
            rows,
            cols,
            data: v.to_vec(),
        }
    }

    /// Casts every entry to another scalar type.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a, T: Real> $tr<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            fn $method(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
                ComplexMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a $op *b).collect(),
                }
            }
        }

        impl<T: Real> $tr for ComplexMatrix<T> {
            type Output = ComplexMatrix<T>;

            fn $method(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl<T: Real> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += *b;
        }
    }
}

impl<T: Real> SubAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn sub_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= *b;
        }
    }
}

impl<'a, T: Real> Mul<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Mul for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(&rhs)
    }
}

impl<T: Real> Neg for ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// Kronecker product with the left factor as the slow index.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (rb, cb) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(a.rows * rb, a.cols * cb);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij.re == T::zero() && aij.im == T::zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, first factor slowest.
pub fn kron_all<T: Real>(factors: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    factors.iter().fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

fn check_bipartite<T: Real>(m: &ComplexMatrix<T>, dims: [usize; 2]) -> Result<()> {
    let n = dims[0] * dims[1];
    if m.rows != n || m.cols != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}x{n} for dims {:?}, got {}x{}",
            dims, m.rows, m.cols
        )));
    }
    Ok(())
}

/// Traces out one subsystem of a bipartite operator, returning the marginal
/// on subsystem `keep` (0 or 1).
pub fn partial_trace<T: Real>(m: &ComplexMatrix<T>, dims: [usize; 2], keep: usize) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, dims)?;
    let [d0, d1] = dims;
    match keep {
        0 => Ok(ComplexMatrix::from_fn(d0, d0, |i, j| {
            (0..d1).fold(cr(T::zero()), |acc, k| acc + m[(i * d1 + k, j * d1 + k)])
        })),
        1 => Ok(ComplexMatrix::from_fn(d1, d1, |k, l| {
            (0..d0).fold(cr(T::zero()), |acc, i| acc + m[(i * d1 + k, i * d1 + l)])
        })),
        _ => Err(Error::IndexOutOfRange { index: keep, limit: 2 }),
    }
}

/// Partial transpose on subsystem `sys` of a bipartite operator.
pub fn partial_transpose<T: Real>(m: &ComplexMatrix<T>, dims: [usize; 2], sys: usize) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, dims)?;
    if sys > 1 {
        return Err(Error::IndexOutOfRange { index: sys, limit: 2 });
    }
    let [d0, d1] = dims;
    let mut out = ComplexMatrix::zeros(d0 * d1, d0 * d1);
    for i in 0..d0 {
        for k in 0..d1 {
            for j in 0..d0 {
                for l in 0..d1 {
                    let v = m[(i * d1 + k, j * d1 + l)];
                    if sys == 1 {
                        out[(i * d1 + l, j * d1 + k)] = v;
                    } else {
                        out[(j * d1 + k, i * d1 + l)] = v;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reorders the tensor factors of a square operator on `⊗_k C^{dims[k]}`.
/// Output factor `t` is input factor `perm[t]`.
pub fn permute_subsystems<T: Real>(m: &ComplexMatrix<T>, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix<T>> {
    let n: usize = dims.iter().product();
    if m.rows != n || m.cols != n || perm.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation {:?} of dims {:?} on {}x{}",
            perm, dims, m.rows, m.cols
        )));
    }
    let mut seen = vec![false; dims.len()];
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // map old flat index -> new flat index
    let mut map = vec![0usize; n];
    let mut digits = vec![0usize; dims.len()];
    for (old, slot) in map.iter_mut().enumerate() {
        let mut rem = old;
        for k in (0..dims.len()).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut new = 0;
        for (t, &p) in perm.iter().enumerate() {
            new = new * new_dims[t] + digits[p];
        }
        *slot = new;
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// `true` iff the smallest eigenvalue of the Hermitian matrix is `≥ −tol`.
pub fn psd_check<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    m.require_square()?;
    let scale = T::one().max(m.frobenius_norm());
    if m.hermitian_defect() > tol * scale {
        return Err(Error::NotHermitian {
            defect: m.hermitian_defect().to_f64_lossy(),
        });
    }
    let eig = m.herm_eig_unchecked();
    Ok(eig.values.first().is_none_or(|&v| v >= -tol))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.herm_eig_unchecked().values.first().copied().unwrap_or_else(T::zero)
}
