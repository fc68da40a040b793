use crate::error::{Error, Result};
use crate::scalar::Real;

/// Column-stochastic matrix `T` with `T[j][i] = P(j | i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix<T: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> StochasticMatrix<T> {
    /// Validates entries `≥ −tol` and unit column sums.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::with_tol(rows, T::default_tol())
    }

    pub fn with_tol(rows: Vec<Vec<T>>, tol: T) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidStochastic {
                reason: "ragged or empty matrix",
                residual: 0.0,
            });
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        let m = Self { rows: r, cols: c, data };
        m.validate(tol)?;
        Ok(m)
    }

    pub(crate) fn from_fn_unchecked(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for i in 0..cols {
                data.push(f(j, i));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn_unchecked(d, d, |j, i| if i == j { T::one() } else { T::zero() })
    }

    fn validate(&self, tol: T) -> Result<()> {
        if let Some(&min) = self.data.iter().min_by(|a, b| a.partial_cmp(b).unwrap()) {
            if min < -tol {
                return Err(Error::InvalidStochastic {
                    reason: "negative entry",
                    residual: min.to_f64_lossy(),
                });
            }
        }
        for i in 0..self.cols {
            let s: T = (0..self.rows).map(|j| self.get(j, i)).sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidStochastic {
                    reason: "column does not sum to one",
                    residual: (s - T::one()).abs().to_f64_lossy(),
                });
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `T[j][i]`: probability of output `j` given input `i`.
    pub fn get(&self, j: usize, i: usize) -> T {
        self.data[j * self.cols + i]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    /// `s' = T s`.
    pub fn apply(&self, p: &[T]) -> Result<Vec<T>> {
        if p.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "distribution of length {} for {} inputs",
                p.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|j| (0..self.cols).map(|i| self.get(j, i) * p[i]).sum())
            .collect())
    }

    /// `true` when every column is a point mass (within `tol`).
    pub fn is_deterministic(&self, tol: T) -> bool {
        (0..self.cols).all(|i| {
            (0..self.rows)
                .filter(|&j| self.get(j, i) > tol)
                .all(|j| (self.get(j, i) - T::one()).abs() <= tol)
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}
