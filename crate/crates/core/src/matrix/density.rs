use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real};

/// A validated quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tol(mat, T::default_tol())
    }

    pub fn with_tol(mat: ComplexMatrix<T>, tol: T) -> Result<Self> {
        mat.require_square()?;
        let defect = mat.hermitian_defect();
        if defect > tol {
            return Err(Error::InvalidDensity {
                reason: "not Hermitian",
                residual: defect.to_f64_lossy(),
            });
        }
        let tr = mat.trace();
        let tr_err = (tr - cr(T::one())).norm();
        if tr_err > tol {
            return Err(Error::InvalidDensity {
                reason: "trace differs from one",
                residual: tr_err.to_f64_lossy(),
            });
        }
        let min = super::min_eigenvalue(&mat);
        if min < -tol {
            return Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
                residual: (-min).to_f64_lossy(),
            });
        }
        Ok(Self { mat: mat.hermitize() })
    }

    /// Wraps a matrix already known to be a state (used internally after
    /// applying a validated channel).
    pub(crate) fn from_trusted(mat: ComplexMatrix<T>) -> Self {
        Self { mat: mat.hermitize() }
    }

    /// `|v⟩⟨v|/⟨v|v⟩`.
    pub fn pure(v: &[crate::scalar::C<T>]) -> Result<Self> {
        let norm2: T = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= T::zero() {
            return Err(Error::InvalidDensity {
                reason: "zero vector",
                residual: 0.0,
            });
        }
        Ok(Self {
            mat: ComplexMatrix::outer(v).scale(T::one() / norm2),
        })
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis(d: usize, k: usize) -> Self {
        Self {
            mat: ComplexMatrix::unit(d, k, k),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64)),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: super::kron(&self.mat, &other.mat),
        }
    }

    /// Von Neumann entropy in bits, `0·log 0 = 0`.
    pub fn entropy(&self) -> T {
        von_neumann_entropy(&self.mat)
    }
}

/// `−Σ λ log₂ λ` of a Hermitian matrix, with eigenvalues clamped to `[0, 1]`.
pub(crate) fn von_neumann_entropy<T: Real>(m: &ComplexMatrix<T>) -> T {
    let eig = m.herm_eig_unchecked();
    eig.values
        .iter()
        .map(|&l| l.max(T::zero()).min(T::one()))
        .filter(|&l| l > T::zero())
        .map(|l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy (bits) of a state.
pub fn von_neumann_entropy_of<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DensityMatrix<f64>;
    type M = ComplexMatrix<f64>;

    #[test]
    fn entropy_examples() {
        assert_eq!(D::basis(2, 0).entropy(), 0.0);
        assert!((D::maximally_mixed(2).entropy() - 1.0).abs() < 1e-12);
        let r = D::new(M::diag(&[0.25, 0.25, 0.25, 0.25])).unwrap();
        assert!((r.entropy() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            D::new(M::diag(&[0.5, 0.4])),
            Err(Error::InvalidDensity {
                reason: "trace differs from one",
                ..
            })
        ));
        assert!(matches!(
            D::new(M::diag(&[1.5, -0.5])),
            Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
                ..
            })
        ));
        let nh = M::from_complex_rows(&[&[(0.5, 0.0), (0.1, 0.0)], &[(0.2, 0.0), (0.5, 0.0)]]);
        assert!(matches!(
            D::new(nh),
            Err(Error::InvalidDensity {
                reason: "not Hermitian",
                ..
            })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalues_clamped() {
        let r = D::with_tol(M::diag(&[1.0 + 1e-12, -1e-12]), 1e-9).unwrap();
        assert!(r.entropy().abs() < 1e-9);
    }
}
