use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

/// A projective measurement `{E_n}`: orthogonal Hermitian projectors summing to `I`.
#[derive(Debug, Clone)]
pub struct ProjectorSet<T: Real = f64> {
    dim: usize,
    projectors: Vec<ComplexMatrix<T>>,
    ranks: Vec<usize>,
    labels: Vec<usize>,
}

impl<T: Real> ProjectorSet<T> {
    pub fn new(projectors: Vec<ComplexMatrix<T>>) -> Result<Self> {
        Self::with_tol(projectors, T::default_tol())
    }

    pub fn with_tol(projectors: Vec<ComplexMatrix<T>>, tol: T) -> Result<Self> {
        let first = projectors.first().ok_or(Error::InvalidProjectors {
            reason: "empty projector list",
            residual: 0.0,
        })?;
        let d = first.require_square()?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for (n, e) in projectors.iter().enumerate() {
            if e.rows() != d || e.cols() != d {
                return Err(Error::DimensionMismatch(format!("projector {n} has wrong shape")));
            }
            let herm = e.hermitian_defect();
            if herm > tol {
                return Err(Error::InvalidProjectors {
                    reason: "projector is not Hermitian",
                    residual: herm.to_f64_lossy(),
                });
            }
            for (m, f) in projectors.iter().enumerate().skip(n) {
                let prod = e.matmul(f);
                let expected = if n == m { e.clone() } else { ComplexMatrix::zeros(d, d) };
                let residual = prod.dist(&expected);
                if residual > tol {
                    return Err(Error::InvalidProjectors {
                        reason: if n == m {
                            "not idempotent"
                        } else {
                            "not mutually orthogonal"
                        },
                        residual: residual.to_f64_lossy(),
                    });
                }
            }
            sum += e;
        }
        let residual = sum.dist(&ComplexMatrix::identity(d));
        if residual > tol {
            return Err(Error::InvalidProjectors {
                reason: "projectors do not sum to identity",
                residual: residual.to_f64_lossy(),
            });
        }
        let ranks = projectors
            .iter()
            .map(|e| e.trace().re.round().to_usize().unwrap_or(0))
            .collect();
        let labels = (0..projectors.len()).collect();
        Ok(Self {
            dim: d,
            projectors: projectors.into_iter().map(|e| e.hermitize()).collect(),
            ranks,
            labels,
        })
    }

    /// Rank-one projectors onto the computational basis.
    pub fn computational(d: usize) -> Self {
        let projectors: Vec<_> = (0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect();
        Self {
            dim: d,
            ranks: vec![1; d],
            labels: (0..d).collect(),
            projectors,
        }
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_basis(u: &ComplexMatrix<T>) -> Result<Self> {
        super::check_unitary(u, T::default_tol())?;
        let ops = (0..u.cols()).map(|k| ComplexMatrix::outer(&u.column(k))).collect();
        Self::new(ops)
    }

    /// `{(I+P)/2, (I−P)/2}` for a Hermitian involution `P`; `{I}` when `P = I`.
    pub fn from_pauli(p: &ComplexMatrix<T>) -> Result<Self> {
        let d = p.require_square()?;
        let id = ComplexMatrix::identity(d);
        if p.dist(&id) <= T::default_tol() {
            return Self::new(vec![id]);
        }
        let half = T::lit(0.5);
        Self::new(vec![(&id + p).scale(half), (&id - p).scale(half)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[ComplexMatrix<T>] {
        &self.projectors
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_rank_one(&self) -> bool {
        self.ranks.iter().all(|&r| r == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    #[test]
    fn computational_is_valid() {
        let p = ProjectorSet::<f64>::computational(3);
        assert!(ProjectorSet::new(p.projectors().to_vec()).is_ok());
        assert!(p.is_rank_one());
    }

    #[test]
    fn pauli_z_projectors() {
        let z = M::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let p = ProjectorSet::from_pauli(&z).unwrap();
        assert!(p.projectors()[0].approx_eq(&M::unit(2, 0, 0), 1e-15));
        assert!(p.projectors()[1].approx_eq(&M::unit(2, 1, 1), 1e-15));
        let id = ProjectorSet::from_pauli(&M::identity(2)).unwrap();
        assert_eq!(id.len(), 1);
        assert_eq!(id.ranks(), &[2]);
    }

    #[test]
    fn rejects_bad_sets() {
        let incomplete = ProjectorSet::new(vec![M::unit(2, 0, 0)]);
        assert!(matches!(incomplete, Err(Error::InvalidProjectors { .. })));
        let overlapping = ProjectorSet::new(vec![M::unit(2, 0, 0), M::identity(2)]);
        assert!(matches!(overlapping, Err(Error::InvalidProjectors { .. })));
        let not_proj = ProjectorSet::new(vec![M::diag(&[0.5, 0.5]), M::diag(&[0.5, 0.5])]);
        assert!(matches!(not_proj, Err(Error::InvalidProjectors { .. })));
    }
}
