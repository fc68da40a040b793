//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Eigenvalues (ascending) and the unitary whose columns are eigenvectors.
#[derive(Debug, Clone)]
pub struct HermEig<T: Real = f64> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermEig<T> {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let fv: Vec<T> = self.values.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            if fv[k] == T::zero() {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * fv[k];
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|x| x)
    }
}

const MAX_SWEEPS: usize = 100;

impl<T: Real> ComplexMatrix<T> {
    /// Eigendecomposition of a Hermitian matrix.
    pub fn herm_eig(&self) -> Result<HermEig<T>> {
        self.require_square()?;
        let scale = T::one().max(self.frobenius_norm());
        let defect = self.hermitian_defect();
        if defect > T::default_tol() * scale {
            return Err(Error::NotHermitian {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(self.herm_eig_unchecked())
    }

    /// Eigendecomposition of the Hermitian part, skipping the input check.
    pub fn herm_eig_unchecked(&self) -> HermEig<T> {
        let n = self.rows();
        let mut a = self.hermitize();
        let mut v = ComplexMatrix::<T>::identity(n);
        let eps = T::epsilon();
        let total = a.frobenius_norm();
        if n > 1 && total > T::zero() {
            for _ in 0..MAX_SWEEPS {
                let off = off_diagonal_norm(&a);
                if off <= eps * total {
                    break;
                }
                for p in 0..n - 1 {
                    for q in p + 1..n {
                        rotate(&mut a, &mut v, p, q, eps * total);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
        let values = order.iter().map(|&i| diag[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
        HermEig { values, vectors }
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p,q]` with the unitary `V = D·R` where `D` removes the
/// phase of `a[p,q]` and `R` is a real Givens rotation.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, floor: T) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= floor * T::epsilon() || mag == T::zero() {
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = if theta >= T::zero() {
        T::one() / (theta + (T::one() + theta * theta).sqrt())
    } else {
        -T::one() / (-theta + (T::one() + theta * theta).sqrt())
    };
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;
    // V restricted to (p,q): [[cs, sn], [-sn e^{-iφ}, cs e^{-iφ}]]
    let pc = phase.conj();
    let v_pp = cr(cs);
    let v_pq = cr(sn);
    let v_qp = pc * (-sn);
    let v_qq = pc * cs;
    let n = a.rows();
    // A <- A V (columns p, q)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * v_pp + aiq * v_qp;
        a[(i, q)] = aip * v_pq + aiq * v_qq;
    }
    // A <- V† A (rows p, q)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = v_pp.conj() * apj + v_qp.conj() * aqj;
        a[(q, j)] = v_pq.conj() * apj + v_qq.conj() * aqj;
    }
    a[(p, q)] = cr(T::zero());
    a[(q, p)] = cr(T::zero());
    let zero_im = |z: C<T>| cr(z.re);
    a[(p, p)] = zero_im(a[(p, p)]);
    a[(q, q)] = zero_im(a[(q, q)]);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * v_pp + viq * v_qp;
        v[(i, q)] = vip * v_pq + viq * v_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn random_hermitian(n: usize, seed: u64) -> M {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = M::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.hermitize()
    }

    #[test]
    fn diagonal_input() {
        let e = M::diag(&[2.0, 1.0]).herm_eig().unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = M::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = x.herm_eig().unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        // eigenvectors are fixed up to a global phase; compare projectors
        let minus = M::outer(&[cr(s), cr(-s)]);
        let plus = M::outer(&[cr(s), cr(s)]);
        assert!(M::outer(&e.vectors.column(0)).approx_eq(&minus, 1e-14));
        assert!(M::outer(&e.vectors.column(1)).approx_eq(&plus, 1e-14));
    }

    #[test]
    fn complex_two_by_two() {
        let m = M::from_complex_rows(&[&[(1.0, 0.0), (0.3, 0.4)], &[(0.3, -0.4), (-2.0, 0.0)]]);
        let e = m.herm_eig().unwrap();
        assert!(e.reconstruct().approx_eq(&m, 1e-14));
    }

    #[test]
    fn reconstruction_residuals_up_to_64() {
        for (n, seed) in [(3, 1), (7, 2), (16, 3), (33, 4), (64, 5)] {
            let m = random_hermitian(n, seed);
            let e = m.herm_eig().unwrap();
            let recon = e.reconstruct();
            assert!(recon.dist(&m) <= 1e-10 * m.frobenius_norm(), "n={n}");
            let vv = e.vectors.adjoint().matmul(&e.vectors);
            assert!(vv.dist(&M::identity(n)) <= 1e-10, "n={n}");
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let m = M::identity(5).scale(3.0);
        let e = m.herm_eig().unwrap();
        assert!(e.values.iter().all(|&x| (x - 3.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(m.herm_eig(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn works_in_single_precision() {
        let m = random_hermitian(8, 9).cast::<f32>();
        let e = m.herm_eig().unwrap();
        assert!(e.reconstruct().dist(&m) <= 1e-4);
    }
}
