//! Dense semidefinite programs in standard form
//!
//! ```text
//! minimise   Σ_k Re tr(C_k X_k) + c₀
//! subject to Σ_k Re tr(A_{ik} X_k) = b_i,   X_k ⪰ 0
//! ```
//!
//! over Hermitian blocks `X_k`. Affine PSD constraints such as `ψ ⪰ A` are
//! modelled by a slack block. The solver is an alternating-direction method
//! on the dual (projection onto the PSD cone by eigendecomposition, exact
//! projection onto the affine set through orthonormalised constraints).

mod vectorize;

use thiserror::Error;

use crate::matrix::ComplexMatrix;
use crate::scalar::Real;

pub use vectorize::{hermitian_basis, smat, svec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("primal infeasible (feasibility residual stalled at {residual:e})")]
    Infeasible { residual: f64 },
    #[error("dual infeasible / unbounded (dual residual stalled at {residual:e})")]
    Unbounded { residual: f64 },
    #[error(
        "no convergence after {iterations} iterations \
         (primal {primal_feas:e}, dual {dual_feas:e}, gap {gap:e})"
    )]
    NotConverged {
        iterations: usize,
        primal_feas: f64,
        dual_feas: f64,
        gap: f64,
    },
}

/// One scalar equality `Σ_k Re tr(A_k X_k) = rhs`.
#[derive(Debug, Clone)]
pub struct Equality<T: Real = f64> {
    pub terms: Vec<(usize, ComplexMatrix<T>)>,
    pub rhs: T,
}

/// Block index paired with the Hilbert–Schmidt adjoint of a linear map.
pub type AdjointMap<'a, T> = (usize, &'a dyn Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>);

#[derive(Debug, Clone, Default)]
pub struct SdpProblem<T: Real = f64> {
    blocks: Vec<usize>,
    objective: Vec<Option<ComplexMatrix<T>>>,
    offset: T,
    equalities: Vec<Equality<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions<T: Real = f64> {
    pub tol_gap: T,
    pub tol_feas: T,
    pub max_iters: usize,
}

impl<T: Real> Default for SdpOptions<T> {
    fn default() -> Self {
        if T::epsilon() < T::lit(1e-10) {
            Self {
                tol_gap: T::lit(1e-7),
                tol_feas: T::lit(1e-8),
                max_iters: 200_000,
            }
        } else {
            Self {
                tol_gap: T::lit(1e-4),
                tol_feas: T::lit(1e-4),
                max_iters: 20_000,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Converged,
    /// Iteration budget exhausted; the solution holds the last iterate.
    NotConverged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals<T: Real = f64> {
    /// Relative equality violation `‖A(X) − b‖ / (1 + ‖b‖)`; blocks are PSD by construction.
    pub primal_feas: T,
    /// Relative dual violation `‖C − A*(y) − S‖ / (1 + ‖C‖)`.
    pub dual_feas: T,
    /// `|p − d| / (1 + |p| + |d|)`.
    pub gap: T,
}

#[derive(Debug, Clone)]
pub struct SdpSolution<T: Real = f64> {
    pub status: SdpStatus,
    pub primal_value: T,
    pub dual_value: T,
    pub primal_vars: Vec<ComplexMatrix<T>>,
    /// Dual slack `S_k = C_k − Σ_i y_i A_{ik}` for each block.
    pub dual_vars: Vec<ComplexMatrix<T>>,
    /// Multipliers of the equalities, in insertion order.
    pub dual_eq: Vec<T>,
    pub residuals: Residuals<T>,
    pub iterations: usize,
}

impl<T: Real> SdpSolution<T> {
    pub fn converged(&self) -> bool {
        self.status == SdpStatus::Converged
    }

    /// Absolute duality gap `|primal − dual|`.
    pub fn abs_gap(&self) -> T {
        (self.primal_value - self.dual_value).abs()
    }

    /// Errors unless converged.
    pub fn require_converged(self) -> Result<Self, SdpError> {
        if self.converged() {
            Ok(self)
        } else {
            Err(SdpError::NotConverged {
                iterations: self.iterations,
                primal_feas: self.residuals.primal_feas.to_f64_lossy(),
                dual_feas: self.residuals.dual_feas.to_f64_lossy(),
                gap: self.residuals.gap.to_f64_lossy(),
            })
        }
    }
}

impl<T: Real> SdpProblem<T> {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            objective: Vec::new(),
            offset: T::zero(),
            equalities: Vec::new(),
        }
    }

    /// Adds a PSD block of size `dim` and returns its index.
    pub fn add_block(&mut self, dim: usize) -> usize {
        self.blocks.push(dim);
        self.objective.push(None);
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_equalities(&self) -> usize {
        self.equalities.len()
    }

    fn check_term(&self, block: usize, m: &ComplexMatrix<T>) -> Result<(), SdpError> {
        let dim = *self
            .blocks
            .get(block)
            .ok_or_else(|| SdpError::InvalidProblem(format!("no block {block}")))?;
        if m.rows() != dim || m.cols() != dim {
            return Err(SdpError::InvalidProblem(format!(
                "coefficient {}x{} for block of size {dim}",
                m.rows(),
                m.cols()
            )));
        }
        let scale = T::one().max(m.frobenius_norm());
        if m.hermitian_defect() > T::default_tol() * scale {
            return Err(SdpError::InvalidProblem("coefficient matrix is not Hermitian".into()));
        }
        Ok(())
    }

    /// Sets `C_k`; the objective is `Σ_k Re tr(C_k X_k) + offset`.
    pub fn set_objective(&mut self, block: usize, c: ComplexMatrix<T>) -> Result<(), SdpError> {
        self.check_term(block, &c)?;
        self.objective[block] = Some(c.hermitize());
        Ok(())
    }

    pub fn set_objective_offset(&mut self, offset: T) {
        self.offset = offset;
    }

    pub fn add_equality(&mut self, terms: Vec<(usize, ComplexMatrix<T>)>, rhs: T) -> Result<(), SdpError> {
        for (k, m) in &terms {
            self.check_term(*k, m)?;
        }
        let terms = terms.into_iter().map(|(k, m)| (k, m.hermitize())).collect();
        self.equalities.push(Equality { terms, rhs });
        Ok(())
    }

    /// Imposes the Hermitian matrix identity `Σ_k L_k(X_k) = B` by testing it
    /// against an orthonormal Hermitian basis of the output space. Each map is
    /// supplied through its Hilbert–Schmidt adjoint `L_k†`.
    pub fn add_matrix_equality(
        &mut self,
        adjoint_maps: &[AdjointMap<'_, T>],
        rhs: &ComplexMatrix<T>,
    ) -> Result<(), SdpError> {
        for g in hermitian_basis::<T>(rhs.rows()) {
            let terms = adjoint_maps.iter().map(|(k, f)| (*k, f(&g))).collect();
            self.add_equality(terms, g.real_pairing(rhs))?;
        }
        Ok(())
    }

    fn layout(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.blocks.len() + 1);
        let mut acc = 0;
        for &n in &self.blocks {
            offsets.push(acc);
            acc += n * n;
        }
        offsets.push(acc);
        offsets
    }
}

/// Rows of `A` orthonormalised: `Q = L·A`, `QQᵀ = I`. Redundant rows are dropped.
struct Orthonormal<T: Real> {
    q: Vec<Vec<T>>,
    l: Vec<Vec<T>>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

fn orthonormalize<T: Real>(rows: &[Vec<T>]) -> Orthonormal<T> {
    let m = rows.len();
    let mut q: Vec<Vec<T>> = Vec::new();
    let mut l: Vec<Vec<T>> = Vec::new();
    let drop_tol = T::epsilon().sqrt() * T::lit(1e-2);
    for (i, row) in rows.iter().enumerate() {
        let scale = norm(row);
        if scale == T::zero() {
            continue;
        }
        let mut v = row.clone();
        let mut coef = vec![T::zero(); m];
        coef[i] = T::one();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for (qk, lk) in q.iter().zip(&l) {
                let p = dot(qk, &v);
                if p != T::zero() {
                    axpy(-p, qk, &mut v);
                    axpy(-p, lk, &mut coef);
                }
            }
        }
        let nv = norm(&v);
        if nv <= drop_tol * scale {
            continue;
        }
        let inv = T::one() / nv;
        v.iter_mut().for_each(|x| *x *= inv);
        coef.iter_mut().for_each(|x| *x *= inv);
        q.push(v);
        l.push(coef);
    }
    Orthonormal { q, l }
}

struct Blocks<'a> {
    dims: &'a [usize],
    offsets: Vec<usize>,
}

impl Blocks<'_> {
    /// Splits `v` into its PSD part `S = Π(v)` and `Π(−v)`, block by block.
    fn split_psd<T: Real>(&self, v: &[T], pos: &mut [T], neg: &mut [T]) {
        for (k, &n) in self.dims.iter().enumerate() {
            let r = self.offsets[k]..self.offsets[k + 1];
            let m = smat(&v[r.clone()], n);
            let eig = m.herm_eig_unchecked();
            let p = eig.reconstruct_with(|x| x.max(T::zero()));
            let q = eig.reconstruct_with(|x| (-x).max(T::zero()));
            svec(&p, &mut pos[r.clone()]);
            svec(&q, &mut neg[r]);
        }
    }
}

/// Solves the problem with the dual alternating-direction method.
///
/// Each iteration: `y = μ(b − Qx) + Q(c − s)`, `V = c − Qᵀy − μx`,
/// `s = Π_PSD(V)`, `x = Π_PSD(−V)/μ`, with `μ` rebalanced from the ratio of
/// primal and dual residuals.
pub fn solve<T: Real>(p: &SdpProblem<T>, opts: &SdpOptions<T>) -> Result<SdpSolution<T>, SdpError> {
    if p.blocks.is_empty() {
        return Err(SdpError::InvalidProblem("no variables".into()));
    }
    let offsets = p.layout();
    let n = offsets[p.blocks.len()];
    let blocks = Blocks {
        dims: &p.blocks,
        offsets: offsets.clone(),
    };

    let mut c = vec![T::zero(); n];
    for (k, obj) in p.objective.iter().enumerate() {
        if let Some(m) = obj {
            svec(m, &mut c[offsets[k]..offsets[k + 1]]);
        }
    }
    let rows: Vec<Vec<T>> = p
        .equalities
        .iter()
        .map(|eq| {
            let mut row = vec![T::zero(); n];
            for (k, m) in &eq.terms {
                let mut buf = vec![T::zero(); m.rows() * m.rows()];
                svec(m, &mut buf);
                axpy(T::one(), &buf, &mut row[offsets[*k]..offsets[*k + 1]]);
            }
            row
        })
        .collect();
    let b_orig: Vec<T> = p.equalities.iter().map(|e| e.rhs).collect();
    let ortho = orthonormalize(&rows);
    let r = ortho.q.len();
    let b: Vec<T> = ortho.l.iter().map(|lk| dot(lk, &b_orig)).collect();

    let scale_c = T::one().max(norm(&c));
    let scale_b = T::one().max(norm(&b));
    let cs: Vec<T> = c.iter().map(|&x| x / scale_c).collect();
    let bs: Vec<T> = b.iter().map(|&x| x / scale_b).collect();
    let norm_cs = norm(&cs);
    let norm_bs = norm(&bs);

    let q_mul = |x: &[T]| -> Vec<T> { ortho.q.iter().map(|qk| dot(qk, x)).collect() };
    let qt_mul = |y: &[T]| -> Vec<T> {
        let mut out = vec![T::zero(); n];
        for (qk, &yk) in ortho.q.iter().zip(y) {
            if yk != T::zero() {
                axpy(yk, qk, &mut out);
            }
        }
        out
    };

    let mut x = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut y = vec![T::zero(); r];
    let mut v = vec![T::zero(); n];
    let mut mu = T::one();
    let (mu_min, mu_max) = (T::lit(1e-6), T::lit(1e6));

    let mut status = SdpStatus::NotConverged;
    let mut iterations = 0;
    let stall_window = (opts.max_iters / 10).max(1);
    let stall_level = T::lit(1e-4);
    let (mut best_p, mut best_p_at) = (T::infinity(), 0usize);
    let (mut best_d, mut best_d_at) = (T::infinity(), 0usize);
    let check_every = 10;

    for k in 1..=opts.max_iters {
        iterations = k;
        let qx = q_mul(&x);
        let c_minus_s: Vec<T> = cs.iter().zip(&s).map(|(a, b)| *a - *b).collect();
        let q_cs = q_mul(&c_minus_s);
        for i in 0..r {
            y[i] = mu * (bs[i] - qx[i]) + q_cs[i];
        }
        let aty = qt_mul(&y);
        for i in 0..n {
            v[i] = cs[i] - aty[i] - mu * x[i];
        }
        let mut neg = vec![T::zero(); n];
        blocks.split_psd(&v, &mut s, &mut neg);
        let inv_mu = T::one() / mu;
        for i in 0..n {
            x[i] = neg[i] * inv_mu;
        }

        if k % check_every != 0 && k != opts.max_iters {
            continue;
        }
        let qx = q_mul(&x);
        let pres: Vec<T> = qx.iter().zip(&bs).map(|(a, b)| *a - *b).collect();
        let aty = qt_mul(&y);
        let dres: Vec<T> = (0..n).map(|i| cs[i] - aty[i] - s[i]).collect();
        let pinf = norm(&pres) / (T::one() + norm_bs);
        let dinf = norm(&dres) / (T::one() + norm_cs);
        let pobj = dot(&cs, &x);
        let dobj = dot(&bs, &y);
        let gap = (pobj - dobj).abs() / (T::one() + pobj.abs() + dobj.abs());
        if pinf <= opts.tol_feas && dinf <= opts.tol_feas && gap <= opts.tol_gap {
            status = SdpStatus::Converged;
            break;
        }
        if pinf < best_p * T::lit(0.99) {
            best_p = pinf;
            best_p_at = k;
        }
        if dinf < best_d * T::lit(0.99) {
            best_d = dinf;
            best_d_at = k;
        }
        if pinf > stall_level && k - best_p_at >= stall_window {
            return Err(SdpError::Infeasible {
                residual: pinf.to_f64_lossy(),
            });
        }
        if dinf > stall_level && k - best_d_at >= stall_window {
            return Err(SdpError::Unbounded {
                residual: dinf.to_f64_lossy(),
            });
        }
        let ratio = pinf / dinf.max(T::min_positive_value());
        if ratio > T::lit(5.0) {
            mu = (mu * T::lit(1.5)).min(mu_max);
        } else if ratio < T::lit(0.2) {
            mu = (mu / T::lit(1.5)).max(mu_min);
        }
    }

    // unscale
    let x_full: Vec<T> = x.iter().map(|&v| v * scale_b).collect();
    let s_full: Vec<T> = s.iter().map(|&v| v * scale_c).collect();
    let y_q: Vec<T> = y.iter().map(|&v| v * scale_c).collect();
    let mut dual_eq = vec![T::zero(); b_orig.len()];
    for (lk, &yk) in ortho.l.iter().zip(&y_q) {
        axpy(yk, lk, &mut dual_eq);
    }
    let primal_value = dot(&c, &x_full) + p.offset;
    let dual_value = dot(&b, &y_q) + p.offset;

    // residuals against the original constraint rows
    let viol: Vec<T> = rows
        .iter()
        .zip(&b_orig)
        .map(|(row, &bi)| dot(row, &x_full) - bi)
        .collect();
    let primal_feas = norm(&viol) / (T::one() + norm(&b_orig));
    let mut at_y = vec![T::zero(); n];
    for (row, &yi) in rows.iter().zip(&dual_eq) {
        axpy(yi, row, &mut at_y);
    }
    let dres: Vec<T> = (0..n).map(|i| c[i] - at_y[i] - s_full[i]).collect();
    let dual_feas = norm(&dres) / (T::one() + norm(&c));
    let gap = (primal_value - dual_value).abs() / (T::one() + primal_value.abs() + dual_value.abs());
    let residuals = Residuals {
        primal_feas,
        dual_feas,
        gap,
    };

    let unpack = |v: &[T]| -> Vec<ComplexMatrix<T>> {
        p.blocks
            .iter()
            .enumerate()
            .map(|(k, &dim)| smat(&v[offsets[k]..offsets[k + 1]], dim))
            .collect()
    };
    Ok(SdpSolution {
        status,
        primal_value,
        dual_value,
        primal_vars: unpack(&x_full),
        dual_vars: unpack(&s_full),
        dual_eq,
        residuals,
        iterations,
    })
}

/// Dual matrix attached to the PSD constraint of `block`, Hermitised.
pub fn extract_dual_witness<T: Real>(s: &SdpSolution<T>, block: usize) -> Result<ComplexMatrix<T>, SdpError> {
    if !s.converged() {
        return Err(SdpError::NotConverged {
            iterations: s.iterations,
            primal_feas: s.residuals.primal_feas.to_f64_lossy(),
            dual_feas: s.residuals.dual_feas.to_f64_lossy(),
            gap: s.residuals.gap.to_f64_lossy(),
        });
    }
    s.dual_vars
        .get(block)
        .map(ComplexMatrix::hermitize)
        .ok_or_else(|| SdpError::InvalidProblem(format!("no block {block}")))
}
