//! Quantum channels on a single `d`-dimensional system.
//!
//! A [`Channel`] stores the trace-one Choi state `Φ = (I ⊗ N)(|Φ+⟩⟨Φ+|)`
//! on `[input-reference, output]`, together with a Kraus decomposition and
//! the row-major superoperator `S` (`vec(N(X)) = S·vec(X)`). All three are
//! computed when the channel is built.

mod gates;
mod projectors;
mod random;
mod stochastic;

use crate::error::{Error, Result};
use crate::matrix::{self, kron, permute_subsystems, ComplexMatrix, DensityMatrix};
use crate::scalar::{cr, Real};

pub use gates::{
    gate_unitary, named_gate, pauli_channel_t, pauli_index_from_str, pauli_index_to_str, pauli_matrix,
    random_clifford_unitary, unitary_channel,
};
pub use projectors::ProjectorSet;
pub use random::{
    random_channel, random_permutation_unitary, random_pure_state, random_qccro, random_qqcro, random_state,
    random_unitary,
};
pub use stochastic::StochasticMatrix;

/// Kraus operators whose Choi eigenvalue falls below this are dropped.
const KRAUS_DROP: f64 = 1e-12;

/// A completely positive trace-preserving map with `dim_in = dim_out = d`.
#[derive(Debug, Clone)]
pub struct Channel<T: Real = f64> {
    dim: usize,
    choi: ComplexMatrix<T>,
    kraus: Vec<ComplexMatrix<T>>,
    superop: ComplexMatrix<T>,
}

/// Reshuffles a superoperator into the trace-one Choi state.
pub(crate) fn choi_from_superop<T: Real>(s: &ComplexMatrix<T>, d: usize) -> ComplexMatrix<T> {
    let inv = T::one() / T::lit(d as f64);
    let mut c = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            for ci in 0..d {
                for e in 0..d {
                    c[(ci * d + a, e * d + b)] = s[(a * d + b, ci * d + e)] * inv;
                }
            }
        }
    }
    c
}

/// Inverse of [`choi_from_superop`].
pub(crate) fn superop_from_choi<T: Real>(c: &ComplexMatrix<T>, d: usize) -> ComplexMatrix<T> {
    let scale = T::lit(d as f64);
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            for ci in 0..d {
                for e in 0..d {
                    s[(a * d + b, ci * d + e)] = c[(ci * d + a, e * d + b)] * scale;
                }
            }
        }
    }
    s
}

fn superop_from_kraus<T: Real>(ops: &[ComplexMatrix<T>]) -> ComplexMatrix<T> {
    let d = ops[0].rows();
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for k in ops {
        s += &kron(k, &k.conj());
    }
    s
}

fn kraus_from_choi_matrix<T: Real>(choi: &ComplexMatrix<T>, d: usize) -> Vec<ComplexMatrix<T>> {
    let eig = choi.herm_eig_unchecked();
    let drop = T::lit(KRAUS_DROP);
    let dd = T::lit(d as f64);
    let mut ops = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda <= drop {
            continue;
        }
        let w = (dd * lambda).sqrt();
        // Φ = (1/d) Σ |K⟩⟩⟨⟨K| with |K⟩⟩[(i,a)] = K[a,i]
        ops.push(ComplexMatrix::from_fn(d, d, |a, i| eig.vectors[(i * d + a, k)] * w));
    }
    ops
}

fn dim_from_square(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d * d == n && d > 0).then_some(d)
}

impl<T: Real> Channel<T> {
    /// Builds a channel from its trace-one Choi state, validating complete
    /// positivity and trace preservation at the default tolerance.
    pub fn from_choi(choi: ComplexMatrix<T>) -> Result<Self> {
        Self::from_choi_tol(choi, T::default_tol())
    }

    pub fn from_choi_tol(choi: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let n = choi.require_square()?;
        let d = dim_from_square(n).ok_or_else(|| Error::DimensionMismatch(format!("Choi size {n} is not a square")))?;
        validate_choi(&choi, d, tol)?;
        let choi = choi.hermitize();
        let kraus = kraus_from_choi_matrix(&choi, d);
        let superop = superop_from_choi(&choi, d);
        Ok(Self {
            dim: d,
            choi,
            kraus,
            superop,
        })
    }

    /// Builds a channel from Kraus operators; `Σ K†K = I` must hold.
    pub fn from_kraus(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        Self::from_kraus_tol(ops, T::default_tol())
    }

    pub fn from_kraus_tol(ops: Vec<ComplexMatrix<T>>, tol: T) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty Kraus list".into()))?;
        let d = first.require_square()?;
        if ops.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &ops {
            sum += &k.adjoint().matmul(k);
        }
        let residual = sum.dist(&ComplexMatrix::identity(d));
        if residual > tol {
            return Err(Error::NotTracePreserving {
                residual: residual.to_f64_lossy(),
            });
        }
        let superop = superop_from_kraus(&ops);
        let choi = choi_from_superop(&superop, d).hermitize();
        Ok(Self {
            dim: d,
            choi,
            kraus: ops,
            superop,
        })
    }

    /// Builds a channel from a row-major superoperator.
    pub fn from_superop(s: ComplexMatrix<T>) -> Result<Self> {
        Self::from_superop_tol(s, T::default_tol())
    }

    pub fn from_superop_tol(s: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let n = s.require_square()?;
        let d = dim_from_square(n).ok_or_else(|| Error::DimensionMismatch(format!("superoperator size {n}")))?;
        Self::from_choi_tol(choi_from_superop(&s, d), tol)
    }

    /// Like [`Channel::from_choi`] but first repairs small numerical defects:
    /// Hermitises, clips negative eigenvalues and renormalises the input
    /// marginal to exactly `I/d`.
    pub fn from_choi_projected(choi: &ComplexMatrix<T>) -> Result<Self> {
        let n = choi.require_square()?;
        let d = dim_from_square(n).ok_or_else(|| Error::DimensionMismatch(format!("Choi size {n} is not a square")))?;
        let eig = choi.hermitize().herm_eig_unchecked();
        let clipped = eig.reconstruct_with(|x| x.max(T::zero()));
        Self::from_choi(normalize_input_marginal(&clipped, d)?)
    }

    pub fn unitary(u: &ComplexMatrix<T>) -> Result<Self> {
        check_unitary(u, T::default_tol())?;
        Self::from_kraus(vec![u.clone()])
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(d)]).expect("identity is CPTP")
    }

    /// Completely depolarising channel `ρ ↦ I/d`.
    pub fn completely_depolarizing(d: usize) -> Self {
        let choi = ComplexMatrix::identity(d * d).scale(T::one() / T::lit((d * d) as f64));
        Self::from_choi(choi).expect("replacer channel is CPTP")
    }

    /// State-preparation channel `ρ ↦ σ`.
    pub fn preparation(sigma: &DensityMatrix<T>) -> Self {
        let d = sigma.dim();
        let choi = kron(
            &ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64)),
            sigma.matrix(),
        );
        Self::from_choi(choi).expect("preparation channel is CPTP")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &ComplexMatrix<T> {
        &self.choi
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn superop(&self) -> &ComplexMatrix<T> {
        &self.superop
    }

    /// Kraus operators re-extracted from the Choi eigendecomposition.
    pub fn kraus_from_choi(&self) -> Vec<ComplexMatrix<T>> {
        kraus_from_choi_matrix(&self.choi, self.dim)
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        Ok(DensityMatrix::from_trusted(self.apply_operator(rho.matrix())?))
    }

    /// Applies the (linear) map to an arbitrary operator via the superoperator.
    pub fn apply_operator(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "channel of dimension {} applied to {}x{}",
                self.dim,
                x.rows(),
                x.cols()
            )));
        }
        let v = self.superop.mat_vec(x.as_slice());
        Ok(ComplexMatrix::unvec(self.dim, self.dim, &v))
    }

    /// `N(ρ) = d·tr₀[(ρᵀ ⊗ I) Φ]`, computed from the Choi state alone.
    pub fn apply_via_choi(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let d = self.dim;
        if x.rows() != d || x.cols() != d {
            return Err(Error::DimensionMismatch("operator/channel dimension".into()));
        }
        let lifted = kron(&x.transpose(), &ComplexMatrix::identity(d)).matmul(&self.choi);
        Ok(matrix::partial_trace(&lifted, [d, d], 1)?.scale(T::lit(d as f64)))
    }

    /// Applies the Kraus sum `Σ K x K†`.
    pub fn apply_via_kraus(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch("operator/channel dimension".into()));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += &x.conjugate_by(k);
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        compose(self, other)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        tensor(self, other)
    }

    /// `‖Φ_self − Φ_other‖_F`.
    pub fn choi_distance(&self, other: &Self) -> T {
        self.choi.dist(&other.choi)
    }

    pub fn cast<U: Real>(&self) -> Channel<U> {
        Channel {
            dim: self.dim,
            choi: self.choi.cast(),
            kraus: self.kraus.iter().map(|k| k.cast()).collect(),
            superop: self.superop.cast(),
        }
    }
}

/// Validates complete positivity and trace preservation of a Choi state.
pub fn validate_choi<T: Real>(choi: &ComplexMatrix<T>, d: usize, tol: T) -> Result<()> {
    if choi.rows() != d * d || choi.cols() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "Choi state must be {}x{}",
            d * d,
            d * d
        )));
    }
    let defect = choi.hermitian_defect();
    if defect > tol {
        return Err(Error::NotHermitian {
            defect: defect.to_f64_lossy(),
        });
    }
    let marginal = matrix::partial_trace(choi, [d, d], 0)?;
    let target = ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64));
    let residual = marginal.dist(&target);
    if residual > tol {
        return Err(Error::NotTracePreserving {
            residual: residual.to_f64_lossy(),
        });
    }
    let min = matrix::min_eigenvalue(choi);
    if min < -tol {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: min.to_f64_lossy(),
        });
    }
    Ok(())
}

/// `(R^{-1/2} ⊗ I) X (R^{-1/2} ⊗ I) / d` with `R = tr₁ X`; the result has
/// input marginal exactly `I/d`.
pub(crate) fn normalize_input_marginal<T: Real>(x: &ComplexMatrix<T>, d: usize) -> Result<ComplexMatrix<T>> {
    let r = matrix::partial_trace(x, [d, d], 0)?;
    let eig = r.herm_eig_unchecked();
    let floor = T::epsilon() * T::lit(1e3) * T::one().max(r.frobenius_norm());
    if eig.values.first().is_none_or(|&v| v <= floor) {
        return Err(Error::Unsupported(
            "input marginal is singular; cannot normalise".into(),
        ));
    }
    let r_inv_sqrt = eig.reconstruct_with(|v| T::one() / v.sqrt());
    let lift = kron(&r_inv_sqrt, &ComplexMatrix::identity(d));
    Ok(x.conjugate_by(&lift).scale(T::one() / T::lit(d as f64)).hermitize())
}

pub(crate) fn check_unitary<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<()> {
    let d = u.require_square()?;
    let residual = u.adjoint().matmul(u).dist(&ComplexMatrix::identity(d));
    if residual > tol {
        return Err(Error::NotUnitary {
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(())
}

fn same_dim<T: Real>(a: &Channel<T>, b: &Channel<T>) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "channels of dimension {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(())
}

/// `a ∘ b` (apply `b` first).
pub fn compose<T: Real>(a: &Channel<T>, b: &Channel<T>) -> Result<Channel<T>> {
    same_dim(a, b)?;
    let s = a.superop.matmul(&b.superop);
    let d = a.dim;
    let choi = choi_from_superop(&s, d).hermitize();
    let kraus = kraus_from_choi_matrix(&choi, d);
    Ok(Channel {
        dim: d,
        choi,
        kraus,
        superop: s,
    })
}

/// Composes a list in mathematical order: `chain[0] ∘ chain[1] ∘ …`.
pub fn compose_all<T: Real>(chain: &[&Channel<T>]) -> Result<Channel<T>> {
    let (last, rest) = chain
        .split_last()
        .ok_or_else(|| Error::DimensionMismatch("empty composition".into()))?;
    let mut s = last.superop.clone();
    for ch in rest.iter().rev() {
        same_dim(ch, last)?;
        s = ch.superop.matmul(&s);
    }
    let d = last.dim;
    let choi = choi_from_superop(&s, d).hermitize();
    let kraus = kraus_from_choi_matrix(&choi, d);
    Ok(Channel {
        dim: d,
        choi,
        kraus,
        superop: s,
    })
}

/// `a ⊗ b` with the Choi state reordered to `[in_a in_b | out_a out_b]`.
pub fn tensor<T: Real>(a: &Channel<T>, b: &Channel<T>) -> Channel<T> {
    let (da, db) = (a.dim, b.dim);
    let raw = kron(&a.choi, &b.choi);
    let choi = permute_subsystems(&raw, &[da, da, db, db], &[0, 2, 1, 3]).expect("tensor permutation is valid");
    let superop = superop_from_choi(&choi, da * db);
    let kraus = if a.kraus.len() * b.kraus.len() <= 64 {
        a.kraus
            .iter()
            .flat_map(|ka| b.kraus.iter().map(move |kb| kron(ka, kb)))
            .collect()
    } else {
        kraus_from_choi_matrix(&choi, da * db)
    };
    Channel {
        dim: da * db,
        choi,
        kraus,
        superop,
    }
}

/// Reduced channel on subsystem `keep` of a bipartite channel, with the
/// discarded input fed the maximally mixed state.
pub fn channel_partial_trace<T: Real>(c: &Channel<T>, dims: [usize; 2], keep: usize) -> Result<Channel<T>> {
    let [d0, d1] = dims;
    if d0 * d1 != c.dim {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} split as {:?}",
            c.dim, dims
        )));
    }
    let all = [d0, d1, d0, d1];
    let (perm, kept, dropped) = match keep {
        0 => ([0, 2, 1, 3], d0, d1),
        1 => ([1, 3, 0, 2], d1, d0),
        _ => return Err(Error::IndexOutOfRange { index: keep, limit: 2 }),
    };
    let reordered = permute_subsystems(&c.choi, &all, &perm)?;
    let reduced = matrix::partial_trace(&reordered, [kept * kept, dropped * dropped], 0)?;
    Channel::from_choi(reduced)
}

/// Convex combination `Σ w_k N_k`.
pub fn mix<T: Real>(channels: &[&Channel<T>], weights: &[T]) -> Result<Channel<T>> {
    let first = channels
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty mixture".into()))?;
    if channels.len() != weights.len() {
        return Err(Error::DimensionMismatch("weights/channels length".into()));
    }
    let total: T = weights.iter().copied().sum();
    if weights.iter().any(|&w| w < T::zero()) || (total - T::one()).abs() > T::default_tol() {
        return Err(Error::Unsupported(
            "mixture weights must be a probability vector".into(),
        ));
    }
    let mut choi = ComplexMatrix::zeros(first.choi.rows(), first.choi.cols());
    for (ch, &w) in channels.iter().zip(weights) {
        same_dim(first, ch)?;
        choi += &ch.choi.scale(w);
    }
    Channel::from_choi(choi)
}

/// Computational-basis dephasing `Δ(ρ) = Σ |i⟩⟨i|ρ|i⟩⟨i|`.
pub fn dephasing<T: Real>(d: usize) -> Channel<T> {
    let ops = (0..d).map(|i| ComplexMatrix::unit(d, i, i)).collect();
    Channel::from_kraus(ops).expect("dephasing is CPTP")
}

/// Measure-and-reprepare channel `T_E(ρ) = Σ tr(ρE_n) E_n / tr(E_n)`.
pub fn te_channel<T: Real>(p: &ProjectorSet<T>) -> Result<Channel<T>> {
    let d = p.dim();
    let inv_d = T::one() / T::lit(d as f64);
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for (e, &rank) in p.projectors().iter().zip(p.ranks()) {
        if rank == 0 {
            return Err(Error::InvalidProjectors {
                reason: "zero-rank projector",
                residual: 0.0,
            });
        }
        // Φ_{T_E} = (1/d) Σ_n E_nᵀ ⊗ E_n / tr(E_n)
        choi += &kron(&e.transpose(), e).scale(inv_d / T::lit(rank as f64));
    }
    Channel::from_choi(choi)
}

/// Block dephasing `Δ_E(ρ) = Σ E_n ρ E_n`.
pub fn block_dephasing<T: Real>(p: &ProjectorSet<T>) -> Result<Channel<T>> {
    Channel::from_kraus(p.projectors().to_vec())
}

/// Superoperator of `Δ` on dimension `d`.
pub(crate) fn dephasing_superop<T: Real>(d: usize) -> ComplexMatrix<T> {
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        s[(a * d + a, a * d + a)] = cr(T::one());
    }
    s
}

/// Superoperator of `T_E`: `Σ_n vec(E_n)·vec(E_nᵀ)ᵀ / tr(E_n)`.
pub(crate) fn te_superop<T: Real>(p: &ProjectorSet<T>) -> ComplexMatrix<T> {
    let d = p.dim();
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for (e, &rank) in p.projectors().iter().zip(p.ranks()) {
        let w = T::one() / T::lit(rank.max(1) as f64);
        let out = e.as_slice();
        for a in 0..d {
            for b in 0..d {
                let col = e[(b, a)] * w;
                if col.norm_sqr() == T::zero() {
                    continue;
                }
                for (row, &v) in out.iter().enumerate() {
                    s[(row, a * d + b)] += v * col;
                }
            }
        }
    }
    s
}
