//! State-discrimination game with a computational-basis measurement.
//!
//! Alice sends `σ_i`, the channel acts, Bob measures `{|j⟩⟨j|}` and the
//! pair `(i, j)` pays `α_ij`. Alice's sampling distribution is folded into
//! `α`, so `p(N, G) = Σ_ij α_ij ⟨j|N(σ_i)|j⟩ = tr(W_G Φ_N)` with
//! `W_G = d Σ_ij α_ij σ_iᵀ ⊗ |j⟩⟨j|`.

use crate::channels::Channel;
use crate::cro::probe_states;
use crate::error::{Error, Result};
use crate::matrix::{kron, solve_real, ComplexMatrix, DensityMatrix, RealMatrix};
use crate::measures::{dephase_output, robustness, RobustnessResult};
use crate::scalar::{cr, Real};
use crate::sdp::{self, hermitian_basis, svec, SdpOptions, SdpProblem};

/// Range of payoffs attainable by qcCRO channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameCertificate<T: Real = f64> {
    pub qccro_min: T,
    pub qccro_max: T,
}

#[derive(Debug, Clone)]
pub struct GameSpec<T: Real = f64> {
    dim: usize,
    states: Vec<DensityMatrix<T>>,
    /// `payoffs[i][j] = α_ij`.
    payoffs: Vec<Vec<T>>,
    certificate: Option<GameCertificate<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

impl<T: Real> GameSpec<T> {
    pub fn new(states: Vec<DensityMatrix<T>>, payoffs: Vec<Vec<T>>) -> Result<Self> {
        let dim = states
            .first()
            .map(DensityMatrix::dim)
            .ok_or_else(|| Error::DimensionMismatch("game without states".into()))?;
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch("game states differ in dimension".into()));
        }
        if payoffs.len() != states.len() || payoffs.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "payoff table must be {}x{dim}",
                states.len()
            )));
        }
        if payoffs.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::Unsupported("payoffs must be finite".into()));
        }
        Ok(Self {
            dim,
            states,
            payoffs,
            certificate: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[DensityMatrix<T>] {
        &self.states
    }

    pub fn payoffs(&self) -> &[Vec<T>] {
        &self.payoffs
    }

    pub fn certificate(&self) -> Option<&GameCertificate<T>> {
        self.certificate.as_ref()
    }

    /// Computes and attaches the qcCRO payoff range.
    pub fn certify(&mut self) -> Result<GameCertificate<T>> {
        let (qccro_min, _) = extremal_payoff_over_qccro(self, Direction::Min)?;
        let (qccro_max, _) = extremal_payoff_over_qccro(self, Direction::Max)?;
        let cert = GameCertificate { qccro_min, qccro_max };
        self.certificate = Some(cert);
        Ok(cert)
    }

    /// `W_G = d Σ_ij α_ij σ_iᵀ ⊗ |j⟩⟨j|`.
    pub fn witness_operator(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        let dd = T::lit(d as f64);
        let mut w = ComplexMatrix::zeros(d * d, d * d);
        for (sigma, row) in self.states.iter().zip(&self.payoffs) {
            let st = sigma.matrix().transpose();
            for (j, &a) in row.iter().enumerate() {
                if a != T::zero() {
                    w += &kron(&st, &ComplexMatrix::unit(d, j, j)).scale(dd * a);
                }
            }
        }
        w
    }
}

/// `p(N, G) = Σ_ij α_ij ⟨j|N(σ_i)|j⟩`.
pub fn payoff<T: Real>(n: &Channel<T>, g: &GameSpec<T>) -> Result<T> {
    if n.dim() != g.dim {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} in a game of dimension {}",
            n.dim(),
            g.dim
        )));
    }
    let mut total = T::zero();
    for (sigma, row) in g.states.iter().zip(&g.payoffs) {
        let out = n.apply_operator(sigma.matrix())?;
        for (j, &a) in row.iter().enumerate() {
            total += a * out[(j, j)].re;
        }
    }
    Ok(total)
}

/// Extremises `tr(W_G Φ_M)` over Choi states of qcCRO channels `M`:
/// `ψ ⪰ 0`, `tr₁ψ = I/d`, `Δ₁ψ = Δ₀₁ψ`. Returns the value and a channel
/// attaining it.
pub fn extremal_payoff_over_qccro<T: Real>(g: &GameSpec<T>, direction: Direction) -> Result<(T, Channel<T>)> {
    let d = g.dim;
    let dd = d * d;
    let w = g.witness_operator();
    let sign = match direction {
        Direction::Min => T::one(),
        Direction::Max => -T::one(),
    };
    let mut p = SdpProblem::new();
    let psi = p.add_block(dd);
    p.set_objective(psi, w.scale(sign))?;
    let id_out = ComplexMatrix::identity(d);
    let inv_d = T::one() / T::lit(d as f64);
    for gb in hermitian_basis::<T>(d) {
        let rhs = gb.trace().re * inv_d;
        p.add_equality(vec![(psi, kron(&gb, &id_out))], rhs)?;
    }
    let half = T::lit(0.5);
    for a in 0..d {
        for i in 0..d {
            for j in i + 1..d {
                let (r, s) = (i * d + a, j * d + a);
                let mut re = ComplexMatrix::zeros(dd, dd);
                re[(r, s)] = cr(half);
                re[(s, r)] = cr(half);
                let mut im = ComplexMatrix::zeros(dd, dd);
                im[(r, s)] = crate::scalar::c(T::zero(), -half);
                im[(s, r)] = crate::scalar::c(T::zero(), half);
                p.add_equality(vec![(psi, re)], T::zero())?;
                p.add_equality(vec![(psi, im)], T::zero())?;
            }
        }
    }
    let sol = sdp::solve(&p, &SdpOptions::default())?.require_converged()?;
    let value = sign * sol.primal_value;
    let channel = Channel::from_choi_projected(&sol.primal_vars[psi])?;
    Ok((value, channel))
}

/// Builds the game whose witness is `Δ₁(W)` for the optimal robustness
/// witness `W` of `n`, over the `d²`-state frame `{|k⟩}`,
/// `{(|k⟩+|l⟩)/√2}`, `{(|k⟩+i|l⟩)/√2}`. The returned game is certified.
pub fn game_from_witness<T: Real>(n: &Channel<T>) -> Result<GameSpec<T>> {
    let r = robustness(n)?;
    game_from_robustness(n, &r)
}

pub fn game_from_robustness<T: Real>(n: &Channel<T>, r: &RobustnessResult<T>) -> Result<GameSpec<T>> {
    let d = n.dim();
    if d > 4 {
        return Err(Error::Unsupported(format!("game construction supports d ≤ 4, got {d}")));
    }
    let w = dephase_output(&r.witness, d);
    let frame = probe_states::<T>(d);
    let m = frame.len();
    let dd = T::lit(d as f64);
    // columns: d·svec(σ_iᵀ)
    let mut a = RealMatrix::zeros(d * d, m);
    let mut buf = vec![T::zero(); d * d];
    for (i, sigma) in frame.iter().enumerate() {
        svec(&sigma.matrix().transpose(), &mut buf);
        for (row, &v) in buf.iter().enumerate() {
            a.set(row, i, v * dd);
        }
    }
    let mut payoffs = vec![vec![T::zero(); d]; m];
    for j in 0..d {
        let block = ComplexMatrix::from_fn(d, d, |i, k| w[(i * d + j, k * d + j)]);
        svec(&block.hermitize(), &mut buf);
        let alpha = solve_real(&a, &buf)?;
        for (i, &v) in alpha.iter().enumerate() {
            payoffs[i][j] = v;
        }
    }
    let mut game = GameSpec::new(frame, payoffs)?;
    game.certify()?;
    Ok(game)
}

/// Quantities of the advantage identity `p(N, G*) / max_qcCRO p = 1 + R(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageReport<T: Real = f64> {
    pub payoff: T,
    pub qccro_max: T,
    pub qccro_min: T,
    pub advantage_ratio: T,
    pub one_plus_r: T,
    pub gap: T,
}

pub fn advantage_report<T: Real>(n: &Channel<T>) -> Result<AdvantageReport<T>> {
    let r = robustness(n)?;
    let game = game_from_robustness(n, &r)?;
    let cert = *game.certificate().expect("certified on construction");
    let p = payoff(n, &game)?;
    let ratio = p / cert.qccro_max;
    let one_plus_r = T::one() + r.value;
    Ok(AdvantageReport {
        payoff: p,
        qccro_max: cert.qccro_max,
        qccro_min: cert.qccro_min,
        advantage_ratio: ratio,
        one_plus_r,
        gap: (ratio - one_plus_r).abs(),
    })
}
