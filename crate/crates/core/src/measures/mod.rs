//! Irreplaceability measures relative to the qcCRO set.
//!
//! Robustness: `1 + R(N) = min tr ψ` over `ψ ⪰ Φ_N`, `ψ ⪰ 0`,
//! `tr₁ψ = (tr ψ / d)·I`, `Δ₁ψ = Δ₀₁ψ`, solved as an SDP in the shifted
//! variable `X = ψ − Φ_N ⪰ 0` (which already forces `ψ ⪰ 0`). The dual slack
//! of `X` is the witness `W` with `R = tr(W Δ₁Φ_N) − 1`.
//!
//! Relative entropy: `C_rel(N) = S(Δ₀₁Φ_N) − S(Δ₁Φ_N)` in bits.

use crate::channels::{self, compose, dephasing, mix, tensor, Channel};
use crate::cro::is_qccro;
use crate::error::{Error, Result};
use crate::matrix::{von_neumann_entropy, ComplexMatrix};
use crate::scalar::{c, cr, Real};
use crate::sdp::{self, hermitian_basis, Residuals, SdpOptions, SdpProblem, SdpSolution};

/// Values above `−CLAMP` are reported as zero.
const CLAMP: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RobustnessResult<T: Real = f64> {
    pub value: T,
    pub optimal_psi: ComplexMatrix<T>,
    pub witness: ComplexMatrix<T>,
    pub residuals: Residuals<T>,
    /// Absolute gap between primal and dual objective values.
    pub abs_gap: T,
    pub iterations: usize,
}

impl<T: Real> RobustnessResult<T> {
    /// `tr(W·Δ₁(Φ_N)) − 1`, which equals `R(N)` for an optimal witness.
    pub fn witness_value(&self, n: &Channel<T>) -> T {
        self.witness.real_pairing(&dephase_output(n.choi(), n.dim())) - T::one()
    }
}

/// `Δ₁`: dephasing of the output factor of a `[in, out]` operator.
pub fn dephase_output<T: Real>(m: &ComplexMatrix<T>, d: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, col| {
        if r % d == col % d {
            m[(r, col)]
        } else {
            cr(T::zero())
        }
    })
}

/// `Δ₀₁`: full dephasing.
pub fn dephase_all<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    m.diagonal_part()
}

/// Which cone the shifted variable must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cone {
    /// `Δ₁ψ = Δ₀₁ψ`
    OutputDephased,
    /// `ψ = Δ₀₁ψ`
    Diagonal,
}

fn pair_constraints<T: Real>(
    p: &mut SdpProblem<T>,
    block: usize,
    target: &ComplexMatrix<T>,
    rows: impl Iterator<Item = (usize, usize)>,
) -> Result<()> {
    let n = target.rows();
    let half = T::lit(0.5);
    for (r, s) in rows {
        let mut re = ComplexMatrix::zeros(n, n);
        re[(r, s)] = cr(half);
        re[(s, r)] = cr(half);
        let mut im = ComplexMatrix::zeros(n, n);
        im[(r, s)] = c(T::zero(), -half);
        im[(s, r)] = c(T::zero(), half);
        for coef in [re, im] {
            let rhs = -coef.real_pairing(target);
            p.add_equality(vec![(block, coef)], rhs)?;
        }
    }
    Ok(())
}

/// Builds `min tr(X) + tr(φ)` over `X ⪰ 0` with `ψ = X + φ` in the given cone
/// and `tr₁ψ = (tr ψ/d)·I`.
fn robustness_problem<T: Real>(phi: &ComplexMatrix<T>, d: usize, cone: Cone) -> Result<SdpProblem<T>> {
    let dd = d * d;
    let mut p = SdpProblem::new();
    let x = p.add_block(dd);
    p.set_objective(x, ComplexMatrix::identity(dd))?;
    p.set_objective_offset(phi.trace().re);

    let id_out = ComplexMatrix::identity(d);
    let id_all = ComplexMatrix::identity(dd);
    let inv_d = T::one() / T::lit(d as f64);
    for g in hermitian_basis::<T>(d) {
        let coef = &crate::matrix::kron(&g, &id_out) - &id_all.scale(g.trace().re * inv_d);
        if coef.frobenius_norm() == T::zero() {
            continue;
        }
        let rhs = -coef.real_pairing(phi);
        p.add_equality(vec![(x, coef)], rhs)?;
    }

    let pairs: Vec<(usize, usize)> = match cone {
        Cone::OutputDephased => (0..d)
            .flat_map(|a| (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i * d + a, j * d + a))))
            .collect(),
        Cone::Diagonal => (0..dd).flat_map(|r| (r + 1..dd).map(move |s| (r, s))).collect(),
    };
    pair_constraints(&mut p, x, phi, pairs.into_iter())?;
    Ok(p)
}

fn solve_robustness<T: Real>(
    phi: &ComplexMatrix<T>,
    d: usize,
    cone: Cone,
    opts: &SdpOptions<T>,
) -> Result<(SdpSolution<T>, T)> {
    let problem = robustness_problem(phi, d, cone)?;
    let sol = sdp::solve(&problem, opts)?.require_converged()?;
    let raw = sol.primal_value - phi.trace().re;
    let value = clamp_small(raw)?;
    Ok((sol, value))
}

fn clamp_small<T: Real>(v: T) -> Result<T> {
    if v >= T::zero() {
        Ok(v)
    } else if v >= -T::lit(CLAMP).max(T::default_tol()) {
        Ok(T::zero())
    } else {
        Err(Error::Unsupported(format!(
            "measure evaluated to {v}, below the numerical floor"
        )))
    }
}

/// Robustness of irreplaceability with default solver options.
pub fn robustness<T: Real>(n: &Channel<T>) -> Result<RobustnessResult<T>> {
    robustness_with(n, &SdpOptions::default())
}

pub fn robustness_with<T: Real>(n: &Channel<T>, opts: &SdpOptions<T>) -> Result<RobustnessResult<T>> {
    let d = n.dim();
    let (sol, value) = solve_robustness(n.choi(), d, Cone::OutputDephased, opts)?;
    let witness = sdp::extract_dual_witness(&sol, 0)?;
    Ok(RobustnessResult {
        value,
        optimal_psi: (&sol.primal_vars[0] + n.choi()).hermitize(),
        witness,
        residuals: sol.residuals,
        abs_gap: sol.abs_gap(),
        iterations: sol.iterations,
    })
}

/// The robustness computed three ways:
/// `[Φ_N over the qcCRO cone, Δ₁Φ_N over diagonal ψ, Δ₁Φ_N over the qcCRO cone]`.
pub fn robustness_equivalents<T: Real>(n: &Channel<T>) -> Result<[T; 3]> {
    let opts = SdpOptions::default();
    let d = n.dim();
    let dephased = dephase_output(n.choi(), d);
    let (_, a) = solve_robustness(n.choi(), d, Cone::OutputDephased, &opts)?;
    let (_, b) = solve_robustness(&dephased, d, Cone::Diagonal, &opts)?;
    let (_, c) = solve_robustness(&dephased, d, Cone::OutputDephased, &opts)?;
    Ok([a, b, c])
}

/// `C_rel(N) = S(Δ₀₁Φ_N) − S(Δ₁Φ_N)` in bits.
pub fn relative_entropy_irreplaceability<T: Real>(n: &Channel<T>) -> T {
    let d = n.dim();
    let full = von_neumann_entropy(&dephase_all(n.choi()));
    let out = von_neumann_entropy(&dephase_output(n.choi(), d));
    let v = full - out;
    if v < T::zero() {
        T::zero()
    } else {
        v
    }
}

/// One row of the `U(θ) = cos θ Z + sin θ X` sweep.
#[derive(Debug, Clone)]
pub struct SweepRow<T: Real = f64> {
    pub theta: T,
    pub robustness: std::result::Result<T, Error>,
    pub relative_entropy_bits: T,
}

fn sweep_row<T: Real>(theta: f64, opts: &SdpOptions<T>) -> SweepRow<T> {
    let u: Channel<T> = channels::named_gate("U", &[theta], 1).expect("U(θ) is a valid gate");
    SweepRow {
        theta: T::lit(theta),
        robustness: robustness_with(&u, opts).map(|r| r.value),
        relative_entropy_bits: relative_entropy_irreplaceability(&u),
    }
}

/// `points` values of θ uniformly spaced on `[0, π/2]`, endpoints included.
pub fn sweep_thetas(points: usize) -> Vec<f64> {
    let step = std::f64::consts::FRAC_PI_2 / (points.max(2) - 1) as f64;
    (0..points.max(2)).map(|k| k as f64 * step).collect()
}

/// Both measures along the `U(θ)` family; rows are computed on up to
/// `threads` workers and returned in θ order.
pub fn sweep_u_theta<T: Real>(points: usize, threads: usize) -> Result<Vec<SweepRow<T>>> {
    sweep_u_theta_with(points, threads, &SdpOptions::default())
}

pub fn sweep_u_theta_with<T: Real>(points: usize, threads: usize, opts: &SdpOptions<T>) -> Result<Vec<SweepRow<T>>> {
    if points < 2 {
        return Err(Error::Unsupported("a sweep needs at least two points".into()));
    }
    let thetas = sweep_thetas(points);
    let threads = threads.clamp(1, points);
    if threads == 1 {
        return Ok(thetas.iter().map(|&t| sweep_row(t, opts)).collect());
    }
    let mut rows: Vec<Option<SweepRow<T>>> = vec![None; points];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let thetas = &thetas;
                scope.spawn(move || {
                    (w..points)
                        .step_by(threads)
                        .map(|k| (k, sweep_row::<T>(thetas[k], opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, row) in h.join().expect("sweep worker panicked") {
                rows[k] = Some(row);
            }
        }
    });
    Ok(rows.into_iter().map(|r| r.expect("every row computed")).collect())
}

/// A single property check with the two compared quantities.
#[derive(Debug, Clone)]
pub struct PropertyCheck<T: Real = f64> {
    pub name: &'static str,
    pub passed: bool,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub struct PropertyReport<T: Real = f64> {
    pub checks: Vec<PropertyCheck<T>>,
}

impl<T: Real> PropertyReport<T> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A map on channels, used for candidate free superchannels.
pub type ChannelMap<'a, T> = dyn Fn(&Channel<T>) -> Result<Channel<T>> + 'a;

/// Post-composition with a random qqCRO member `Q`: `N ↦ Q∘N`.
pub fn free_postcomposition<T: Real>(d: usize, seed: u64) -> impl Fn(&Channel<T>) -> Result<Channel<T>> {
    let q = channels::random_qqcro::<T>(d, seed);
    move |n: &Channel<T>| compose(&q, n)
}

/// Conjugation by a random computational-basis permutation: `N ↦ P∘N∘P⁻¹`.
pub fn free_permutation_conjugation<T: Real>(d: usize, seed: u64) -> impl Fn(&Channel<T>) -> Result<Channel<T>> {
    let u = channels::random_permutation_unitary::<T>(d, seed);
    let p = Channel::unitary(&u).expect("permutation is unitary");
    let p_inv = Channel::unitary(&u.adjoint()).expect("permutation is unitary");
    move |n: &Channel<T>| compose(&p, &compose(n, &p_inv)?)
}

/// `true` if `lambda` maps each of `samples` random qcCRO members into qcCRO.
pub fn maps_free_to_free<T: Real>(lambda: &ChannelMap<'_, T>, d: usize, samples: usize, seed: u64) -> Result<bool> {
    for k in 0..samples as u64 {
        let m = channels::random_qccro::<T>(d, seed.wrapping_mul(1000).wrapping_add(k));
        if !is_qccro(&lambda(&m)?).is_member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `true` if `Δ∘Λ(N) = Λ(Δ∘N)` for `n` and `samples` random channels.
pub fn commutes_with_dephasing<T: Real>(
    lambda: &ChannelMap<'_, T>,
    n: &Channel<T>,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let d = n.dim();
    let delta = dephasing::<T>(d);
    let mut probes = vec![n.clone()];
    probes.extend((0..samples as u64).map(|k| channels::random_channel(d, seed.wrapping_add(k))));
    for m in probes {
        let a = compose(&delta, &lambda(&m)?)?;
        let b = lambda(&compose(&delta, &m)?)?;
        if a.choi_distance(&b) > T::default_tol() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convexity, monotonicity under the two free superchannel families, and
/// stability under `⊗ I` (qubit ancilla) for both measures.
pub fn measure_property_suite<T: Real>(n: &Channel<T>, seed: u64) -> Result<PropertyReport<T>> {
    let d = n.dim();
    let tol_r = T::lit(1e-5);
    let tol_c = T::lit(1e-6);
    let mut checks = Vec::new();
    let mut push = |name, passed, lhs, rhs| checks.push(PropertyCheck { name, passed, lhs, rhs });

    let r_n = robustness(n)?.value;
    let c_n = relative_entropy_irreplaceability(n);

    // convexity
    let other = channels::random_channel::<T>(d, seed);
    let w = T::lit(0.1 + 0.8 * ((seed % 97) as f64 / 97.0));
    let mixed = mix(&[n, &other], &[w, T::one() - w])?;
    let r_mix = robustness(&mixed)?.value;
    let r_other = robustness(&other)?.value;
    let bound = w * r_n + (T::one() - w) * r_other;
    push("robustness convexity", r_mix <= bound + tol_r, r_mix, bound);
    let c_mix = relative_entropy_irreplaceability(&mixed);
    let c_bound = w * c_n + (T::one() - w) * relative_entropy_irreplaceability(&other);
    push("relative entropy convexity", c_mix <= c_bound + tol_c, c_mix, c_bound);

    // monotonicity under free superchannels, each checked to be free-preserving first
    let post = free_postcomposition::<T>(d, seed.wrapping_add(1));
    let perm = free_permutation_conjugation::<T>(d, seed.wrapping_add(2));
    let families: [(&'static str, &'static str, &ChannelMap<'_, T>); 2] = [
        (
            "robustness monotone under qqCRO post-composition",
            "relative entropy monotone under qqCRO post-composition",
            &post,
        ),
        (
            "robustness monotone under permutation conjugation",
            "relative entropy monotone under permutation conjugation",
            &perm,
        ),
    ];
    for (r_name, c_name, lambda) in families {
        let free_ok = maps_free_to_free(lambda, d, 5, seed)?;
        let image = lambda(n)?;
        let r_img = robustness(&image)?.value;
        push(r_name, free_ok && r_img <= r_n + tol_r, r_img, r_n);
        let commutes = commutes_with_dephasing(lambda, n, 3, seed)?;
        let c_img = relative_entropy_irreplaceability(&image);
        push(c_name, commutes && c_img <= c_n + tol_c, c_img, c_n);
    }

    // ⊗ I stability with a qubit ancilla
    let extended = tensor(n, &Channel::identity(2));
    let r_ext = robustness(&extended)?.value;
    push(
        "robustness stable under tensoring identity",
        (r_ext - r_n).abs() <= tol_r,
        r_ext,
        r_n,
    );
    let c_ext = relative_entropy_irreplaceability(&extended);
    push(
        "relative entropy stable under tensoring identity",
        (c_ext - c_n).abs() <= tol_c,
        c_ext,
        c_n,
    );

    Ok(PropertyReport { checks })
}
