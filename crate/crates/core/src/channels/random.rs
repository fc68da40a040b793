//! Seeded random channels and states for tests and examples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{compose, dephasing, mix, normalize_input_marginal, Channel};
use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::scalar::{c, Real};

fn ginibre<T: Real>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(T::lit(re), T::lit(im))
    })
}

/// Random full-rank channel: Wishart Choi matrix with its input marginal
/// normalised to `I/d`.
pub fn random_channel<T: Real>(d: usize, seed: u64) -> Channel<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre::<T>(&mut rng, d * d, d * d);
    let x = g.matmul(&g.adjoint());
    let choi = normalize_input_marginal(&x, d).expect("Wishart marginal is full rank");
    Channel::from_choi(choi).expect("normalised Wishart Choi is CPTP")
}

/// Random full-rank mixed state `GG†/tr(GG†)`.
pub fn random_state<T: Real>(d: usize, seed: u64) -> DensityMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre::<T>(&mut rng, d, d);
    let x = g.matmul(&g.adjoint());
    let tr = x.trace().re;
    DensityMatrix::from_trusted(x.scale(T::one() / tr).hermitize())
}

/// Random pure state.
pub fn random_pure_state<T: Real>(d: usize, seed: u64) -> DensityMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre::<T>(&mut rng, d, 1);
    DensityMatrix::pure(&g.column(0)).expect("nonzero Gaussian vector")
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<T: Real>(d: usize, seed: u64) -> ComplexMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ginibre::<T>(&mut rng, d, d);
    let mut cols: Vec<Vec<crate::scalar::C<T>>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut v = g.column(k);
        for q in &cols {
            let proj = q
                .iter()
                .zip(&v)
                .fold(c(T::zero(), T::zero()), |a, (x, y)| a + x.conj() * *y);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * *qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, d, |i, k| cols[k][i])
}

/// Permutation matrix with random phases.
pub fn random_permutation_unitary<T: Real>(d: usize, seed: u64) -> ComplexMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(&mut rng);
    let mut u = ComplexMatrix::zeros(d, d);
    for (i, &p) in perm.iter().enumerate() {
        let phi = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
        u[(p, i)] = c(phi.cos(), phi.sin());
    }
    u
}

/// `V∘Δ` for a random channel `V`, mixed with a random permutation-unitary
/// channel with a random weight.
pub fn random_qccro<T: Real>(d: usize, seed: u64) -> Channel<T> {
    let v = random_channel::<T>(d, seed);
    let base = compose(&v, &dephasing(d)).expect("same dimension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let w = T::lit(rng.random_range(0.0..1.0));
    let perm =
        Channel::unitary(&random_permutation_unitary::<T>(d, seed.wrapping_add(1))).expect("permutation is unitary");
    mix(&[&base, &perm], &[T::one() - w, w]).expect("valid weights")
}

/// `Δ∘V∘Δ` for a random channel `V`.
pub fn random_qqcro<T: Real>(d: usize, seed: u64) -> Channel<T> {
    let delta = dephasing(d);
    let v = random_channel::<T>(d, seed);
    super::compose_all(&[&delta, &v, &delta]).expect("same dimension")
}
