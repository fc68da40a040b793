//! Named gates and Pauli utilities. Multi-qubit operators use qubit 0 as
//! the most significant (slowest) tensor factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dephasing, mix, te_channel, Channel, ProjectorSet};
use crate::error::{Error, Result};
use crate::matrix::{kron, kron_all, ComplexMatrix};
use crate::scalar::{c, cr, Real};

fn single_pauli<T: Real>(k: usize) -> ComplexMatrix<T> {
    let (o, z) = (cr(T::one()), cr(T::zero()));
    let i = c(T::zero(), T::one());
    let entries = match k {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, -i, i, z],
        _ => [o, z, z, -o],
    };
    ComplexMatrix::from_vec(2, 2, entries.to_vec()).expect("2x2")
}

/// `n`-qubit Pauli operator for `index ∈ [4ⁿ]`; base-4 big-endian digits
/// select (I, X, Y, Z) on each qubit.
pub fn pauli_matrix<T: Real>(index: usize, n: usize) -> Result<ComplexMatrix<T>> {
    let limit = 4usize.pow(n as u32);
    if index >= limit {
        return Err(Error::IndexOutOfRange { index, limit });
    }
    let factors: Vec<_> = (0..n)
        .map(|q| single_pauli((index / 4usize.pow((n - 1 - q) as u32)) % 4))
        .collect();
    Ok(kron_all(&factors))
}

/// Parses a Pauli string such as `"ZZI"` into its index.
pub fn pauli_index_from_str(s: &str) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::UnknownGate(String::new()));
    }
    s.chars().try_fold(0usize, |acc, ch| {
        let digit = match ch.to_ascii_uppercase() {
            'I' => 0,
            'X' => 1,
            'Y' => 2,
            'Z' => 3,
            _ => return Err(Error::UnknownGate(s.to_string())),
        };
        Ok(acc * 4 + digit)
    })
}

pub fn pauli_index_to_str(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| ['I', 'X', 'Y', 'Z'][(index / 4usize.pow((n - 1 - q) as u32)) % 4])
        .collect()
}

/// `T_i(ρ) = Σ_± tr(P_i^± ρ) P_i^± / tr(P_i^±)` with `P_i^± = (I ± P_i)/2`.
pub fn pauli_channel_t<T: Real>(index: usize, n: usize) -> Result<Channel<T>> {
    let p = pauli_matrix(index, n)?;
    te_channel(&ProjectorSet::from_pauli(&p)?)
}

pub fn unitary_channel<T: Real>(u: &ComplexMatrix<T>) -> Result<Channel<T>> {
    Channel::unitary(u)
}

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::GateArity {
            name: name.to_string(),
            expected: n,
            got: params.len(),
        });
    }
    Ok(())
}

fn controlled<T: Real>(controls: usize, target: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let dim = 2usize.pow(controls as u32 + 1);
    let mut u = ComplexMatrix::identity(dim);
    let base = dim - 2;
    for a in 0..2 {
        for b in 0..2 {
            u[(base + a, base + b)] = target[(a, b)];
        }
    }
    u
}

/// Unitary of a named gate with its natural qubit count.
///
/// Single-qubit: I X Y Z H S T RZ(θ) RX(θ) U(θ) with `U(θ) = cos θ Z + sin θ X`.
/// Two-qubit: CNOT (control qubit 0), CZ, SWAP. Three-qubit: CCX (controls 0, 1).
pub fn gate_unitary<T: Real>(name: &str, params: &[f64]) -> Result<ComplexMatrix<T>> {
    let upper = name.to_ascii_uppercase();
    let s = T::lit(0.5f64.sqrt());
    let fixed = |n| expect_params(name, params, n);
    let u = match upper.as_str() {
        "I" | "ID" => {
            fixed(0)?;
            single_pauli(0)
        }
        "X" => {
            fixed(0)?;
            single_pauli(1)
        }
        "Y" => {
            fixed(0)?;
            single_pauli(2)
        }
        "Z" => {
            fixed(0)?;
            single_pauli(3)
        }
        "H" => {
            fixed(0)?;
            ComplexMatrix::from_vec(2, 2, vec![cr(s), cr(s), cr(s), cr(-s)])?
        }
        "S" => {
            fixed(0)?;
            let mut m = ComplexMatrix::identity(2);
            m[(1, 1)] = c(T::zero(), T::one());
            m
        }
        "T" => {
            fixed(0)?;
            let mut m = ComplexMatrix::identity(2);
            m[(1, 1)] = c(s, s);
            m
        }
        "RZ" => {
            fixed(1)?;
            let h = T::lit(params[0] / 2.0);
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = c(h.cos(), -h.sin());
            m[(1, 1)] = c(h.cos(), h.sin());
            m
        }
        "RX" => {
            fixed(1)?;
            let h = T::lit(params[0] / 2.0);
            let (co, si) = (cr(h.cos()), c(T::zero(), -h.sin()));
            ComplexMatrix::from_vec(2, 2, vec![co, si, si, co])?
        }
        "U" => {
            fixed(1)?;
            let th = T::lit(params[0]);
            let (co, si) = (th.cos(), th.sin());
            ComplexMatrix::from_vec(2, 2, vec![cr(co), cr(si), cr(si), cr(-co)])?
        }
        "CNOT" | "CX" => {
            fixed(0)?;
            controlled(1, &single_pauli(1))
        }
        "CZ" => {
            fixed(0)?;
            controlled(1, &single_pauli(3))
        }
        "SWAP" => {
            fixed(0)?;
            let mut m = ComplexMatrix::zeros(4, 4);
            for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[(a, b)] = cr(T::one());
            }
            m
        }
        "CCX" | "TOFFOLI" => {
            fixed(0)?;
            controlled(2, &single_pauli(1))
        }
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Ok(u)
}

fn gate_qubits(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

/// Channel of a named gate on `n_qubits`.
///
/// Single-qubit gates are applied to every qubit when `n_qubits > 1`. Besides
/// unitary gates, `DEPOL(p)` (`ρ ↦ (1−p)ρ + p·I/d`) and `DEPHASE(p)`
/// (`ρ ↦ (1−p)ρ + p·Δ(ρ)`) are accepted.
pub fn named_gate<T: Real>(name: &str, params: &[f64], n_qubits: usize) -> Result<Channel<T>> {
    if n_qubits == 0 {
        return Err(Error::QubitCount {
            name: name.to_string(),
            expected: 1,
            got: 0,
        });
    }
    let d = 2usize.pow(n_qubits as u32);
    let upper = name.to_ascii_uppercase();
    if upper == "DEPOL" || upper == "DEPHASE" {
        expect_params(name, params, 1)?;
        let p = T::lit(params[0]);
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(Error::Unsupported(format!("{name} probability must lie in [0, 1]")));
        }
        let noise = if upper == "DEPOL" {
            Channel::completely_depolarizing(d)
        } else {
            dephasing(d)
        };
        return mix(&[&Channel::identity(d), &noise], &[T::one() - p, p]);
    }
    let u = gate_unitary::<T>(name, params)?;
    let arity = gate_qubits(u.rows());
    let full = if arity == n_qubits {
        u
    } else if arity == 1 {
        kron_all(&vec![u; n_qubits])
    } else {
        return Err(Error::QubitCount {
            name: name.to_string(),
            expected: arity,
            got: n_qubits,
        });
    };
    Channel::unitary(&full)
}

fn embed_single<T: Real>(g: &ComplexMatrix<T>, q: usize, n: usize) -> ComplexMatrix<T> {
    let left = ComplexMatrix::identity(2usize.pow(q as u32));
    let right = ComplexMatrix::identity(2usize.pow((n - 1 - q) as u32));
    kron(&kron(&left, g), &right)
}

fn cnot_between<T: Real>(control: usize, target: usize, n: usize) -> ComplexMatrix<T> {
    let d = 2usize.pow(n as u32);
    let mut u = ComplexMatrix::zeros(d, d);
    for x in 0..d {
        let cbit = (x >> (n - 1 - control)) & 1;
        let y = if cbit == 1 { x ^ (1 << (n - 1 - target)) } else { x };
        u[(y, x)] = cr(T::one());
    }
    u
}

/// Random `n`-qubit Clifford unitary: a product of randomly chosen H, S and
/// CNOT generators. Deterministic given `seed`.
pub fn random_clifford_unitary<T: Real>(n: usize, seed: u64) -> ComplexMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 2usize.pow(n as u32);
    let h: ComplexMatrix<T> = gate_unitary("H", &[]).expect("H");
    let s: ComplexMatrix<T> = gate_unitary("S", &[]).expect("S");
    let mut u = ComplexMatrix::identity(d);
    let steps = 12 * n * n + 8;
    for _ in 0..steps {
        let pick = if n > 1 {
            rng.random_range(0..3)
        } else {
            rng.random_range(0..2)
        };
        let g = match pick {
            0 => embed_single(&h, rng.random_range(0..n), n),
            1 => embed_single(&s, rng.random_range(0..n), n),
            _ => {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                cnot_between(a, b, n)
            }
        };
        u = g.matmul(&u);
    }
    u
}
