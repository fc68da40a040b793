//! JSON channel specification files.
//!
//! Complex entries are `[re, im]` pairs, matrices are row-major nested
//! arrays. A `choi` matrix is the unit-trace Choi state with the input as the
//! first tensor factor.

use std::path::Path;

use crolab::channels::{compose_all, named_gate, random_channel, tensor};
use crolab::{Channel64, ComplexMatrix64};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelSpec {
    Kraus {
        dim: usize,
        operators: Vec<MatrixSpec>,
    },
    Choi {
        dim: usize,
        matrix: MatrixSpec,
    },
    /// Named gate; `dim` picks the number of qubits, defaulting to the
    /// gate's own arity.
    Gate {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
        #[serde(default)]
        dim: Option<usize>,
    },
    /// Children act in the listed order: the first child acts first.
    Composition {
        children: Vec<ChannelSpec>,
    },
    Tensor {
        children: Vec<ChannelSpec>,
    },
    /// Seeded random channel; `seed` falls back to `--seed`, then 0.
    Random {
        dim: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError {
            message: format!("{}: {}", path.display(), e.message),
            ..e
        })
    }

    pub fn build(&self, default_seed: Option<u64>) -> Result<Channel64, CliError> {
        match self {
            ChannelSpec::Kraus { dim, operators } => {
                if operators.is_empty() {
                    return Err(CliError::parse("kraus spec without operators"));
                }
                let ops = operators
                    .iter()
                    .enumerate()
                    .map(|(k, m)| to_matrix(m, *dim, &format!("operators[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Channel64::from_kraus(ops)?)
            }
            ChannelSpec::Choi { dim, matrix } => {
                let m = to_matrix(matrix, dim * dim, "matrix")?;
                Ok(Channel64::from_choi(m)?)
            }
            ChannelSpec::Gate { name, params, dim } => {
                let n_qubits = match dim {
                    Some(d) => qubits_of(*d)?,
                    None => natural_arity(name, params)?,
                };
                Ok(named_gate(name, params, n_qubits)?)
            }
            ChannelSpec::Composition { children } => {
                let built = build_children(children, default_seed, "composition")?;
                let refs: Vec<&Channel64> = built.iter().rev().collect();
                Ok(compose_all(&refs)?)
            }
            ChannelSpec::Tensor { children } => {
                let built = build_children(children, default_seed, "tensor")?;
                let mut iter = built.into_iter();
                let first = iter.next().expect("non-empty");
                Ok(iter.fold(first, |acc, c| tensor(&acc, &c)))
            }
            ChannelSpec::Random { dim, seed } => {
                if *dim < 1 {
                    return Err(CliError::parse("random spec needs dim ≥ 1"));
                }
                Ok(random_channel(*dim, seed.or(default_seed).unwrap_or(0)))
            }
        }
    }
}

fn build_children(children: &[ChannelSpec], default_seed: Option<u64>, what: &str) -> Result<Vec<Channel64>, CliError> {
    if children.is_empty() {
        return Err(CliError::parse(format!("{what} spec without children")));
    }
    children.iter().map(|c| c.build(default_seed)).collect()
}

fn qubits_of(d: usize) -> Result<usize, CliError> {
    if d < 2 || !d.is_power_of_two() {
        return Err(CliError::parse(format!("gate dimension {d} is not a power of two")));
    }
    Ok(d.trailing_zeros() as usize)
}

fn natural_arity(name: &str, params: &[f64]) -> Result<usize, CliError> {
    match name.to_ascii_uppercase().as_str() {
        "DEPOL" | "DEPHASE" => Ok(1),
        _ => {
            let u: ComplexMatrix64 = crolab::channels::gate_unitary(name, params)?;
            qubits_of(u.rows())
        }
    }
}

fn to_matrix(m: &MatrixSpec, n: usize, field: &str) -> Result<ComplexMatrix64, CliError> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(CliError::parse(format!("{field} must be {n}x{n}")));
    }
    let mut out = ComplexMatrix64::zeros(n, n);
    for (i, row) in m.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(CliError::parse(format!("{field}[{i}][{j}] is not finite")));
            }
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

/// `[re, im]` rows of a complex matrix.
pub fn matrix_to_spec(m: &ComplexMatrix64) -> MatrixSpec {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}
