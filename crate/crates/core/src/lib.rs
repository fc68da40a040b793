//! Classical replaceability of quantum channels.
//!
//! * [`matrix`]: dense complex matrices, Kronecker algebra, Hermitian eigensolver.
//! * [`channels`]: Choi/Kraus/superoperator channels, dephasing maps, gates.
//! * [`cro`]: membership tests for the classically replaceable classes.
//! * [`sdp`]: a small dense SDP solver.
//! * [`measures`]: robustness and relative-entropy irreplaceability.
//! * [`game`]: the state-discrimination game realising the robustness witness.
//!
//! Numeric code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar type.

pub mod channels;
pub mod cro;
pub mod error;
pub mod game;
pub mod matrix;
pub mod measures;
pub mod scalar;
pub mod sdp;

pub use channels::{Channel, ProjectorSet, StochasticMatrix};
pub use cro::{CroKind, CroVerdict, EbVerdict};
pub use error::{Error, Result};
pub use game::GameSpec;
pub use matrix::{ComplexMatrix, DensityMatrix};
pub use measures::RobustnessResult;
pub use scalar::Real;
pub use sdp::{SdpError, SdpOptions, SdpProblem, SdpSolution};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type Channel64 = Channel<f64>;
pub type Channel32 = Channel<f32>;
pub type ProjectorSet64 = ProjectorSet<f64>;
pub type ProjectorSet32 = ProjectorSet<f32>;
pub type StochasticMatrix64 = StochasticMatrix<f64>;
pub type StochasticMatrix32 = StochasticMatrix<f32>;
pub type CroVerdict64 = CroVerdict<f64>;
pub type SdpProblem64 = SdpProblem<f64>;
pub type SdpProblem32 = SdpProblem<f32>;
pub type GameSpec64 = GameSpec<f64>;
