//! # qcap-core
//!
//! Numerical toolkit for classical capacities of finite-dimensional
//! quantum channels, with and without shared entanglement.
//!
//! The crate provides:
//!
//! - a dense complex-matrix kernel with a Hermitian eigensolver
//!   ([`linalg`]);
//! - density matrices, purifications, and bipartite structure
//!   ([`state`]);
//! - quantum channels in Kraus form, including the depolarizing family
//!   and unital qubit channels ([`channel`]);
//! - the entropy calculus: von Neumann, relative, conditional entropy,
//!   entropy exchange, mutual information, Holevo quantity
//!   ([`entropy`]);
//! - capacity computations: numerical maximization of the quantum
//!   mutual information, depolarizing closed forms, capacity-ratio and
//!   inequality analyses ([`capacity`]);
//! - discrete Weyl operators on a subspace and dense-coding rate
//!   verification ([`densecoding`]);
//! - construction of encodings reproducing a family of equal-marginal
//!   bipartite states from one shared pure state ([`encoding`]);
//! - strongly typical sequence enumeration and finite-n convergence
//!   diagnostics ([`typicality`]).
//!
//! All numerics are generic over the real scalar type (`f32`/`f64`)
//! via [`scalar::Real`]; the aliases below fix `f64`, which is what the
//! test suite and the CLI use. Logarithms are base 2 throughout: every
//! entropy and capacity is in bits.

pub mod capacity;
pub mod channel;
pub mod densecoding;
pub mod encoding;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod state;
pub mod typicality;
pub mod wire;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` complex matrix.
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
/// `f64` Hermitian eigensystem.
pub type HermitianEigenSystem64 = linalg::HermitianEigenSystem<f64>;
/// `f64` density matrix.
pub type DensityMatrix64 = state::DensityMatrix<f64>;
/// `f64` pure state.
pub type PureState64 = state::PureState<f64>;
/// `f64` bipartite state.
pub type BipartiteState64 = state::BipartiteState<f64>;
/// `f64` ensemble.
pub type Ensemble64 = state::Ensemble<f64>;
/// `f64` quantum channel.
pub type QuantumChannel64 = channel::QuantumChannel<f64>;
/// `f64` capacity report.
pub type CapacityReport64 = capacity::CapacityReport<f64>;
