//! Entangled coherent states under vacuum decoherence.
//!
//! Closed forms for the entanglement of `N(|a1>|a2> + e^{i phi}|-a1>|-a2>)`
//! as photons leak out, and for a probabilistic one-bit teleportation
//! protocol using such a state as the channel. Every closed form has an
//! independent counterpart in [`oracle`], computed in a truncated Fock space.
//!
//! All routines are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod states;
pub mod teleportation;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Complex = scalar::Cx<f64>;
pub type ComplexMatrix = linalg::Matrix<f64>;
pub type Spectrum = linalg::Spectrum<f64>;
pub type EcsParams = states::EcsParams<f64>;
pub type CatNormalization = states::CatNormalization<f64>;
pub type QubitEncoding = states::QubitEncoding<f64>;
pub type DecayParams = channels::DecayParams<f64>;
pub type DecayedEcs = channels::DecayedEcs<f64>;
pub type NoisyChannel = channels::NoisyChannel<f64>;
pub type EofResult = entanglement::EofResult<f64>;
pub type ConcurrenceResult = entanglement::ConcurrenceResult<f64>;
pub type MixedEof = entanglement::MixedEof<f64>;
pub type PhaseSensitivity = entanglement::PhaseSensitivity<f64>;
pub type TeleportParams = teleportation::TeleportParams<f64>;
pub type FidelityIntermediates = teleportation::FidelityIntermediates<f64>;
pub type BellBasis = teleportation::BellBasis<f64>;
pub type RevivalReport = teleportation::RevivalReport<f64>;
pub type FockVector = oracle::FockVector<f64>;
pub type FockDensity = oracle::FockDensity<f64>;
pub type ProtocolSample = oracle::ProtocolSample<f64>;
pub type ProtocolEstimate = oracle::ProtocolEstimate<f64>;
