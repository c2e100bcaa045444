//! Truncated Fock-space simulation of heralded quantum-state engineering in a
//! three-wave-mixing interferometer.
//!
//! A weak coherent idler beam passes a slightly unbalanced beam splitter
//! (pre-selection), couples to the signal beam inside a parametric crystal,
//! and is postselected on a single-photon detection in one output arm.
//! Conditioned on that click, the signal pointer collapses onto a photon-added
//! state: a single-photon Fock state for vacuum input, a photon-added coherent
//! (SPAC) state for coherent input, or a photon-added squeezed vacuum (SPASV)
//! state for squeezed input.
//!
//! The crate provides both the first-order conditional pipeline and an exact
//! three-mode simulation that serves as an internal oracle, together with the
//! verification metrics (fidelity, photon statistics, squeezing, Wigner
//! functions, postselected-vs-plain SNR) and deterministic figure/sweep
//! emission used to regenerate the reference data series.

pub mod error;
pub mod figures;
pub mod fock;
pub mod metrics;
pub mod protocol;
pub mod states;

pub use error::{Error, Result};
pub use fock::{C64, ModeSpace, Operator, StateVector};
pub use metrics::{PhotonStats, SnrReport, WignerGrid};
pub use protocol::{
    BeamSplitterSpec, ConditionalCoefficients, ConditionalOutput, ModelPath, ProtocolParams,
    WeakValues,
};
pub use states::{PointerInput, PointerKind};
