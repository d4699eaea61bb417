//! Coupled-mode simulation of broadband microwave isolation by adiabatic
//! parametric mode conversion in a pair of coupled Josephson transmission
//! lines.
//!
//! A traveling flux pump with a spatially swept wavevector and a ramped
//! amplitude converts a forward signal from the even to the odd mode while
//! leaving the backward signal untouched. The crates' modules mirror the
//! physical layers:
//!
//! - [`circuit`]: per-cell circuit values, even/odd mode constants, exact
//!   and linearized dispersion.
//! - [`pump`]: spatial pump profiles, induced coupling, phase mismatch.
//! - [`dynamics`]: coupled-mode propagation, transfer matrices, two-point
//!   scattering solves for every model variant.
//! - [`adiabatic`]: eigen-mixing angle, Bloch-sphere deviation angle, and
//!   the geometric residual estimate.
//! - [`metrics`]: isolation/transmission spectra, loss model, bandwidth
//!   extraction, length sweeps, and the rotating-wave validity comparison.
//!
//! Positions are measured in unit cells (a = 1); wavevectors and coupling
//! rates carry rad/cell; everything else is SI.

// Parameter checks use negated comparisons so NaN inputs fail validation;
// small fixed-size matrix code indexes both operands.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod adiabatic;
pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod ode;
pub mod pump;

pub use circuit::{
    derive_modes, squid_inductance, wavevector, CircuitParams, DispersionForm, Mode, ModePair,
};
pub use error::{Error, Result};
pub use pump::{default_k_center, phase_matched_band, MismatchSample, PumpProfile, RampShape};
