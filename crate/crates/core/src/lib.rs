//! Phase-space tools for single-photon-added and -subtracted Gaussian states.
//!
//! Characteristic and Wigner functions, the quadrature coherence scale, Wigner negative
//! volume and classicality tests for `n`-mode Gaussian states and their photon-tuned
//! variants.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod classify;
pub mod cli;
pub mod error;
pub mod moments;
pub mod negativity;
pub mod phase_space;
pub mod photon_ops;
pub mod qcs;
pub mod quadrature;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use phase_space::{GaussianState, ModeVector};
pub use photon_ops::{PhotonTunedState, Sign};
