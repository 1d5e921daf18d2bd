//! Beamspace channel denoising for massive-MIMO arrays.
//!
//! A noisy antenna-domain channel vector is moved to the beamspace domain with
//! a unitary DFT, where mmWave channels are close to sparse. Each entry is
//! soft-thresholded with a single threshold chosen by minimizing Stein's
//! unbiased risk estimate, which needs only the observation and the noise
//! variance. The threshold search is exact and runs in `O(B)` after sorting,
//! so the whole denoiser costs `O(B log B)`.
//!
//! Alongside the denoiser the crate carries a link-level Monte-Carlo harness
//! ([`linksim`]), a bit-accurate fixed-point model of a streaming hardware
//! datapath ([`fixedpoint`]) and property suites ([`validation`]).
//!
//! The numerical core is generic over [`Real`]; the aliases below fix the
//! scalar for the common cases.

pub mod bench;
pub mod channel;
pub mod denoiser;
mod error;
pub mod fixedpoint;
pub mod linksim;
pub mod numerics;
mod scalar;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::Real;

pub use channel::{
    observe_pilot, sample_scenario, steering_vector, synthesize_channel, ChannelScenario, PathComponent, PilotModel,
    ScenarioLabel, ScenarioRecord,
};
pub use denoiser::{
    beaches_denoise, oracle_mse_tau, scan_optimal_tau, scan_optimal_tau_hw, soft_threshold, sure_value, DenoiseResult,
    SortedMagnitudes, SureScanState, ThresholdChoice, Variant,
};
pub use numerics::{draw_cscg, fft_unitary, ifft_unitary, ComplexVector, RngStream};

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type ComplexVector64 = ComplexVector<f64>;
pub type ComplexVector32 = ComplexVector<f32>;
pub type DenoiseResult64 = DenoiseResult<f64>;
pub type DenoiseResult32 = DenoiseResult<f32>;
pub type SortedMagnitudes64 = SortedMagnitudes<f64>;
pub type SortedMagnitudes32 = SortedMagnitudes<f32>;
pub type ChannelScenario64 = ChannelScenario<f64>;
pub type ChannelScenario32 = ChannelScenario<f32>;
