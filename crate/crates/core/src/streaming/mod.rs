//! Single-pass streaming algorithms.
//!
//! * [`ThresholdState`]: one copy of the threshold rule with a known `τ`.
//! * [`TauGuess`]: threshold streaming that guesses `τ` from a running
//!   maximum and keeps `O(ε⁻¹(log k + log r⁻¹))` copies.
//! * [`DistortedStreaming`]: runs a guesser for every ζ in a geometric grid and
//!   keeps the best answer, so `r` need not be known up front.

mod distorted;
mod guess;
pub mod params;
mod threshold;

pub use distorted::{distorted_stream_run, DistortedStreaming, TauMode};
pub use guess::{threshold_streaming, TauGuess};
pub use params::{
    alpha_of_r, approx_ratio_zeta, beta_from_zeta, copy_count_bound, h_of_r, r_from_beta, tau_copy_range,
    zeta_grid, ThresholdParams, ZetaGridEntry,
};
pub use threshold::{threshold_stream_with_tau, Decision, ThresholdState};
