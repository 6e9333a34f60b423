//! Approximate message passing with damping for Gaussian compressed sensing.
//!
//! The recursion is the standard one with an Onsager term; the pseudo-data
//! gain `γ = k/M` compensates the `k^{-1/2}` matrix scaling so that the
//! pseudo-data behaves like `x` plus white noise of variance `v_t`.

mod damping;
mod denoiser;
mod run;

pub use damping::{damping_search, default_damping_grid, DampingSearch};
pub use denoiser::{finite_difference_divergence, Denoiser, NonseparableDenoiser, SeparableDenoiser};
pub use run::{
    amp_run, base_axis_input_snr, estimate_input_snr, AmpConfig, AmpState, AmpStatus, AmpTrace, CsInstance,
    DenoiserPolicy,
};
