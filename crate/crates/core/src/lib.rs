//! Estimation of signals with sublinear sparsity.
//!
//! A `k`-sparse vector of length `N` with non-zero entries drawn from a finite
//! alphabet is observed either through a scaled AWGN channel
//! (`y = x + ω`, `ω ~ N(0, σ²/ln(N/k) I)`) or through Gaussian compressed
//! sensing (`y = k^{-1/2} A x + w`). The crate provides
//!
//! - [`signal`]: problem dimensions, alphabets, sparse vectors and the
//!   sparsity-normalized square error;
//! - [`channel`]: the two forward models;
//! - [`estimators`]: ML via order statistics, separable / non-separable
//!   posterior-mean estimators, and exhaustive oracles;
//! - [`bounds`]: reliability functions, Gallager-type union bounds, converse
//!   constants, the MSE lower bound and a small-N KL divergence estimator;
//! - [`amp`]: damped approximate message passing with pluggable denoisers.
//!
//! All logarithms are natural logarithms.

pub mod amp;
pub mod bounds;
pub mod channel;
pub mod error;
pub mod estimators;
pub mod logmath;
pub mod rng;
pub mod signal;
pub mod stats;

pub use error::{Error, Result};
pub use signal::{
    effective_noise_variance, sample_signal, square_error, Alphabet, NoiseModel, ProblemDims,
    SparseSignal,
};
