//! Signal estimators for the AWGN channel.
//!
//! * [`ml_estimate`] solves the sparse maximum-likelihood problem exactly by
//!   sweeping how many of the `k` non-zeros sit at the largest versus the
//!   smallest observations.
//! * [`separable_bayes`] is the element-wise posterior mean under the i.i.d.
//!   marginal prior.
//! * [`nonseparable_bayes`] replaces the prior odds with leave-one-out ML
//!   residual differences.
//! * [`exact_posterior_mean`] and [`brute_force_ml`] enumerate every candidate
//!   signal and serve as oracles on small instances.

mod bayes;
mod enumerate;
mod ml;

pub use bayes::{
    ell_m, exact_posterior_mean, nonseparable_bayes, nonseparable_bayes_naive, separable_bayes,
    separable_denoise, DenoiserContext, Moments,
};
pub use enumerate::{check_enumeration, for_each_sparse, ENUMERATION_LIMIT};
pub use ml::{
    brute_force_ml, classify_error, hard_decision, ml_estimate, residual_sq, xi_profile, ErrorType,
    XiProfile,
};
