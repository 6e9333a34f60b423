//! Computable theory: error exponents, union bounds, converse constants and
//! supporting identities.

mod converse;
mod gallager;
mod kl;
mod matching;
mod mgf;
mod reliability;

pub use converse::{
    c_n_alpha, converse_constants, f_alpha, mse_lower_bound, thresholds, ConverseConstants,
    MseBoundParams,
};
pub use gallager::{
    error_event_level, error_prob_bound_total, gallager_type_bound, ln_error_prob_bound_total,
    ln_gallager_type_bound, truncation_level, GallagerParams,
};
pub use kl::{kl_estimate_small, KlEstimate, KL_ENUMERATION_LIMIT};
pub use matching::{h_coeff, matching_coefficients, weighted_sparse_sum};
pub use mgf::gaussian_bilinear_mgf;
pub use reliability::{reliability_breakpoints, reliability_function, reliability_oracle, OracleGrid};
