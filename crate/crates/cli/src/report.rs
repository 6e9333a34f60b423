//! Tabulated theory values.

use rayon::prelude::*;
use sublinear_core::bounds::{
    converse_constants, error_prob_bound_total, mse_lower_bound, reliability_function, reliability_oracle, thresholds,
    truncation_level, MseBoundParams, OracleGrid,
};

use crate::error::CliResult;
use crate::output::fmt_f64;
use crate::spec::SweepSpec;

/// One tabulated quantity. Unused parameter columns are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub quantity: &'static str,
    pub w: Option<usize>,
    pub w_prime: Option<usize>,
    pub sigma_sq: Option<f64>,
    pub alpha: Option<f64>,
    pub j: Option<f64>,
    pub value: f64,
    /// Independent numerical value where one exists.
    pub reference: Option<f64>,
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn count(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl BoundRow {
    pub const HEADER: &'static str = "quantity,w,w_prime,sigma_sq,alpha,j,value,reference";

    fn scalar(quantity: &'static str, sigma_sq: Option<f64>, value: f64) -> Self {
        Self { quantity, w: None, w_prime: None, sigma_sq, alpha: None, j: None, value, reference: None }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.quantity,
            count(self.w),
            count(self.w_prime),
            cell(self.sigma_sq),
            cell(self.alpha),
            cell(self.j),
            fmt_f64(self.value),
            cell(self.reference)
        )
    }
}

/// Thresholds, reliability values with their grid-oracle counterparts, the
/// total error bound, converse constants and the MSE lower bound.
pub fn bounds_report(spec: &SweepSpec) -> CliResult<Vec<BoundRow>> {
    let a = &spec.alphabet;
    let dims = &spec.dims;
    let (ml_threshold, converse_threshold) = thresholds(a);
    let mut rows = vec![
        BoundRow::scalar("threshold_ml", None, ml_threshold),
        BoundRow::scalar("threshold_converse", None, converse_threshold),
        BoundRow::scalar("truncation_level", None, truncation_level(dims) as f64),
    ];

    let wp_max = if a.len() > 1 { spec.w_max } else { 0 };
    let cases: Vec<(f64, usize, usize)> = spec
        .sigma_sq
        .iter()
        .flat_map(|&s| (1..=spec.w_max).flat_map(move |w| (0..=wp_max).map(move |wp| (s, w, wp))))
        .collect();
    let grid = OracleGrid::default();
    let reliability: Vec<BoundRow> = cases
        .par_iter()
        .map(|&(s, w, wp)| {
            Ok(BoundRow {
                quantity: "reliability",
                w: Some(w),
                w_prime: Some(wp),
                sigma_sq: Some(s),
                alpha: None,
                j: None,
                value: reliability_function(w, wp, s, a)?,
                reference: Some(reliability_oracle(w, wp, s, a, &grid)?),
            })
        })
        .collect::<sublinear_core::Result<_>>()?;
    rows.extend(reliability);

    for &s in &spec.sigma_sq {
        rows.push(BoundRow::scalar("total_error_bound", Some(s), error_prob_bound_total(dims, a, s)?));
        let c = converse_constants(s, a);
        rows.push(BoundRow::scalar("converse_c0", Some(s), c.c0));
        rows.push(BoundRow::scalar("converse_c1", Some(s), c.c1));
        rows.push(BoundRow::scalar("gamma_max", Some(s), c.gamma_max));
        rows.push(BoundRow::scalar("converse_valid", Some(s), if c.valid { 1.0 } else { 0.0 }));
    }

    for &alpha in &spec.alpha {
        for &j in &spec.j {
            let params = MseBoundParams::new(alpha, j, a)?;
            rows.push(BoundRow {
                alpha: Some(alpha),
                j: Some(j),
                ..BoundRow::scalar("mse_lower_bound", None, mse_lower_bound(&params, dims)?)
            });
        }
    }
    Ok(rows)
}
