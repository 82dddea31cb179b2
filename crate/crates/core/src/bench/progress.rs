use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{HppError, Result};

/// Normalized progress `w^i = (f_max - f^i) / (f_max - f_min)` of one
/// algorithm on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgressCurve {
    pub w: Vec<f64>,
    pub f_max: f64,
    pub f_min: f64,
    pub ridge_solves_per_point: Vec<usize>,
    /// `f_max == f_min`; `w` is then all ones.
    pub degenerate: bool,
}

/// Objective values (and cumulative ridge solves) after each iteration.
#[derive(Debug, Clone, Default)]
pub struct RunCurve {
    pub objective: Vec<f64>,
    pub ridge_solves: Vec<usize>,
}

/// Normalizes the runs of several algorithms on one dataset against each
/// other: `f_max` is the largest first-iteration objective, `f_min` the
/// smallest objective at the last iteration all runs share. Curves are
/// truncated to that common length.
pub fn progress_normalize(curves: &BTreeMap<String, RunCurve>) -> Result<BTreeMap<String, ProgressCurve>> {
    let common = curves.values().map(|c| c.objective.len()).min().unwrap_or(0);
    if common == 0 {
        return Err(HppError::arg("every run needs at least one iteration"));
    }
    let f_max = curves
        .values()
        .map(|c| c.objective[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let f_min = curves
        .values()
        .map(|c| c.objective[common - 1])
        .fold(f64::INFINITY, f64::min);
    let range = f_max - f_min;
    let degenerate = !(range > 0.0);
    Ok(curves
        .iter()
        .map(|(name, c)| {
            let w = c.objective[..common]
                .iter()
                .map(|f| if degenerate { 1.0 } else { (f_max - f) / range })
                .collect();
            let ridge = c.ridge_solves.iter().take(common).copied().collect();
            (
                name.clone(),
                ProgressCurve {
                    w,
                    f_max,
                    f_min,
                    ridge_solves_per_point: ridge,
                    degenerate,
                },
            )
        })
        .collect())
}

/// Pointwise mean of several curves, truncated to the shortest.
pub fn average_curves<'a>(curves: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
    let curves: Vec<&[f64]> = curves.into_iter().collect();
    let len = curves.iter().map(|c| c.len()).min().unwrap_or(0);
    (0..len)
        .map(|i| curves.iter().map(|c| c[i]).sum::<f64>() / curves.len() as f64)
        .collect()
}
