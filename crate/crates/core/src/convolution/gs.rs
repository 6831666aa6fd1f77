//! Monte Carlo estimate of the fourth-moment increment product
//! `E[|L_A(t+h) - L_A(t)|_gamma^2 |L_A(t) - L_A(t-h)|_gamma^2]` and its
//! log-log growth exponent in `h`.

use rayon::prelude::*;

use super::levy_convolution_at;
use crate::error::{invalid, Error, Result};
use crate::noise::{sample_jump_path, LevyModel, RngStream};
use crate::scalar::{to_f64, weighted_ls_slope, Real};
use crate::spectral::{FractionalIndex, SpectralOperator, SpectralVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsRow {
    pub h: f64,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsStatistic {
    pub rows: Vec<GsRow>,
    /// Weighted log-log slope of estimate against `h`, with standard error.
    /// Absent when fewer than two estimates are positive.
    pub slope: Option<(f64, f64)>,
}

/// Replica `r` uses `stream.replica(r)`; every `h` is evaluated on the same
/// jump paths (common random numbers), sampled on `(0, t + max h]`.
pub fn gs_statistic<T: Real>(
    model: &LevyModel<T>,
    op: &SpectralOperator<T>,
    gamma: FractionalIndex<T>,
    h_list: &[T],
    t: T,
    replicas: usize,
    stream: RngStream,
) -> Result<GsStatistic> {
    if !model.is_finite_activity() {
        return Err(Error::Unsupported(
            "alpha-stable noise has infinite fourth moments, so the increment statistic is undefined".into(),
        ));
    }
    if h_list.is_empty() || replicas < 2 {
        return Err(invalid("need at least one h and two replicas"));
    }
    let h_max = h_list.iter().fold(T::zero(), |m, &h| m.max(h));
    if h_list.iter().any(|&h| !(h > T::zero() && h < t)) {
        return Err(invalid("every h must satisfy 0 < h < t"));
    }
    let horizon = t + h_max;
    let weights: Vec<T> = op
        .eigenvalues()
        .iter()
        .map(|&l| l.powf(gamma.value() + gamma.value()))
        .collect();
    let sq = |a: &SpectralVector<T>, b: &SpectralVector<T>| -> T {
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .zip(&weights)
            .map(|((&x, &y), &w)| w * (x - y) * (x - y))
            .sum()
    };

    let per_replica: Vec<Vec<f64>> = (0..replicas)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let path = sample_jump_path(model, op, horizon, stream.replica(r as u64))?;
            let mid = levy_convolution_at(&path, op, t);
            Ok(h_list
                .iter()
                .map(|&h| {
                    let fwd = levy_convolution_at(&path, op, t + h);
                    let back = levy_convolution_at(&path, op, t - h);
                    to_f64(sq(&fwd, &mid) * sq(&mid, &back))
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let n = replicas as f64;
    let rows: Vec<GsRow> = h_list
        .iter()
        .enumerate()
        .map(|(j, &h)| {
            let mean = per_replica.iter().map(|v| v[j]).sum::<f64>() / n;
            let var = per_replica.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            GsRow {
                h: to_f64(h),
                estimate: mean,
                stderr: (var / n).sqrt(),
            }
        })
        .collect();

    let usable: Vec<&GsRow> = rows.iter().filter(|r| r.estimate > 0.0 && r.stderr > 0.0).collect();
    let x: Vec<f64> = usable.iter().map(|r| r.h.ln()).collect();
    let y: Vec<f64> = usable.iter().map(|r| r.estimate.ln()).collect();
    // Delta method: Var(log est) ~ (stderr / est)^2.
    let w: Vec<f64> = usable.iter().map(|r| (r.estimate / r.stderr).powi(2)).collect();
    let slope = weighted_ls_slope(&x, &y, &w);
    Ok(GsStatistic { rows, slope })
}
