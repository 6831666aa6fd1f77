//! Regularity criteria for Levy and Wiener convolutions, decided from the
//! exponents of the p-series that the moment conditions reduce to.
//!
//! Power-law families are measured with the weights `n^{2 rho}` on the mode
//! of rank `n`, i.e. `|e_n|_rho = n^rho`. This is the convention under which
//! the diagonal Poisson conditions read `sum n^{2(delta-k)} < inf` and
//! `sum n^{4(eps+delta-k)} < inf`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, Result};
use crate::noise::{check_alpha, LevyMeasure, LevyModel};
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{FractionalIndex, SpectralOperator};

/// `sum_n n^{exponent}` converges.
fn p_series_converges<T: Real>(exponent: T) -> bool {
    exponent < -T::one()
}

/// Mean-square continuity of `L_A` in `H_gamma`: when `int |z|_delta^2 nu(dz)`
/// is finite, returns the bound `1/2 + delta` (continuity for every smaller
/// `gamma`). Absent when the integral diverges or for alpha-stable noise.
pub fn check_ms_continuity<T: Real>(model: &LevyModel<T>, delta: FractionalIndex<T>) -> Option<T> {
    let d = delta.value();
    let bound = lit::<T>(0.5) + d;
    match &model.measure {
        LevyMeasure::DiagonalPoisson { k } => p_series_converges(lit::<T>(2.0) * (d - *k)).then_some(bound),
        LevyMeasure::FiniteAtomic { .. } => Some(bound),
        LevyMeasure::DiagonalAlphaStable { .. } => None,
    }
}

/// Cadlag criterion for `L_A` in `H_gamma`: when
/// `int |z|_delta^2 + |z|_{eps+delta}^4 nu(dz)` is finite, returns the bound
/// `eps + delta`. Requires `0 <= eps <= 1/4`.
pub fn check_cadlag_pz<T: Real>(model: &LevyModel<T>, delta: FractionalIndex<T>, eps: T) -> Result<Option<T>> {
    if !(eps >= T::zero() && eps <= lit(0.25)) {
        return Err(invalid(format!("eps must lie in [0, 1/4], got {eps}")));
    }
    let d = delta.value();
    let bound = eps + d;
    Ok(match &model.measure {
        LevyMeasure::DiagonalPoisson { k } => (p_series_converges(lit::<T>(2.0) * (d - *k))
            && p_series_converges(lit::<T>(4.0) * (eps + d - *k)))
        .then_some(bound),
        LevyMeasure::FiniteAtomic { .. } => Some(bound),
        LevyMeasure::DiagonalAlphaStable { .. } => None,
    })
}

/// `sum |sigma_n lambda_n^delta|^alpha < inf` for `sigma_n = n^{-beta}`. With
/// `lambda_n` growing like `n^{2/d}` in the rank `n`, this is the exponent
/// test `alpha (2 delta / d - beta) < -1`; in `d = 1`, `alpha (2 delta - beta) < -1`.
pub fn check_liu<T: Real>(alpha: T, beta: T, delta: FractionalIndex<T>, op: &SpectralOperator<T>) -> Result<bool> {
    check_alpha(alpha)?;
    let dim = T::from_usize(op.dim()).unwrap();
    let growth = lit::<T>(2.0) / dim;
    Ok(p_series_converges(alpha * (growth * delta.value() - beta)))
}

/// Whether `L` itself is a Levy process in `H_gamma`. For the diagonal
/// Poisson family this is `sum min(n^{2(gamma-k)}, 1) < inf`, i.e.
/// `k > 1/2 + gamma`; finite measures always qualify; for alpha-stable noise
/// it is the summability of `|sigma_n lambda_n^gamma|^alpha`.
pub fn is_levy_in_h_gamma<T: Real>(
    model: &LevyModel<T>,
    gamma: FractionalIndex<T>,
    op: &SpectralOperator<T>,
) -> Result<bool> {
    Ok(match &model.measure {
        LevyMeasure::DiagonalPoisson { k } => p_series_converges(lit::<T>(2.0) * (gamma.value() - *k)),
        LevyMeasure::FiniteAtomic { .. } => true,
        LevyMeasure::DiagonalAlphaStable { alpha, beta, .. } => check_liu(*alpha, *beta, gamma, op)?,
    })
}

/// Continuity of the Wiener convolution in `C([0,1]^d)`: `delta_R > (d-2)/4`.
pub fn wiener_sup_continuity<T: Real>(op: &SpectralOperator<T>) -> bool {
    let d = T::from_usize(op.dim()).unwrap();
    op.color_exponent() > (d - lit(2.0)) / lit(4.0)
}

/// Collected regularity verdicts for one noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    /// `1/2 + delta`, or `-inf` when the square-moment condition fails.
    pub ms_continuity_gamma_bound: f64,
    /// `eps + delta`, or `-inf` when the cadlag condition fails.
    pub cadlag_gamma_bound: f64,
    pub conditions: BTreeMap<String, bool>,
    /// Fitted exponent and its standard error, when a statistic was run.
    pub gs_exponent: Option<(f64, f64)>,
}

/// Runs every applicable checker for `model` at the indices `delta`, `eps`
/// and the target `gamma`.
pub fn regularity_report<T: Real>(
    model: &LevyModel<T>,
    op: &SpectralOperator<T>,
    delta: FractionalIndex<T>,
    eps: T,
    gamma: FractionalIndex<T>,
) -> Result<RegularityReport> {
    let ms = check_ms_continuity(model, delta);
    let cadlag = check_cadlag_pz(model, delta, eps)?;
    let mut conditions = BTreeMap::new();
    conditions.insert("ms_continuity".to_string(), ms.is_some());
    conditions.insert("cadlag".to_string(), cadlag.is_some());
    conditions.insert("is_levy_in_Hgamma".to_string(), is_levy_in_h_gamma(model, gamma, op)?);
    conditions.insert(
        "cadlag_in_Hgamma".to_string(),
        cadlag.is_some_and(|b| gamma.value() < b),
    );
    if let LevyMeasure::DiagonalAlphaStable { alpha, beta, .. } = &model.measure {
        conditions.insert("liu".to_string(), check_liu(*alpha, *beta, delta, op)?);
    }
    conditions.insert("wiener_sup_continuity".to_string(), wiener_sup_continuity(op));
    Ok(RegularityReport {
        ms_continuity_gamma_bound: ms.map_or(f64::NEG_INFINITY, to_f64),
        cadlag_gamma_bound: cadlag.map_or(f64::NEG_INFINITY, to_f64),
        conditions,
        gs_exponent: None,
    })
}

impl fmt::Display for RegularityReport {
    /// Flat `key=value` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ms_continuity_gamma_bound={}", self.ms_continuity_gamma_bound)?;
        writeln!(f, "cadlag_gamma_bound={}", self.cadlag_gamma_bound)?;
        for (k, v) in &self.conditions {
            writeln!(f, "{k}={v}")?;
        }
        if let Some((s, se)) = self.gs_exponent {
            writeln!(f, "gs_exponent={s}")?;
            writeln!(f, "gs_exponent_stderr={se}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fi(x: f64) -> FractionalIndex<f64> {
        FractionalIndex::new(x).unwrap()
    }

    #[test]
    fn diagonal_poisson_table() {
        let m = LevyModel::diagonal_poisson(1.5).unwrap();
        assert_eq!(check_ms_continuity(&m, fi(0.0)), Some(0.5));
        let m = LevyModel::diagonal_poisson(0.25).unwrap();
        assert_eq!(check_ms_continuity(&m, fi(0.5)), None);
        let m = LevyModel::diagonal_poisson(0.75).unwrap();
        assert_eq!(check_cadlag_pz(&m, fi(0.0), 0.25).unwrap(), Some(0.25));
        let m = LevyModel::diagonal_poisson(0.5).unwrap();
        assert_eq!(check_cadlag_pz(&m, fi(0.0), 0.25).unwrap(), None);
        assert!(check_cadlag_pz(&m, fi(0.0), 0.3).is_err());
        assert!(check_cadlag_pz(&m, fi(0.0), -0.1).is_err());
    }

    #[test]
    fn zero_eps_reduces_to_square_condition() {
        for k in [0.3, 0.5, 0.6, 0.75, 1.5] {
            for d in [0.0, 0.1, 0.4] {
                let m = LevyModel::diagonal_poisson(k).unwrap();
                let c = check_cadlag_pz(&m, fi(d), 0.0).unwrap();
                let ms = check_ms_continuity(&m, fi(d));
                assert_eq!(c.is_some(), ms.is_some());
                if let Some(b) = c {
                    assert_eq!(b, d);
                }
            }
        }
    }

    #[test]
    fn empty_measure_is_regular() {
        let m = LevyModel::<f64>::finite_atomic(vec![]).unwrap();
        assert_eq!(check_ms_continuity(&m, fi(0.3)), Some(0.8));
    }
}
