//! Resolvent `J_delta` solving `J - delta (F(J) - zeta_F J) = x` and the
//! regularized drift `F_delta = F o J_delta`.

use super::{add_max_term, DriftSpec};
use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, Real};
use crate::spectral::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YosidaParams<T> {
    pub delta: T,
    pub newton_tol: T,
    pub newton_max_iters: usize,
}

impl<T: Real> YosidaParams<T> {
    /// Checks `0 < delta < 1 / |zeta_F|` (any positive `delta` if `zeta_F = 0`).
    pub fn new(delta: T, drift: &DriftSpec<T>) -> Result<Self> {
        let zeta = drift.dissipativity_constant().abs();
        if !(delta > T::zero()) || !delta.is_finite() || delta * zeta >= T::one() {
            return Err(invalid(format!(
                "Yosida parameter {delta} outside (0, 1/|zeta_F|) with zeta_F = {}",
                drift.dissipativity_constant()
            )));
        }
        Ok(Self {
            delta,
            newton_tol: lit(1e-12),
            newton_max_iters: 200,
        })
    }

    pub fn with_tolerance(mut self, tol: T, max_iters: usize) -> Self {
        self.newton_tol = tol;
        self.newton_max_iters = max_iters;
        self
    }
}

/// Solves `(1 + delta zeta) j - delta b(j) = y` for one grid point. The map
/// has derivative `>= 1`, so `|j - j*| <= |phi(j) - y|` brackets the root
/// from any starting point; Newton steps leaving the bracket are replaced by
/// bisection.
fn scalar_resolvent<T: Real>(f: &DriftSpec<T>, point: usize, delta: T, y: T, params: &YosidaParams<T>) -> Result<T> {
    let shift = T::one() + delta * f.dissipativity_constant();
    let phi = |j: T| shift * j - delta * f.b(point, j);
    let dphi = |j: T| shift - delta * f.b_prime(point, j);

    let r_zero = (phi(T::zero()) - y).abs();
    let r_y = (phi(y) - y).abs();
    let (mut lo, mut hi) = ((-r_zero).max(y - r_y), r_zero.min(y + r_y));
    if lo > hi {
        // Only possible through rounding; fall back to the wider bracket.
        lo = (-r_zero).min(y - r_y);
        hi = r_zero.max(y + r_y);
    }
    let mut j = y.max(lo).min(hi);
    let mut res = phi(j) - y;
    let eps = T::epsilon();
    for _ in 0..params.newton_max_iters {
        if res.abs() <= params.newton_tol {
            return Ok(j);
        }
        if res > T::zero() {
            hi = j;
        } else {
            lo = j;
        }
        if hi - lo <= lit::<T>(4.0) * eps * lo.abs().max(hi.abs()).max(T::min_positive_value()) {
            return Ok(j);
        }
        let newton = j - res / dphi(j);
        j = if newton > lo && newton < hi {
            newton
        } else {
            lo + (hi - lo) * lit(0.5)
        };
        res = phi(j) - y;
    }
    if res.abs() <= params.newton_tol {
        return Ok(j);
    }
    Err(Error::NoConvergence {
        method: "yosida resolvent",
        iterations: params.newton_max_iters,
        residual: crate::scalar::to_f64(res.abs()),
    })
}

/// `J_delta(x)`, per grid point for polynomial drifts. With a max term the
/// coupled equation is solved by the fixed-point iteration
/// `J <- Phi^{-1}(x + delta G(J))`, where `Phi` is the pointwise polynomial
/// map and `G(J) = g(running max |J|)`. `Phi^{-1}` is `1/(1 + delta Lip g)`
/// Lipschitz in sup norm, so the iteration contracts with factor
/// `delta Lip g / (1 + delta Lip g) < 1` for every admissible `delta`.
pub fn yosida_resolvent<T: Real>(
    f: &DriftSpec<T>,
    params: &YosidaParams<T>,
    x: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    f.check_grid(x)?;
    let delta = params.delta;
    let Some(g) = f.max_term else {
        let mut out = x.clone();
        for (point, v) in out.values_mut().iter_mut().enumerate() {
            *v = scalar_resolvent(f, point, delta, *v, params)?;
        }
        return Ok(out);
    };

    let lip = g.lipschitz();
    let mut j = x.clone();
    let mut rhs = vec![T::zero(); x.len()];
    let max_outer = 10_000;
    for _ in 0..max_outer {
        rhs.iter_mut().for_each(|r| *r = T::zero());
        add_max_term(g, j.values(), &mut rhs);
        let mut next = j.clone();
        for (point, v) in next.values_mut().iter_mut().enumerate() {
            *v = scalar_resolvent(f, point, delta, x.values()[point] + delta * rhs[point], params)?;
        }
        let step = next.sub(&j)?.sup_norm();
        j = next;
        // Distance to the fixed point is at most q/(1-q) * step = delta * lip * step.
        if step == T::zero() || delta * lip * step <= params.newton_tol {
            return Ok(j);
        }
    }
    Err(Error::NoConvergence {
        method: "max-term resolvent",
        iterations: max_outer,
        residual: f64::NAN,
    })
}

/// `F_delta(x) = F(J_delta(x))`.
pub fn yosida_drift<T: Real>(
    f: &DriftSpec<T>,
    params: &YosidaParams<T>,
    x: &GridFunction<T>,
) -> Result<GridFunction<T>> {
    f.eval(&yosida_resolvent(f, params, x)?)
}
