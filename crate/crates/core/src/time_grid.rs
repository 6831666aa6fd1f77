//! Time grids shared by the convolution and the deterministic solver.
//!
//! A grid is a strictly increasing vector `0 = t_0 < ... < t_M = T`. Event
//! times (jumps) are inserted exactly so that no step crosses a jump.

use crate::error::{invalid, Result};
use crate::scalar::{lit, Real};

/// `0, h, 2h, ...` closed by the horizon; the last step is shortened if
/// `T / h` is not an integer.
pub fn uniform<T: Real>(horizon: T, step: T) -> Result<Vec<T>> {
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(invalid(format!("horizon must be positive, got {horizon}")));
    }
    if !(step > T::zero()) || !step.is_finite() {
        return Err(invalid(format!("time step must be positive, got {step}")));
    }
    let ratio = horizon / step;
    // Tolerate ratios that miss an integer only by rounding.
    let steps = (ratio - lit::<T>(1e-9) * ratio.max(T::one())).ceil().max(T::one());
    let m = steps.to_usize().ok_or_else(|| invalid("too many time steps"))?;
    let mut grid: Vec<T> = (0..m).map(|i| T::from_usize(i).unwrap() * step).collect();
    grid.push(horizon);
    Ok(grid)
}

/// Union of `base` with the event times in `(0, T]`. An event within a
/// relative `1e-12` of a base point replaces it, so events stay exact.
pub fn with_events<T: Real>(base: &[T], events: &[T]) -> Result<Vec<T>> {
    validate(base)?;
    let horizon = *base.last().unwrap();
    let tol = lit::<T>(1e-12) * horizon;
    let mut ev: Vec<T> = events.to_vec();
    if ev.iter().any(|&e| !(e > T::zero() && e <= horizon)) {
        return Err(invalid("event times must lie in (0, T]"));
    }
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.dedup();

    let mut out = Vec::with_capacity(base.len() + ev.len());
    let (mut i, mut j) = (0, 0);
    while i < base.len() || j < ev.len() {
        let take_event = j < ev.len() && (i >= base.len() || ev[j] <= base[i]);
        let t = if take_event {
            j += 1;
            ev[j - 1]
        } else {
            i += 1;
            base[i - 1]
        };
        match out.last_mut() {
            Some(last) if t - *last <= tol => {
                // Prefer exact event times; t = 0 is never replaced.
                if take_event && *last != T::zero() {
                    *last = t;
                }
            }
            _ => out.push(t),
        }
    }
    Ok(out)
}

/// Checks `t_0 = 0`, strict increase, at least two points, finite entries.
pub fn validate<T: Real>(grid: &[T]) -> Result<()> {
    if grid.len() < 2 {
        return Err(invalid("time grid needs at least two points"));
    }
    if grid[0] != T::zero() {
        return Err(invalid("time grid must start at 0"));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(invalid("time grid has non-finite entries"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("time grid must be strictly increasing"));
    }
    Ok(())
}

/// Largest step of a grid.
pub fn max_step<T: Real>(grid: &[T]) -> T {
    grid.windows(2).fold(T::zero(), |m, w| m.max(w[1] - w[0]))
}

/// Index of the grid point equal to `t`, if any.
pub fn position<T: Real>(grid: &[T], t: T) -> Option<usize> {
    grid.binary_search_by(|x| x.partial_cmp(&t).unwrap()).ok()
}
