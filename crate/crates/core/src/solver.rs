//! Deterministic mild solver for `dy/dt = A y + F(y + f(t^-))`, `y(0) = x`,
//! with a cadlag forcing `f` given on a time grid, the drift replaced by its
//! Yosida regularization `F_delta` and `A` optionally by its bounded
//! approximant `A_theta` (eigenvalues `lambda / (1 + theta lambda)`).
//!
//! The state is advanced in spectral coordinates, where the semigroup is
//! diagonal; the drift is evaluated on the grid, where it is pointwise.

use crate::convolution::ConvolutionPath;
use crate::dissipative::{yosida_drift, DriftSpec, YosidaParams};
use crate::error::{check_len, invalid, Error, Result};
use crate::scalar::{lit, phi1, to_f64, ls_slope, Real};
use crate::spectral::{GridFunction, SpectralOperator, SpectralVector};
use crate::time_grid;

/// Time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepper {
    /// `y_{m+1} = e^{-r h} y_m + phi_1(r, h) F_delta(y_m + f(t_m^-))`, per mode.
    ExponentialEuler,
    /// Per step, the fixed point of
    /// `y = e^{-r h} y_m + phi_1(r, h) F_delta(y + f(t_{m+1}^-))` by Picard
    /// iteration; steps are bisected until the map contracts.
    PicardTheta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub yosida_delta: T,
    /// `0` uses the exact eigenvalues.
    pub yosida_theta: T,
    pub time_step: T,
    pub picard_tol: T,
    pub picard_max_iters: usize,
    pub stepper: Stepper,
    pub newton_tol: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            yosida_delta: lit(1e-6),
            yosida_theta: T::zero(),
            time_step: lit(1e-3),
            picard_tol: lit(1e-12),
            picard_max_iters: 200,
            stepper: Stepper::ExponentialEuler,
            newton_tol: lit(1e-12),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self, drift: &DriftSpec<T>) -> Result<YosidaParams<T>> {
        if !(self.time_step > T::zero()) {
            return Err(invalid("time step must be positive"));
        }
        if !(self.yosida_theta >= T::zero()) {
            return Err(invalid("theta must be nonnegative"));
        }
        if !(self.picard_tol > T::zero()) || self.picard_max_iters == 0 {
            return Err(invalid("Picard tolerance and iteration limit must be positive"));
        }
        Ok(YosidaParams::new(self.yosida_delta, drift)?.with_tolerance(self.newton_tol, 200))
    }
}

/// Solution of the deterministic problem on the forcing's time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MildPath<T> {
    pub time_grid: Vec<T>,
    pub y: Vec<GridFunction<T>>,
    pub y_spectral: Vec<SpectralVector<T>>,
    pub config: SolverConfig<T>,
    /// Picard iterations per step (1 for the exponential Euler stepper).
    pub picard_iterations: Vec<usize>,
    /// Final Picard update size per step, `H` norm.
    pub picard_residuals: Vec<T>,
}

/// Eigenvalues of `-A_theta`: `lambda` for `theta = 0`, else `lambda / (1 + theta lambda)`.
pub fn theta_eigenvalues<T: Real>(op: &SpectralOperator<T>, theta: T) -> Vec<T> {
    op.eigenvalues()
        .iter()
        .map(|&l| if theta == T::zero() { l } else { l / (T::one() + theta * l) })
        .collect()
}

struct Context<'a, T> {
    op: &'a SpectralOperator<T>,
    drift: &'a DriftSpec<T>,
    params: YosidaParams<T>,
    rates: Vec<T>,
    config: SolverConfig<T>,
    lip: T,
}

impl<T: Real> Context<'_, T> {
    /// Spectral coefficients of `F_delta(y + f)` for grid functions `y`, `f`.
    fn drift_spectral(&self, y: &GridFunction<T>, f: &GridFunction<T>) -> Result<SpectralVector<T>> {
        if self.drift.is_zero() {
            return Ok(SpectralVector::zeros(self.op.len()));
        }
        let u = y.add(f)?;
        self.op.to_spectral(&yosida_drift(self.drift, &self.params, &u)?)
    }

    fn linear_step(&self, y: &SpectralVector<T>, drift: &SpectralVector<T>, h: T) -> SpectralVector<T> {
        let c = y
            .coeffs()
            .iter()
            .zip(drift.coeffs())
            .zip(&self.rates)
            .map(|((&a, &d), &r)| (-r * h).exp() * a + phi1(r, h) * d)
            .collect();
        SpectralVector::new(c).expect("finite state")
    }

    /// One implicit step from `y0` over `h` with the forcing `f1` at the step
    /// end. Returns the new state, iterations used and the last update size.
    fn picard_step(
        &self,
        y0: &SpectralVector<T>,
        f0: &GridFunction<T>,
        f1: &GridFunction<T>,
        h: T,
        space: crate::spectral::SpaceTag,
    ) -> Result<(SpectralVector<T>, usize, T)> {
        let start_grid = self.op.from_spectral(y0, space)?;
        let mut y = self.linear_step(y0, &self.drift_spectral(&start_grid, f0)?, h);
        if self.drift.is_zero() {
            return Ok((y, 1, T::zero()));
        }
        let mut update = T::infinity();
        for it in 1..=self.config.picard_max_iters {
            let grid = self.op.from_spectral(&y, space)?;
            let next = self.linear_step(y0, &self.drift_spectral(&grid, f1)?, h);
            update = next.sub(&y)?.norm();
            y = next;
            if update <= self.config.picard_tol * (T::one() + y.norm()) {
                return Ok((y, it, update));
            }
        }
        Err(Error::NoConvergence {
            method: "Picard step",
            iterations: self.config.picard_max_iters,
            residual: to_f64(update),
        })
    }
}

/// Number of bisections making `(2/delta + |zeta_F|) h` at most `1/2`.
const MAX_BISECTIONS: u32 = 30;

/// Solves on `f.time_grid` with initial datum `x`. The drift is sampled with
/// the stored left limits of `f` only, never with `f(t)` itself.
pub fn solve_mild<T: Real>(
    op: &SpectralOperator<T>,
    drift: &DriftSpec<T>,
    x: &GridFunction<T>,
    f: &ConvolutionPath<T>,
    config: &SolverConfig<T>,
) -> Result<MildPath<T>> {
    op.check_grid(x)?;
    let params = config.validate(drift)?;
    time_grid::validate(&f.time_grid)?;
    check_len(f.time_grid.len(), f.left_limits.len())?;
    let max_step = time_grid::max_step(&f.time_grid);
    if max_step > config.time_step * (T::one() + lit(1e-9)) {
        return Err(Error::GridMismatch(format!(
            "forcing grid has a step {max_step} larger than the solver step {}",
            config.time_step
        )));
    }
    let ctx = Context {
        op,
        drift,
        params,
        rates: theta_eigenvalues(op, config.yosida_theta),
        config: *config,
        // Without a drift the step map is constant and needs no subdivision.
        lip: if drift.is_zero() {
            T::zero()
        } else {
            lit::<T>(2.0) / config.yosida_delta + drift.dissipativity_constant().abs()
        },
    };
    let space = x.space();
    let to_grid = |v: &SpectralVector<T>| op.from_spectral(v, space);

    let m_total = f.time_grid.len();
    let mut y = Vec::with_capacity(m_total);
    let mut y_spectral = Vec::with_capacity(m_total);
    let mut iterations = Vec::with_capacity(m_total);
    let mut residuals = Vec::with_capacity(m_total);
    let mut state = op.to_spectral(x)?;
    y.push(x.clone());
    y_spectral.push(state.clone());
    iterations.push(0);
    residuals.push(T::zero());

    for m in 0..m_total - 1 {
        let h = f.time_grid[m + 1] - f.time_grid[m];
        let (next, its, res) = match config.stepper {
            Stepper::ExponentialEuler => {
                let f_left = to_grid(&f.left_limits[m])?;
                let d = ctx.drift_spectral(&y[m], &f_left)?;
                (ctx.linear_step(&state, &d, h), 1, T::zero())
            }
            Stepper::PicardTheta => {
                // f is continuous on (t_m, t_{m+1}); its right limit at t_m is
                // values[m] and its left limit at t_{m+1} is left_limits[m+1].
                let fa = &f.values[m];
                let fb = &f.left_limits[m + 1];
                let mut levels = 0;
                while ctx.lip * h / lit::<T>(2.0).powi(levels as i32) > lit(0.5) {
                    levels += 1;
                    if levels > MAX_BISECTIONS {
                        return Err(Error::NoConvergence {
                            method: "Picard step bisection",
                            iterations: MAX_BISECTIONS as usize,
                            residual: to_f64(ctx.lip * h),
                        });
                    }
                }
                let sub = 1usize << levels;
                let hs = h / T::from_usize(sub).unwrap();
                let mut s = state.clone();
                let (mut its, mut res) = (0, T::zero());
                let interp = |k: usize| -> Result<GridFunction<T>> {
                    let w = T::from_usize(k).unwrap() / T::from_usize(sub).unwrap();
                    let c: Vec<T> = fa
                        .coeffs()
                        .iter()
                        .zip(fb.coeffs())
                        .map(|(&a, &b)| a + (b - a) * w)
                        .collect();
                    to_grid(&SpectralVector::new(c)?)
                };
                let mut f_prev = to_grid(&f.left_limits[m])?;
                for k in 1..=sub {
                    let f_end = if k == sub { to_grid(fb)? } else { interp(k)? };
                    let (n, i, r) = ctx.picard_step(&s, &f_prev, &f_end, hs, space)?;
                    s = n;
                    its += i;
                    res = res.max(r);
                    f_prev = f_end;
                }
                (s, its, res)
            }
        };
        state = next;
        y.push(to_grid(&state)?);
        y_spectral.push(state.clone());
        iterations.push(its);
        residuals.push(res);
    }
    Ok(MildPath {
        time_grid: f.time_grid.clone(),
        y,
        y_spectral,
        config: *config,
        picard_iterations: iterations,
        picard_residuals: residuals,
    })
}

/// [`solve_mild`] with the exponential Euler stepper.
pub fn exp_euler_solve<T: Real>(
    op: &SpectralOperator<T>,
    drift: &DriftSpec<T>,
    x: &GridFunction<T>,
    f: &ConvolutionPath<T>,
    config: &SolverConfig<T>,
) -> Result<MildPath<T>> {
    let mut c = *config;
    c.stepper = Stepper::ExponentialEuler;
    solve_mild(op, drift, x, f, &c)
}

/// One row of a Yosida continuation table: the sup over grid times of the
/// squared `H` distance between the solutions at `delta` and `delta / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationRow {
    pub delta: f64,
    pub sup_sq_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationTable {
    pub rows: Vec<ContinuationRow>,
    /// Log-log slope of `sup_sq_distance` against `delta`.
    pub slope: Option<f64>,
    /// Whether the slope is at least `0.9`, i.e. the `C (delta + tau)`
    /// envelope is respected.
    pub envelope_ok: bool,
}

/// Solves at `delta_i = base_delta / 2^i`, `i < levels`, and tabulates the
/// distances between consecutive levels. Returns the finest path.
pub fn yosida_continuation<T: Real>(
    op: &SpectralOperator<T>,
    drift: &DriftSpec<T>,
    x: &GridFunction<T>,
    f: &ConvolutionPath<T>,
    base_delta: T,
    levels: usize,
    config: &SolverConfig<T>,
) -> Result<(MildPath<T>, ContinuationTable)> {
    let deltas: Vec<T> = (0..levels)
        .map(|i| base_delta / lit::<T>(2.0).powi(i as i32))
        .collect();
    yosida_continuation_with(op, drift, x, f, &deltas, config)
}

/// As [`yosida_continuation`] with an explicit decreasing `delta` sequence.
pub fn yosida_continuation_with<T: Real>(
    op: &SpectralOperator<T>,
    drift: &DriftSpec<T>,
    x: &GridFunction<T>,
    f: &ConvolutionPath<T>,
    deltas: &[T],
    config: &SolverConfig<T>,
) -> Result<(MildPath<T>, ContinuationTable)> {
    if deltas.len() < 2 {
        return Err(invalid("continuation needs at least two levels"));
    }
    let paths: Vec<MildPath<T>> = deltas
        .iter()
        .map(|&d| {
            let mut c = *config;
            c.yosida_delta = d;
            solve_mild(op, drift, x, f, &c)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<ContinuationRow> = paths
        .windows(2)
        .zip(deltas)
        .map(|(p, &d)| ContinuationRow {
            delta: to_f64(d),
            sup_sq_distance: to_f64(sup_sq_distance(&p[0], &p[1])),
        })
        .collect();
    let usable: Vec<&ContinuationRow> = rows.iter().filter(|r| r.sup_sq_distance > 0.0).collect();
    let slope = if usable.len() >= 2 {
        let lx: Vec<f64> = usable.iter().map(|r| r.delta.ln()).collect();
        let ly: Vec<f64> = usable.iter().map(|r| r.sup_sq_distance.ln()).collect();
        ls_slope(&lx, &ly)
    } else {
        None
    };
    let table = ContinuationTable {
        envelope_ok: slope.is_some_and(|s| s >= 0.9),
        rows,
        slope,
    };
    Ok((paths.into_iter().last().unwrap(), table))
}

/// `sup_m |a_m - b_m|_H^2` over the common grid.
pub fn sup_sq_distance<T: Real>(a: &MildPath<T>, b: &MildPath<T>) -> T {
    a.y_spectral
        .iter()
        .zip(&b.y_spectral)
        .map(|(u, v)| {
            u.coeffs()
                .iter()
                .zip(v.coeffs())
                .map(|(&p, &q)| (p - q) * (p - q))
                .sum::<T>()
        })
        .fold(T::zero(), T::max)
}

/// Checks `gamma(t_i) <= e^{b (t_i - t_0)} gamma(t_0) + int_{t_0}^{t_i} e^{b (t_i - s)} g(s) ds`
/// at every grid time, the integral by the trapezoidal rule, with tolerance
/// `1e-9` times the larger side.
pub fn gronwall_check<T: Real>(times: &[T], gamma: &[T], b: T, g: &[T]) -> Result<bool> {
    check_len(times.len(), gamma.len())?;
    check_len(times.len(), g.len())?;
    if times.is_empty() {
        return Ok(true);
    }
    let t0 = times[0];
    let tol = lit::<T>(1e-9);
    let half = lit::<T>(0.5);
    for i in 0..times.len() {
        let ti = times[i];
        let mut integral = T::zero();
        for k in 0..i {
            let (s0, s1) = (times[k], times[k + 1]);
            let a = (b * (ti - s0)).exp() * g[k];
            let c = (b * (ti - s1)).exp() * g[k + 1];
            integral = integral + half * (s1 - s0) * (a + c);
        }
        let rhs = (b * (ti - t0)).exp() * gamma[0] + integral;
        let scale = gamma[i].abs().max(rhs.abs()).max(T::min_positive_value());
        if gamma[i] > rhs + tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}
