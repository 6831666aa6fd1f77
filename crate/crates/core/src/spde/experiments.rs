//! Monte Carlo checks of the pathwise estimates: contraction in the initial
//! datum, the a-priori bound through the noise, and the generalized mild
//! solution for `H`-valued data.

use rayon::prelude::*;

use super::{sample_noise, solve_with_noise, PathSolution, ProblemSpec};
use crate::error::{check_len, invalid, Result};
use crate::noise::RngStream;
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{GridFunction, SpectralVector};

/// Per replica: largest ratio `|X(t,x) - X(t,z)| / (e^{zeta t} |x - z|)` in
/// both norms and the number of grid times exceeding the slack `1 + 10 h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionRow {
    pub replica: u64,
    pub max_ratio_h: f64,
    pub max_ratio_e: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub rows: Vec<ContractionRow>,
    pub slack: f64,
}

impl ContractionReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }

    pub fn max_ratio_h(&self) -> f64 {
        self.rows.iter().map(|r| r.max_ratio_h).fold(0.0, f64::max)
    }

    pub fn max_ratio_e(&self) -> f64 {
        self.rows.iter().map(|r| r.max_ratio_e).fold(0.0, f64::max)
    }
}

fn slack<T: Real>(spec: &ProblemSpec<T>) -> f64 {
    1.0 + 10.0 * to_f64(spec.solver.time_step)
}

/// Solves from `x` and `z` with shared noise per replica (`stream.replica(r)`).
pub fn contraction_experiment<T: Real>(
    spec: &ProblemSpec<T>,
    x: &GridFunction<T>,
    z: &GridFunction<T>,
    replicas: usize,
    stream: RngStream,
) -> Result<ContractionReport> {
    spec.check_structure()?;
    let zeta = to_f64(spec.zeta());
    let s = slack(spec);
    let x = x.clone().with_space(spec.space);
    let z = z.clone().with_space(spec.space);
    let d0 = x.sub(&z)?;
    let (d0_h, d0_e) = (to_f64(d0.h_norm()), to_f64(d0.space_norm()));
    let rows = (0..replicas as u64)
        .into_par_iter()
        .map(|r| -> Result<ContractionRow> {
            let noise = sample_noise(spec, stream.replica(r))?;
            let a = solve_with_noise(spec, &x, &noise)?;
            let b = solve_with_noise(spec, &z, &noise)?;
            let mut row = ContractionRow {
                replica: r,
                max_ratio_h: 0.0,
                max_ratio_e: 0.0,
                violations: 0,
            };
            for (m, &t) in a.time_grid().iter().enumerate() {
                let d = a.x[m].sub(&b.x[m])?;
                let env = (zeta * to_f64(t)).exp();
                let ratio = |dist: f64, base: f64| if base > 0.0 { dist / (env * base) } else if dist > 0.0 { f64::INFINITY } else { 0.0 };
                let rh = ratio(to_f64(d.h_norm()), d0_h);
                let re = ratio(to_f64(d.space_norm()), d0_e);
                row.max_ratio_h = row.max_ratio_h.max(rh);
                row.max_ratio_e = row.max_ratio_e.max(re);
                if rh > s || re > s {
                    row.violations += 1;
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContractionReport { rows, slack: s })
}

/// Per replica: largest ratio of `|X(t)|` to the a-priori right-hand side in
/// both norms, and the count of grid times beyond the slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriRow {
    pub replica: u64,
    pub max_ratio_h: f64,
    pub max_ratio_e: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AprioriReport {
    pub rows: Vec<AprioriRow>,
    pub slack: f64,
}

impl AprioriReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.max_ratio_h.max(r.max_ratio_e)).fold(0.0, f64::max)
    }
}

/// Right-hand sides of the a-priori bound
/// `|X(t)| <= e^{zeta t}|x| + int_0^t e^{zeta(t-s)} (|F(Z(s^-))| + 2|zeta_F| |Z(s^-)|) ds + |Z(t)|`
/// along a solved path, for the norm `norm`. The integrand is cadlag-left:
/// on `(t_l, t_{l+1}]` it runs from its right limit at `t_l` (built on
/// `Z(t_l)`) to its value at `t_{l+1}` (built on `Z(t_{l+1}^-)`), and each
/// piece is integrated by the trapezoidal rule.
pub fn apriori_rhs<T: Real>(
    spec: &ProblemSpec<T>,
    x: &GridFunction<T>,
    sol: &PathSolution<T>,
    norm: impl Fn(&GridFunction<T>) -> T,
) -> Result<Vec<f64>> {
    let op = &spec.operator;
    let zeta = to_f64(spec.zeta());
    let zf = to_f64(spec.drift.dissipativity_constant()).abs();
    let integrand = |v: &SpectralVector<T>| -> Result<f64> {
        let g = op.from_spectral(v, spec.space)?;
        Ok(to_f64(norm(&spec.drift.eval(&g)?)) + 2.0 * zf * to_f64(norm(&g)))
    };
    let grid = sol.time_grid();
    let x0 = to_f64(norm(x));
    let mut out = Vec::with_capacity(grid.len());
    let mut integral = 0.0;
    for m in 0..grid.len() {
        if m > 0 {
            let h = to_f64(grid[m] - grid[m - 1]);
            let right_of_prev = integrand(&sol.z.values[m - 1])?;
            let left_of_here = integrand(&sol.z.left_limits[m])?;
            let decay = (zeta * h).exp();
            integral = decay * integral + 0.5 * h * (decay * right_of_prev + left_of_here);
        }
        let t = to_f64(grid[m]);
        out.push((zeta * t).exp() * x0 + integral + to_f64(norm(&sol.z_grid[m])));
    }
    Ok(out)
}

/// Checks the a-priori bound in `H` and `E` on `replicas` paths.
pub fn apriori_bound_experiment<T: Real>(
    spec: &ProblemSpec<T>,
    replicas: usize,
    stream: RngStream,
) -> Result<AprioriReport> {
    spec.check_structure()?;
    let s = slack(spec);
    let x = spec.initial_grid()?;
    let rows = (0..replicas as u64)
        .into_par_iter()
        .map(|r| -> Result<AprioriRow> {
            let noise = sample_noise(spec, stream.replica(r))?;
            let sol = solve_with_noise(spec, &x, &noise)?;
            let rhs_h = apriori_rhs(spec, &x, &sol, |g| g.h_norm())?;
            let rhs_e = apriori_rhs(spec, &x, &sol, |g| g.space_norm())?;
            let mut row = AprioriRow {
                replica: r,
                max_ratio_h: 0.0,
                max_ratio_e: 0.0,
                violations: 0,
            };
            for (m, xm) in sol.x.iter().enumerate() {
                let lh = to_f64(xm.h_norm());
                let le = to_f64(xm.space_norm());
                let ratio = |l: f64, r: f64| if r > 0.0 { l / r } else if l > 0.0 { f64::INFINITY } else { 0.0 };
                let (qh, qe) = (ratio(lh, rhs_h[m]), ratio(le, rhs_e[m]));
                row.max_ratio_h = row.max_ratio_h.max(qh);
                row.max_ratio_e = row.max_ratio_e.max(qe);
                if qh > s || qe > s {
                    row.violations += 1;
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AprioriReport { rows, slack: s })
}

/// Coefficient damping applied to spectral truncations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Taper {
    /// Plain truncation to the modes of rank `<= n`.
    #[default]
    None,
    /// Fejer weights `1 - (rank - 1) / n` on the retained modes.
    Fejer,
}

/// Consecutive-level comparison of a generalized mild solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyRow {
    pub n: usize,
    pub m: usize,
    /// `sup_t |X(t, x_n) - X(t, x_m)|_H`.
    pub sup_distance: f64,
    /// `|x_n - x_m|_H`.
    pub datum_distance: f64,
    /// `e^{zeta T} |x_n - x_m|_H`.
    pub bound: f64,
    /// `sup_distance <= bound * (1 + 10 h)`.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedResult<T> {
    /// Path from the finest approximant.
    pub path: PathSolution<T>,
    pub table: Vec<CauchyRow>,
}

/// Approximates the `H` datum of `spec` by truncations `x_n` (modes of rank
/// `<= n`, optionally tapered), solves each with the same noise and
/// tabulates the Cauchy increments between consecutive levels.
pub fn generalized_mild_solve<T: Real>(
    spec: &ProblemSpec<T>,
    levels: &[usize],
    taper: Taper,
    stream: RngStream,
) -> Result<GeneralizedResult<T>> {
    spec.check_structure()?;
    if levels.is_empty() || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("truncation levels must be nonempty and strictly increasing"));
    }
    let op = &spec.operator;
    let full = spec.initial_spectral()?;
    check_len(op.len(), full.len())?;
    let approximants: Vec<SpectralVector<T>> = levels
        .iter()
        .map(|&n| {
            let nn = T::from_usize(n).unwrap();
            let c = full
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let rank = op.rank(i);
                    if rank > n {
                        T::zero()
                    } else {
                        match taper {
                            Taper::None => v,
                            Taper::Fejer => v * (T::one() - T::from_usize(rank - 1).unwrap() / nn),
                        }
                    }
                })
                .collect();
            SpectralVector::new(c)
        })
        .collect::<Result<_>>()?;
    let noise = sample_noise(spec, stream)?;
    let solutions: Vec<PathSolution<T>> = approximants
        .par_iter()
        .map(|a| solve_with_noise(spec, &op.from_spectral(a, spec.space)?, &noise))
        .collect::<Result<_>>()?;

    let zeta_t = to_f64(spec.zeta() * spec.horizon);
    let s = slack(spec);
    let mut table = Vec::with_capacity(levels.len().saturating_sub(1));
    for k in 0..levels.len().saturating_sub(1) {
        let (a, b) = (&solutions[k], &solutions[k + 1]);
        let mut sup = T::zero();
        for m in 0..a.x.len() {
            let d = a.x_spectral(m)?.sub(&b.x_spectral(m)?)?;
            sup = sup.max(d.norm());
        }
        let datum = to_f64(approximants[k].sub(&approximants[k + 1])?.norm());
        let bound = zeta_t.exp() * datum;
        let sup = to_f64(sup);
        table.push(CauchyRow {
            n: levels[k],
            m: levels[k + 1],
            sup_distance: sup,
            datum_distance: datum,
            bound,
            within_bound: sup <= bound * s + lit::<f64>(1e-14),
        });
    }
    Ok(GeneralizedResult {
        path: solutions.into_iter().last().unwrap(),
        table,
    })
}
