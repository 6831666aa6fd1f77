//! Pathwise solution of `dX = (A X + F(X)) dt + R dW + dL` by the splitting
//! `X = Y + Z_A`: the stochastic convolution `Z_A` is sampled exactly and `Y`
//! solves the deterministic mild equation forced by the left limits of `Z_A`.

mod experiments;
mod hypotheses;

pub use experiments::{
    apriori_bound_experiment, contraction_experiment, generalized_mild_solve, AprioriReport, AprioriRow,
    CauchyRow, ContractionReport, ContractionRow, GeneralizedResult, Taper,
};
pub use hypotheses::{validate_hypotheses, HypothesisCheck, HypothesisReport};

use crate::convolution::{alpha_stable_convolution, levy_convolution, wiener_convolution, ConvolutionPath};
use crate::dissipative::DriftSpec;
use crate::error::{invalid, Result};
use crate::noise::{labels, sample_jump_path, JumpPath, LevyModel, RngStream};
use crate::scalar::{phi1, Real};
use crate::solver::{solve_mild, MildPath, SolverConfig};
use crate::spectral::{GridFunction, SpaceTag, SpectralOperator, SpectralVector};
use crate::time_grid;

/// Initial condition: a grid function in `E`, or coefficients of an `H` datum.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum<T> {
    Grid(GridFunction<T>),
    Spectral(SpectralVector<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<T> {
    pub operator: SpectralOperator<T>,
    pub drift: DriftSpec<T>,
    /// Cylindrical Wiener noise colored by `(-A)^{delta_R}` of the operator.
    pub wiener: bool,
    pub levy: Option<LevyModel<T>>,
    pub initial: InitialDatum<T>,
    pub space: SpaceTag,
    pub horizon: T,
    pub solver: SolverConfig<T>,
}

impl<T: Real> ProblemSpec<T> {
    /// `zeta = zeta_A + zeta_F`.
    pub fn zeta(&self) -> T {
        self.operator.zeta_a() + self.drift.dissipativity_constant()
    }

    /// The initial datum as a grid function tagged with the problem's space.
    pub fn initial_grid(&self) -> Result<GridFunction<T>> {
        match &self.initial {
            InitialDatum::Grid(g) => {
                self.operator.check_grid(g)?;
                Ok(g.clone().with_space(self.space))
            }
            InitialDatum::Spectral(v) => self.operator.from_spectral(v, self.space),
        }
    }

    pub fn initial_spectral(&self) -> Result<SpectralVector<T>> {
        match &self.initial {
            InitialDatum::Grid(g) => self.operator.to_spectral(g),
            InitialDatum::Spectral(v) => {
                crate::error::check_len(self.operator.len(), v.len())?;
                Ok(v.clone())
            }
        }
    }

    /// Checks the structural invariants: max-term drifts need the sup-norm
    /// space; `L^p` targets need `p >= 2 deg(b)`.
    pub fn check_structure(&self) -> Result<()> {
        if !(self.horizon > T::zero()) {
            return Err(invalid("horizon must be positive"));
        }
        if self.drift.max_term().is_some() && (self.space != SpaceTag::ContinuousSup || self.operator.dim() != 1) {
            return Err(invalid("the running-max drift needs d = 1 and the sup-norm space"));
        }
        if let SpaceTag::LpGrid(p) = self.space {
            let need = 2 * self.drift.degree();
            if p < need as f64 {
                return Err(invalid(format!("L^p space needs p >= {need} for this drift, got {p}")));
            }
        }
        Ok(())
    }
}

/// One realization of the noise on the solver grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSample<T> {
    pub z: ConvolutionPath<T>,
    /// Present for finite-activity Levy noise.
    pub jumps: Option<JumpPath<T>>,
}

/// Samples `Z_A = W_A + L_A` on the uniform grid of step `h` refined by the
/// jump times of `L`.
pub fn sample_noise<T: Real>(spec: &ProblemSpec<T>, stream: RngStream) -> Result<NoiseSample<T>> {
    let op = &spec.operator;
    let base = time_grid::uniform(spec.horizon, spec.solver.time_step)?;
    let jumps = match &spec.levy {
        Some(m) if m.is_finite_activity() => {
            Some(sample_jump_path(m, op, spec.horizon, stream.substream(labels::LEVY))?)
        }
        _ => None,
    };
    let grid = match &jumps {
        Some(p) => time_grid::with_events(&base, &p.times())?,
        None => base,
    };
    let mut z = ConvolutionPath::zero(op.len(), &grid)?;
    if spec.wiener {
        z = z.add(&wiener_convolution(op, &grid, stream)?)?;
    }
    if let Some(m) = &spec.levy {
        let part = match &jumps {
            Some(p) => levy_convolution(p, op, &grid)?,
            None => alpha_stable_convolution(m, op, &grid, stream)?,
        };
        z = z.add(&part)?;
    }
    Ok(NoiseSample { z, jumps })
}

/// Sampled path with its splitting components.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution<T> {
    pub z: ConvolutionPath<T>,
    pub y: MildPath<T>,
    /// `Z_A(t_m)` on the grid.
    pub z_grid: Vec<GridFunction<T>>,
    /// `X(t_m) = Y(t_m) + Z_A(t_m)`.
    pub x: Vec<GridFunction<T>>,
    /// `sup_m |X(t_m) - e^{t_m A} x - Q_m - Z_A(t_m)|_H`, where `Q_m` is the
    /// exact-step quadrature of `int e^{(t-s)A} F(X(s^-)) ds` with the drift
    /// frozen at the left limits of `X`.
    pub mild_residual: f64,
}

impl<T: Real> PathSolution<T> {
    pub fn time_grid(&self) -> &[T] {
        &self.z.time_grid
    }

    /// `X(t_m^-) = Y(t_m) + Z_A(t_m^-)` in spectral coordinates.
    pub fn x_left_spectral(&self, m: usize) -> Result<SpectralVector<T>> {
        self.y.y_spectral[m].add(&self.z.left_limits[m])
    }

    pub fn x_spectral(&self, m: usize) -> Result<SpectralVector<T>> {
        self.y.y_spectral[m].add(&self.z.values[m])
    }
}

/// Solves one path of the problem with the noise drawn from `stream`.
pub fn solve_spde_path<T: Real>(spec: &ProblemSpec<T>, stream: RngStream) -> Result<PathSolution<T>> {
    spec.check_structure()?;
    let noise = sample_noise(spec, stream)?;
    solve_with_noise(spec, &spec.initial_grid()?, &noise)
}

/// Solves with a given noise realization and initial datum `x`.
pub fn solve_with_noise<T: Real>(
    spec: &ProblemSpec<T>,
    x: &GridFunction<T>,
    noise: &NoiseSample<T>,
) -> Result<PathSolution<T>> {
    let op = &spec.operator;
    let x = x.clone().with_space(spec.space);
    let y = solve_mild(op, &spec.drift, &x, &noise.z, &spec.solver)?;
    let z_grid: Vec<GridFunction<T>> = noise
        .z
        .values
        .iter()
        .map(|v| op.from_spectral(v, spec.space))
        .collect::<Result<_>>()?;
    let xs: Vec<GridFunction<T>> = y.y.iter().zip(&z_grid).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
    let mut sol = PathSolution {
        z: noise.z.clone(),
        y,
        z_grid,
        x: xs,
        mild_residual: 0.0,
    };
    sol.mild_residual = crate::scalar::to_f64(mild_residual(spec, &x, &sol)?);
    Ok(sol)
}

fn mild_residual<T: Real>(spec: &ProblemSpec<T>, x0: &GridFunction<T>, sol: &PathSolution<T>) -> Result<T> {
    let op = &spec.operator;
    let lambda = op.eigenvalues();
    let grid = sol.time_grid();
    let x0s = op.to_spectral(x0)?;
    let mut q = vec![T::zero(); op.len()];
    let mut worst = T::zero();
    for m in 1..grid.len() {
        let h = grid[m] - grid[m - 1];
        let drift = if spec.drift.is_zero() {
            SpectralVector::zeros(op.len())
        } else {
            let left = op.from_spectral(&sol.x_left_spectral(m - 1)?, spec.space)?;
            op.to_spectral(&spec.drift.eval(&left)?)?
        };
        for i in 0..op.len() {
            q[i] = (-lambda[i] * h).exp() * q[i] + phi1(lambda[i], h) * drift.coeffs()[i];
        }
        let t = grid[m];
        let x = sol.x_spectral(m)?;
        let r: T = (0..op.len())
            .map(|i| {
                let d = x.coeffs()[i] - (-lambda[i] * t).exp() * x0s.coeffs()[i] - q[i] - sol.z.values[m].coeffs()[i];
                d * d
            })
            .sum::<T>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}
