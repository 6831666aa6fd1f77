//! Translation of a [`RunConfig`] into core problem types.

use spde_core::noise::LevyMeasure;
use spde_core::{
    Config, Drift, InitialDatum, Levy, MaxTerm, Operator, Problem, SpaceTag, Spectral, Stepper,
};

use crate::config::{Datum, LevySpec, MaxTermSpec, RunConfig, Space, StepperSpec};
use crate::HarnessError;

pub fn operator(c: &RunConfig) -> Result<Operator, HarnessError> {
    Ok(Operator::dirichlet(c.problem.dim, c.problem.modes, c.problem.color_exponent)?)
}

pub fn levy_model(c: &RunConfig) -> Result<Option<Levy>, HarnessError> {
    let model = match c.levy.model {
        LevySpec::None => return Ok(None),
        LevySpec::Poisson { k } => Levy::diagonal_poisson(k)?,
        LevySpec::Stable { alpha, beta, amplitude } => {
            let mut m = Levy::alpha_stable(alpha, beta)?;
            if amplitude.is_nan() || amplitude < 0.0 {
                return Err(HarnessError::Usage("stable amplitude must be nonnegative".into()));
            }
            m.measure = LevyMeasure::DiagonalAlphaStable { alpha, beta, amplitude };
            m
        }
    };
    Ok(Some(model.with_threshold(c.levy.threshold)?))
}

/// Coefficients in eigenvalue order: entry `j` goes to the mode of rank `j + 1`.
pub fn datum(op: &Operator, d: &Datum) -> Result<Spectral, HarnessError> {
    let mut v = vec![0.0; op.len()];
    for (i, slot) in v.iter_mut().enumerate() {
        let rank = op.rank(i);
        *slot = match d {
            Datum::Coeffs(c) => c.get(rank - 1).copied().unwrap_or(0.0),
            Datum::Power(p) => (rank as f64).powf(-p),
        };
    }
    if let Datum::Coeffs(c) = d {
        if c.len() > op.len() {
            return Err(HarnessError::Usage(format!(
                "datum has {} coefficients but the truncation has {} modes",
                c.len(),
                op.len()
            )));
        }
    }
    Ok(Spectral::new(v)?)
}

pub fn space(c: &RunConfig) -> Result<SpaceTag, HarnessError> {
    Ok(match c.problem.space {
        Space::Sup => SpaceTag::ContinuousSup,
        Space::Lp(p) => SpaceTag::lp(p)?,
    })
}

pub fn build_problem(c: &RunConfig) -> Result<Problem, HarnessError> {
    let op = operator(c)?;
    let mut drift = Drift::new(&c.drift.coeffs)?;
    match c.drift.max_term {
        MaxTermSpec::None => {}
        MaxTermSpec::Linear(slope) => drift = drift.with_max_term(MaxTerm::Linear { slope }),
        MaxTermSpec::Sine(amplitude) => drift = drift.with_max_term(MaxTerm::Sine { amplitude }),
    }
    let s = &c.solver;
    Ok(Problem {
        initial: InitialDatum::Spectral(datum(&op, &c.problem.initial)?),
        operator: op,
        drift,
        wiener: c.wiener,
        levy: levy_model(c)?,
        space: space(c)?,
        horizon: c.problem.horizon,
        solver: Config {
            yosida_delta: s.yosida_delta,
            yosida_theta: s.yosida_theta,
            time_step: s.time_step,
            picard_tol: s.picard_tol,
            picard_max_iters: s.picard_max_iters,
            stepper: match s.stepper {
                StepperSpec::ExpEuler => Stepper::ExponentialEuler,
                StepperSpec::Picard => Stepper::PicardTheta,
            },
            newton_tol: s.newton_tol,
        },
    })
}
