//! Flat `key = value` configuration with `[section]` headers.
//!
//! Every key has a default, so an empty file is a valid (trivial) problem.
//! [`RunConfig::render`] writes the canonical form, which parses back to the
//! same value; run manifests are exactly this rendering.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::csv::Num;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Experiment {
    #[default]
    Simulate,
    CheckConditions,
    GsRegularity,
    YosidaConvergence,
    Contraction,
    Apriori,
    Generalized,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Simulate,
        Experiment::CheckConditions,
        Experiment::GsRegularity,
        Experiment::YosidaConvergence,
        Experiment::Contraction,
        Experiment::Apriori,
        Experiment::Generalized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::CheckConditions => "check-conditions",
            Experiment::GsRegularity => "gs-regularity",
            Experiment::YosidaConvergence => "yosida-convergence",
            Experiment::Contraction => "contraction",
            Experiment::Apriori => "apriori",
            Experiment::Generalized => "generalized",
        }
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| usage(format!("unknown experiment `{s}`")))
    }
}

/// Target space `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    Sup,
    Lp(f64),
}

/// Initial datum in spectral coordinates: explicit leading coefficients, or
/// `rank^{-p}` on every mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Datum {
    Coeffs(Vec<f64>),
    Power(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxTermSpec {
    None,
    Linear(f64),
    Sine(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevySpec {
    None,
    Poisson { k: f64 },
    Stable { alpha: f64, beta: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepperSpec {
    ExpEuler,
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaperSpec {
    None,
    Fejer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSection {
    pub dim: usize,
    pub modes: usize,
    pub color_exponent: f64,
    pub horizon: f64,
    pub space: Space,
    pub initial: Datum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSection {
    /// `C_0, ..., C_{2m+1}`; the leading term enters with a minus sign.
    pub coeffs: Vec<f64>,
    pub max_term: MaxTermSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevySection {
    pub model: LevySpec,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSection {
    pub time_step: f64,
    pub yosida_delta: f64,
    pub yosida_theta: f64,
    pub stepper: StepperSpec,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub newton_tol: f64,
}

/// Parameters read by individual experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSection {
    pub delta: f64,
    pub eps: f64,
    pub gamma: f64,
    /// Evaluation time of the increment statistic.
    pub t: f64,
    pub h_list: Vec<f64>,
    /// Slope below which `gs-regularity` reports a violation.
    pub min_slope: f64,
    pub deltas: Vec<f64>,
    pub levels: Vec<usize>,
    pub taper: TaperSpec,
    /// Second initial datum of `contraction`.
    pub z: Datum,
    /// Write every `stride`-th time of `simulate`.
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub replicas: usize,
    pub problem: ProblemSection,
    pub drift: DriftSection,
    pub wiener: bool,
    pub levy: LevySection,
    pub solver: SolverSection,
    pub params: ExperimentSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Simulate,
            seed: 0,
            replicas: 1,
            problem: ProblemSection {
                dim: 1,
                modes: 32,
                color_exponent: 0.0,
                horizon: 1.0,
                space: Space::Sup,
                initial: Datum::Coeffs(vec![1.0]),
            },
            drift: DriftSection {
                coeffs: Vec::new(),
                max_term: MaxTermSpec::None,
            },
            wiener: false,
            levy: LevySection {
                model: LevySpec::None,
                threshold: 1.0,
            },
            solver: SolverSection {
                time_step: 1e-3,
                yosida_delta: 1e-4,
                yosida_theta: 0.0,
                stepper: StepperSpec::ExpEuler,
                picard_tol: 1e-12,
                picard_max_iters: 200,
                newton_tol: 1e-12,
            },
            params: ExperimentSection {
                delta: 0.0,
                eps: 0.25,
                gamma: 0.0,
                t: 0.5,
                h_list: vec![1.0 / 1024.0, 1.0 / 256.0, 1.0 / 64.0, 1.0 / 16.0],
                min_slope: 1.2,
                deltas: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3],
                levels: vec![8, 16, 32, 64],
                taper: TaperSpec::None,
                z: Datum::Coeffs(vec![0.0]),
                stride: 1,
            },
        }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

fn num<V: FromStr>(key: &str, s: &str) -> Result<V, HarnessError> {
    s.trim().parse().map_err(|_| usage(format!("`{key}`: cannot parse `{s}`")))
}

fn from<V: FromStr<Err = HarnessError>>(_key: &str, s: &str) -> Result<V, HarnessError> {
    s.parse()
}

fn list<V: FromStr>(key: &str, s: &str) -> Result<Vec<V>, HarnessError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| num(key, p)).collect()
}

fn join<V: fmt::Display>(v: &[V]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_num(v: &[f64]) -> String {
    join(&v.iter().map(|&x| Num(x)).collect::<Vec<_>>())
}

/// `name` or `name:args`.
fn tagged(s: &str) -> (&str, &str) {
    match s.split_once(':') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), ""),
    }
}

fn parse_bool(key: &str, s: &str) -> Result<bool, HarnessError> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(usage(format!("`{key}`: expected true or false, got `{other}`"))),
    }
}

impl FromStr for Space {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match tagged(s) {
            ("sup", "") => Ok(Space::Sup),
            ("lp", p) => Ok(Space::Lp(num("space", p)?)),
            _ => Err(usage(format!("space: expected `sup` or `lp:<p>`, got `{s}`"))),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Sup => write!(f, "sup"),
            Space::Lp(p) => write!(f, "lp:{}", Num(*p)),
        }
    }
}

impl FromStr for Datum {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match tagged(s) {
            ("coeffs", c) => Ok(Datum::Coeffs(list("datum", c)?)),
            ("power", p) => Ok(Datum::Power(num("datum", p)?)),
            _ => Err(usage(format!("datum: expected `coeffs:<list>` or `power:<p>`, got `{s}`"))),
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Coeffs(c) => write!(f, "coeffs:{}", join_num(c)),
            Datum::Power(p) => write!(f, "power:{}", Num(*p)),
        }
    }
}

impl FromStr for MaxTermSpec {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match tagged(s) {
            ("none", "") => Ok(MaxTermSpec::None),
            ("linear", a) => Ok(MaxTermSpec::Linear(num("max_term", a)?)),
            ("sine", a) => Ok(MaxTermSpec::Sine(num("max_term", a)?)),
            _ => Err(usage(format!("max_term: expected none, linear:<slope> or sine:<amplitude>, got `{s}`"))),
        }
    }
}

impl fmt::Display for MaxTermSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxTermSpec::None => write!(f, "none"),
            MaxTermSpec::Linear(a) => write!(f, "linear:{}", Num(*a)),
            MaxTermSpec::Sine(a) => write!(f, "sine:{}", Num(*a)),
        }
    }
}

impl FromStr for LevySpec {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match tagged(s) {
            ("none", "") => Ok(LevySpec::None),
            ("poisson", k) => Ok(LevySpec::Poisson { k: num("model", k)? }),
            ("stable", args) => {
                let v: Vec<f64> = list("model", args)?;
                match v[..] {
                    [alpha, beta] => Ok(LevySpec::Stable { alpha, beta, amplitude: 1.0 }),
                    [alpha, beta, amplitude] => Ok(LevySpec::Stable { alpha, beta, amplitude }),
                    _ => Err(usage("model: stable takes alpha, beta[, amplitude]")),
                }
            }
            _ => Err(usage(format!("model: expected none, poisson:<k> or stable:<alpha>,<beta>[,<amplitude>], got `{s}`"))),
        }
    }
}

impl fmt::Display for LevySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevySpec::None => write!(f, "none"),
            LevySpec::Poisson { k } => write!(f, "poisson:{}", Num(*k)),
            LevySpec::Stable { alpha, beta, amplitude } => write!(f, "stable:{}, {}, {}", Num(*alpha), Num(*beta), Num(*amplitude)),
        }
    }
}

impl FromStr for StepperSpec {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim() {
            "exp-euler" => Ok(StepperSpec::ExpEuler),
            "picard" => Ok(StepperSpec::Picard),
            other => Err(usage(format!("stepper: expected exp-euler or picard, got `{other}`"))),
        }
    }
}

impl fmt::Display for StepperSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepperSpec::ExpEuler => "exp-euler",
            StepperSpec::Picard => "picard",
        })
    }
}

impl FromStr for TaperSpec {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim() {
            "none" => Ok(TaperSpec::None),
            "fejer" => Ok(TaperSpec::Fejer),
            other => Err(usage(format!("taper: expected none or fejer, got `{other}`"))),
        }
    }
}

impl fmt::Display for TaperSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaperSpec::None => "none",
            TaperSpec::Fejer => "fejer",
        })
    }
}

/// Splits the text into `(section, key) -> value`, rejecting duplicates.
fn entries(text: &str) -> Result<BTreeMap<(String, String), String>, HarnessError> {
    let mut out = BTreeMap::new();
    let mut section = String::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!("line {}: expected `key = value`", no + 1)));
        };
        let key = (section.clone(), k.trim().to_string());
        if out.insert(key, v.trim().to_string()).is_some() {
            return Err(usage(format!("line {}: duplicate key `[{section}] {}`", no + 1, k.trim())));
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut e = entries(text)?;
        let mut c = RunConfig::default();
        let mut take = |section: &str, key: &str| e.remove(&(section.to_string(), key.to_string()));

        macro_rules! set {
            ($section:literal, $key:literal, $field:expr, $parse:expr) => {
                if let Some(v) = take($section, $key) {
                    $field = $parse($key, &v)?;
                }
            };
        }

        set!("run", "experiment", c.experiment, from);
        set!("run", "seed", c.seed, num);
        set!("run", "replicas", c.replicas, num);

        set!("problem", "dim", c.problem.dim, num);
        set!("problem", "modes", c.problem.modes, num);
        set!("problem", "color_exponent", c.problem.color_exponent, num);
        set!("problem", "horizon", c.problem.horizon, num);
        set!("problem", "space", c.problem.space, from);
        set!("problem", "initial", c.problem.initial, from);

        set!("drift", "coeffs", c.drift.coeffs, list);
        set!("drift", "max_term", c.drift.max_term, from);

        set!("wiener", "enabled", c.wiener, parse_bool);

        set!("levy", "model", c.levy.model, from);
        set!("levy", "threshold", c.levy.threshold, num);

        set!("solver", "time_step", c.solver.time_step, num);
        set!("solver", "yosida_delta", c.solver.yosida_delta, num);
        set!("solver", "yosida_theta", c.solver.yosida_theta, num);
        set!("solver", "stepper", c.solver.stepper, from);
        set!("solver", "picard_tol", c.solver.picard_tol, num);
        set!("solver", "picard_max_iters", c.solver.picard_max_iters, num);
        set!("solver", "newton_tol", c.solver.newton_tol, num);

        set!("experiment", "delta", c.params.delta, num);
        set!("experiment", "eps", c.params.eps, num);
        set!("experiment", "gamma", c.params.gamma, num);
        set!("experiment", "t", c.params.t, num);
        set!("experiment", "h_list", c.params.h_list, list);
        set!("experiment", "min_slope", c.params.min_slope, num);
        set!("experiment", "deltas", c.params.deltas, list);
        set!("experiment", "levels", c.params.levels, list);
        set!("experiment", "taper", c.params.taper, from);
        set!("experiment", "z", c.params.z, from);
        set!("experiment", "stride", c.params.stride, num);

        if let Some(((s, k), _)) = e.into_iter().next() {
            return Err(usage(format!("unknown key `{k}` in section [{s}]")));
        }
        if c.replicas == 0 || c.params.stride == 0 {
            return Err(usage("replicas and stride must be positive"));
        }
        Ok(c)
    }

    /// Canonical text form; `parse(render(c)) == c`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let p = &self.problem;
        let v = &self.solver;
        let x = &self.params;
        // Writing to a String cannot fail.
        let _ = write!(
            s,
            "[run]\nexperiment = {}\nseed = {}\nreplicas = {}\n\n\
             [problem]\ndim = {}\nmodes = {}\ncolor_exponent = {}\nhorizon = {}\nspace = {}\ninitial = {}\n\n\
             [drift]\ncoeffs = {}\nmax_term = {}\n\n\
             [wiener]\nenabled = {}\n\n\
             [levy]\nmodel = {}\nthreshold = {}\n\n\
             [solver]\ntime_step = {}\nyosida_delta = {}\nyosida_theta = {}\nstepper = {}\npicard_tol = {}\npicard_max_iters = {}\nnewton_tol = {}\n\n\
             [experiment]\ndelta = {}\neps = {}\ngamma = {}\nt = {}\nh_list = {}\nmin_slope = {}\ndeltas = {}\nlevels = {}\ntaper = {}\nz = {}\nstride = {}\n",
            self.experiment.name(),
            self.seed,
            self.replicas,
            p.dim,
            p.modes,
            Num(p.color_exponent),
            Num(p.horizon),
            p.space,
            p.initial,
            join_num(&self.drift.coeffs),
            self.drift.max_term,
            self.wiener,
            self.levy.model,
            Num(self.levy.threshold),
            Num(v.time_step),
            Num(v.yosida_delta),
            Num(v.yosida_theta),
            v.stepper,
            Num(v.picard_tol),
            v.picard_max_iters,
            Num(v.newton_tol),
            Num(x.delta),
            Num(x.eps),
            Num(x.gamma),
            Num(x.t),
            join_num(&x.h_list),
            Num(x.min_slope),
            join_num(&x.deltas),
            join(&x.levels),
            x.taper,
            x.z,
            x.stride,
        );
        s
    }
}
