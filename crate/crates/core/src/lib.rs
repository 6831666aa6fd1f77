//! Spectral-Galerkin simulation of dissipative stochastic reaction-diffusion
//! equations on `[0,1]^d` with Dirichlet boundary conditions, driven by an
//! additive cylindrical Wiener process plus a pure-jump Levy process.
//!
//! The state lives in two representations: coefficients in the Dirichlet
//! eigenbasis ([`SpectralVector`]) and samples on the interior tensor grid
//! ([`GridFunction`]). The semigroup acts diagonally on the former, the
//! Nemytskii drift pointwise on the latter.
//!
//! The solution of `dX = (AX + F(X))dt + R dW + dL` is built pathwise as
//! `X = Y + Z_A`, where `Z_A` is the stochastic convolution (exact per mode)
//! and `Y` solves a deterministic mild equation with a Yosida-regularized
//! drift and the left limits of `Z_A` as forcing.
//!
//! All numerical code is generic over [`Real`]; the aliases at the crate root
//! fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
pub mod dissipative;
pub mod error;
pub mod noise;
pub mod scalar;
pub mod solver;
pub mod spde;
pub mod spectral;
pub mod time_grid;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use scalar::Real;

pub use convolution::{ConvolutionPath, RegularityReport};
pub use dissipative::{DriftSpec, MaxTerm, YosidaParams};
pub use noise::{JumpPath, LevyMeasure, LevyModel, RngStream};
pub use solver::{MildPath, SolverConfig, Stepper};
pub use spde::{InitialDatum, PathSolution, ProblemSpec};
pub use spectral::{FractionalIndex, GridFunction, SpaceTag, SpectralOperator, SpectralVector};

/// Double-precision aliases for the generic types.
pub type Operator = SpectralOperator<f64>;
pub type Spectral = SpectralVector<f64>;
pub type Grid = GridFunction<f64>;
pub type Drift = DriftSpec<f64>;
pub type Levy = LevyModel<f64>;
pub type Jumps = JumpPath<f64>;
pub type Convolution = ConvolutionPath<f64>;
pub type Config = SolverConfig<f64>;
pub type Problem = ProblemSpec<f64>;
pub type Solution = PathSolution<f64>;

/// Single-precision aliases, mainly useful for memory-bound sweeps.
pub type Operator32 = SpectralOperator<f32>;
pub type Spectral32 = SpectralVector<f32>;
pub type Grid32 = GridFunction<f32>;
pub type Drift32 = DriftSpec<f32>;
