//! Exact-in-distribution simulation of the first exit time and exit location
//! of a one-dimensional diffusion `dX = mu(X) dt + dB` from an interval
//! `[a, b]`.
//!
//! Every sampler here is an acceptance–rejection scheme whose accept/reject
//! decisions are made with *computable remainder bounds* on series expansions,
//! so the returned samples follow the target law exactly — there is no
//! time-discretization bias. A deliberately biased Euler–Maruyama reference
//! sampler and a Kolmogorov–Smirnov harness are included to validate that
//! claim statistically.
//!
//! Module map:
//!
//! - [`special_fn`] — erf/erfc, Gaussian pdf/cdf/quantile, and the
//!   series-cost diagnostic bounds.
//! - [`rng_core`] — deterministic splittable random streams and the primitive
//!   draws (uniform, Gaussian, exponential, exit-time proposal).
//! - [`conditional_position`] — the transition density of Brownian motion
//!   killed at ±1, its remainder bounds, and exact sampling of the position
//!   at time `t` conditioned on not having exited.
//! - [`brownian_exit`] — exact exit time of standard Brownian motion from a
//!   symmetric interval, and (time, location) from an arbitrary interval.
//! - [`diffusion_exit`] — exact exit sampling under a drift via a
//!   change-of-measure acceptance weight: the plain sampler (requires
//!   `mu' + mu^2 >= 0`), the time-capped sampler, and the general chained
//!   sampler that removes the restriction.
//! - [`validation`] — Euler–Maruyama oracle, KS statistics, moment
//!   estimators, and the named validation suites.
//! - [`cli`] — the `exitwise` command-line front end.

pub mod brownian_exit;
pub mod cli;
pub mod conditional_position;
pub mod diffusion_exit;
pub mod rng_core;
pub mod special_fn;
pub mod validation;

/// Library version, embedded in summary sidecars and validation reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Errors shared by every sampler in the crate.
///
/// `AbortMaxTerms` is deliberately an error and not a fallback: if a series
/// loop cannot resolve an accept/reject decision within the configured term
/// budget, silently truncating would break the exactness contract.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A series accept/reject loop exceeded its term budget without the
    /// remainder test resolving. Signals a parameter or precision fault.
    #[error("series loop did not resolve within {max_terms} terms (scaled time t = {t})")]
    AbortMaxTerms { max_terms: usize, t: f64 },

    /// The adaptive quadrature of the drift failed to converge (NaN/∞ values
    /// or no convergence at maximal refinement depth).
    #[error("drift antiderivative quadrature failed: {detail}")]
    NonIntegrableDrift { detail: String },

    /// The supplied nonnegativity shift leaves `gamma = (mu^2 + mu')/2 + rho`
    /// negative somewhere on the validation grid.
    #[error("gamma({x}) = {gamma} < 0 on the grid; increase rho")]
    NegativeGamma { x: f64, gamma: f64 },

    /// The plain drifted sampler requires `rho = 0`; use the capped or
    /// chained sampler (or the explicitly tilted variant) instead.
    #[error("drift requires rho = {rho} > 0; use the capped/chained sampler or the tilted variant")]
    RhoNotZero { rho: f64 },

    /// The Euler reference walk hit its step cap before exiting.
    #[error("Euler walk exceeded {max_steps} steps without exiting the interval")]
    MaxStepsExceeded { max_steps: u64 },

    /// A numeric argument violated a documented precondition.
    #[error("invalid parameter {name} = {value}: must satisfy {constraint}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A drift expression failed to parse.
    #[error("drift expression error: {0}")]
    BadExpr(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
