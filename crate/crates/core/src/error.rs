use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the region where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular point: {what} (gamma = {gamma}, alpha = {alpha})")]
    Singular {
        what: &'static str,
        gamma: Complex64,
        alpha: f64,
    },

    #[error("target {target} is not reachable on the optimal contour (alpha = {alpha})")]
    Infeasible { target: f64, alpha: f64 },

    #[error("degenerate plant: {0}")]
    DegeneratePlant(String),

    #[error("describing-function solve did not converge after {iterations} iterations (last residual {last:e})")]
    NonConvergence {
        iterations: usize,
        last: f64,
        residuals: Vec<f64>,
    },

    #[error("simulation diverged at t = {t} s (step {step})")]
    Divergence {
        t: f64,
        step: usize,
        trace: Vec<[f64; 4]>,
    },

    #[error("algebraic loop did not resolve at t = {t} s")]
    AlgebraicLoop { t: f64 },

    #[error(
        "window of {samples} samples is not an integer number of periods ({per_period} per period)"
    )]
    Windowing { samples: usize, per_period: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
