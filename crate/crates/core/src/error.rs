use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("{function} is singular at x = {x}")]
    SingularPoint { function: &'static str, x: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid too small: {needed} points needed, {got} given")]
    GridTooSmall { needed: usize, got: usize },

    #[error("invalid bracket [{lo}, {hi}]: no sign change")]
    BracketInvalid { lo: f64, hi: f64 },

    #[error("grid too coarse: nodes at x = {x0} and x = {x1} are {points} grid points apart")]
    GridTooCoarse { x0: f64, x1: f64, points: usize },

    #[error("level count mismatch in overlap window: {sge} SGE levels vs {oracle} oracle levels")]
    CountMismatch { sge: usize, oracle: usize },

    #[error("level {requested} not found ({available} levels available)")]
    LevelNotFound { requested: usize, available: usize },

    #[error("empty spectrum: {0}")]
    EmptySpectrum(String),
}

pub type Result<T> = std::result::Result<T, Error>;
