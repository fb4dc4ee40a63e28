use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    BadGrid(String),

    #[error("invalid physical parameter `{name}` = {value}")]
    BadParams { name: &'static str, value: f64 },

    #[error("invalid packet width sigma0 = {sigma0} (must be > 0 and >= 2*dx = {min})")]
    BadSigma { sigma0: f64, min: f64 },

    /// Amplitude leaked into the boundary margin of the periodic grid.
    #[error("grid overflow{}: {reason}", segment_suffix(.segment))]
    GridOverflow {
        reason: String,
        segment: Option<usize>,
    },

    #[error("wave packets live on different grids")]
    GridMismatch,

    #[error("negative evolution time t = {0}")]
    NegativeTime(f64),

    #[error("degenerate time interval: t1 = {t1} must exceed t0 = {t0}")]
    DegenerateInterval { t0: f64, t1: f64 },

    #[error("dense operator of dimension {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("operator is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (max |U^dagger U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("path is not timelike: radicand {radicand:e} at t = {t}")]
    SuperluminalPath { t: f64, radicand: f64 },

    #[error("quadrature needs at least 16 intervals, got {0}")]
    BadQuadrature(usize),

    #[error("branch schedules differ in total duration: {accelerated} vs {reference}")]
    SchemeMismatch { accelerated: f64, reference: f64 },

    #[error("phase aliasing between samples {index} and {next}: step {step} rad reaches pi; densify the time list")]
    PhaseAliasing { index: usize, next: usize, step: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn segment_suffix(segment: &Option<usize>) -> String {
    match segment {
        Some(i) => format!(" in schedule segment {i}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn in_segment(self, index: usize) -> Self {
        match self {
            Error::GridOverflow { reason, .. } => Error::GridOverflow {
                reason,
                segment: Some(index),
            },
            other => other,
        }
    }
}
