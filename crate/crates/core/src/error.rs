use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("tolerance {0:e} outside the supported range [1e-13, 1e-6]")]
    InvalidTolerance(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gamma function pole at z = {0}")]
    Pole(C64),

    #[error("argument u = {u} lies on the branch cut of J_nu for non-integer nu = {nu}")]
    BranchCut { nu: C64, u: C64 },

    #[error("series for {what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("Y_nu is not available for integer order nu = {0}")]
    IntegerOrder(C64),

    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },

    #[error("lambda = {lambda} is within {distance:e} of the spectrum (|Δ²-1| too small)")]
    NearSpectrum { lambda: C64, distance: f64 },

    #[error("zero of the target function on the contour after {attempts} perturbations")]
    BoundaryZero { attempts: usize },

    #[error("winding integral {value} is not within 0.25 of an integer at {points} points per side")]
    NonIntegralWinding { value: f64, points: usize },

    #[error("subdivision depth {0} exceeded while isolating zeros")]
    MaxDepth(usize),

    #[error("expected {expected} eigenvalues below the cutoff, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("potential is not PT-symmetric (some Fourier coefficient is not real)")]
    NotPtSymmetric,

    #[error("{lambda} is not a periodic/antiperiodic eigenvalue (|Δ ∓ 1| = {defect:e})")]
    NotEigenvalue { lambda: C64, defect: f64 },
}
