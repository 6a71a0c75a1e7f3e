//! Spectral analysis of Hill operators `-d²/dx² + V(x)` with complex
//! π-periodic potentials.
//!
//! The crate integrates the fundamental system to obtain monodromy matrices
//! and the Floquet discriminant, locates Dirichlet, Neumann and
//! (anti)periodic eigenvalues with the argument principle, evaluates the
//! Dirichlet and Neumann trace formulas, and checks the localization results
//! known for the model potential `K e^{2ix}` against closed-form Bessel
//! expressions.
//!
//! Data-parallel loops (λ grids, contour samples, independent search boxes)
//! run on rayon when the `parallel` feature is enabled and sequentially
//! otherwise. Results never depend on scheduling.

pub mod eigensolve;
pub mod error;
pub mod floquet;
pub mod ode;
pub mod par;
pub mod potential;
pub mod specfun;
pub mod theorems;
pub mod traceform;

pub use num_complex::Complex64 as C64;

pub use eigensolve::{Eigenvalue, Route, SearchBox, SolveOptions, SpectralKind};
pub use error::{Error, Result};
pub use floquet::{FundamentalData, Monodromy};
pub use potential::{Potential, Symmetry};
pub use specfun::SeriesControl;
pub use traceform::{TraceKind, TraceReport};

/// Default integrator tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-10;
