//! Special functions: complex Gamma, Bessel functions of complex order, and
//! the closed forms of the endpoint values for the potential `K e^{2ix}`.

mod bessel;
mod gamma;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

pub use bessel::{bessel_j, bessel_j_prime, bessel_y};
pub(crate) use bessel::bessel_j_bounded;
pub use gamma::{cos_pi, gamma, is_nonpositive_integer, rgamma, sin_pi};

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 200,
            rel_tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::InvalidArgument("max_terms must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidTolerance(self.rel_tol));
        }
        Ok(())
    }
}

fn require_nonzero(k: C64) -> Result<()> {
    if k == C64::new(0.0, 0.0) {
        Err(Error::InvalidArgument("model coupling K must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// `s(λ, 0, π) = π J_{√λ}(√K) J_{−√λ}(√K)` for `V = K e^{2ix}`.
///
/// The product is even in `√λ` and in `√K`, so principal roots give the
/// entire function of λ.
pub fn dirichlet_endpoint_model(lambda: C64, k: C64, ctl: SeriesControl) -> Result<C64> {
    require_nonzero(k)?;
    let nu = lambda.sqrt();
    let u = k.sqrt();
    Ok(PI * bessel_j(nu, u, ctl)? * bessel_j(-nu, u, ctl)?)
}

/// `c′(λ, 0, π) = π K J′_{√λ}(√K) J′_{−√λ}(√K)` for `V = K e^{2ix}`.
pub fn neumann_endpoint_model(lambda: C64, k: C64, ctl: SeriesControl) -> Result<C64> {
    require_nonzero(k)?;
    let nu = lambda.sqrt();
    let u = k.sqrt();
    Ok(PI * k * bessel_j_prime(nu, u, ctl)? * bessel_j_prime(-nu, u, ctl)?)
}

/// `f(α) = Σ (K/4)^m / (m! Γ(m+α+1))`, i.e. `(i√K/2)^{−α} J_α(i√K)`.
pub fn f_alpha(alpha: C64, k: f64, ctl: SeriesControl) -> Result<C64> {
    check_coupling(k)?;
    bessel::gamma_series(alpha, C64::new(k / 4.0, 0.0), ctl, |_| C64::new(1.0, 0.0))
}

/// `g(α) = Σ (2m+α)/2 · (K/4)^m / (m! Γ(m+α+1))`, i.e.
/// `(i√K/2)^{1−α} J′_α(i√K)`.
pub fn g_alpha(alpha: C64, k: f64, ctl: SeriesControl) -> Result<C64> {
    check_coupling(k)?;
    bessel::gamma_series(alpha, C64::new(k / 4.0, 0.0), ctl, |m| (alpha + 2.0 * m as f64) / 2.0)
}

fn check_coupling(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("K must be positive, got {k}")));
    }
    Ok(())
}
