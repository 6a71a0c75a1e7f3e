//! Entire functions whose zeros are the eigenvalues, with derivatives and
//! an estimate of their evaluation noise.

use std::f64::consts::PI;

use super::{Route, SolveOptions, SpectralKind};
use crate::error::Result;
use crate::floquet::{free_fundamental, integrate_fundamental};
use crate::potential::Potential;
use crate::specfun::{bessel_j_bounded, sin_pi, SeriesControl};
use crate::C64;

/// Value, derivative and absolute noise level of an analytic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: C64,
    pub derivative: C64,
    pub noise: f64,
}

/// An entire function that can be sampled concurrently.
pub trait Analytic: Sync {
    fn sample(&self, z: C64) -> Result<Sample>;
}

impl<F> Analytic for F
where
    F: Fn(C64) -> Result<Sample> + Sync,
{
    fn sample(&self, z: C64) -> Result<Sample> {
        self(z)
    }
}

const CAUCHY_POINTS: usize = 8;

// f′(z) from f on a small circle; exact for polynomials of degree < 8 and
// free of the cancellation that plagues one-sided differences.
fn cauchy_derivative(f: impl Fn(C64) -> Result<(C64, f64)>, z: C64) -> Result<C64> {
    let r = 1e-3 * (1.0 + z.norm().sqrt());
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..CAUCHY_POINTS {
        let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / CAUCHY_POINTS as f64);
        acc += f(z + r * w)?.0 / w;
    }
    Ok(acc / (r * CAUCHY_POINTS as f64))
}

#[derive(Debug, Clone, Copy)]
enum Evaluator {
    /// Integrate the fundamental system.
    Ode,
    /// `V` constant: shifted free solutions.
    Constant(C64),
    /// `V = K e^{2ix}`: Bessel products with the coupling rotated to `x0`.
    Model(C64),
}

/// `s(λ, x0, x0+π)`, `c′(λ, x0, x0+π)` or `Δ(λ)² − 1` for a potential.
#[derive(Debug, Clone)]
pub struct SpectralTarget<'a> {
    potential: &'a Potential,
    kind: SpectralKind,
    x0: f64,
    tol: f64,
    evaluator: Evaluator,
    series: SeriesControl,
}

impl<'a> SpectralTarget<'a> {
    pub fn new(potential: &'a Potential, kind: SpectralKind, x0: f64, opts: &SolveOptions) -> Self {
        let evaluator = match opts.route {
            Route::Ode => Evaluator::Ode,
            Route::Auto => {
                if let Some(c) = potential.as_constant() {
                    Evaluator::Constant(c)
                } else if let Some(k) = potential.as_model() {
                    Evaluator::Model(k * C64::from_polar(1.0, 2.0 * x0))
                } else {
                    Evaluator::Ode
                }
            }
        };
        Self {
            potential,
            kind,
            x0,
            tol: opts.tol,
            evaluator,
            series: SeriesControl {
                max_terms: 400,
                rel_tol: 1e-17,
            },
        }
    }

    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    /// `true` when the target is evaluated from a closed form.
    pub fn is_closed_form(&self) -> bool {
        !matches!(self.evaluator, Evaluator::Ode)
    }

    fn ode_sample(&self, z: C64) -> Result<Sample> {
        let x0 = if self.kind == SpectralKind::Periodic { 0.0 } else { self.x0 };
        let f = integrate_fundamental(self.potential, z, x0, self.tol, true)?;
        let d = f.dlambda.expect("variational data requested");
        let size = 1.0 + f.c_end.norm() + f.s_end.norm() + f.c_prime_end.norm() + f.s_prime_end.norm();
        Ok(match self.kind {
            SpectralKind::Dirichlet => Sample {
                value: f.s_end,
                derivative: d[2],
                noise: self.tol * size,
            },
            SpectralKind::Neumann => Sample {
                value: f.c_prime_end,
                derivative: d[1],
                noise: self.tol * size,
            },
            SpectralKind::Periodic => {
                let delta = f.discriminant();
                Sample {
                    value: delta * delta - 1.0,
                    derivative: 2.0 * delta * 0.5 * (d[0] + d[3]),
                    noise: 2.0 * self.tol * size * (1.0 + delta.norm()),
                }
            }
        })
    }

    fn constant_value(&self, c: C64, z: C64) -> (C64, f64) {
        let w = free_fundamental(z - c, PI);
        let value = match self.kind {
            SpectralKind::Dirichlet => w[2],
            SpectralKind::Neumann => w[1],
            SpectralKind::Periodic => w[0] * w[0] - 1.0,
        };
        (value, 8.0 * f64::EPSILON * (1.0 + value.norm()))
    }

    fn model_value(&self, kp: C64, z: C64) -> Result<(C64, f64)> {
        const EPS8: f64 = 8.0 * f64::EPSILON;
        let nu = z.sqrt();
        let u = kp.sqrt();
        match self.kind {
            SpectralKind::Dirichlet => {
                let (a, ba) = bessel_j_bounded(nu, u, self.series)?;
                let (b, bb) = bessel_j_bounded(-nu, u, self.series)?;
                Ok((PI * a * b, PI * EPS8 * (ba * b.norm() + a.norm() * bb + EPS8 * ba * bb)))
            }
            SpectralKind::Neumann => {
                let (a, ba) = bessel_j_bounded(nu, u, self.series)?;
                let (a1, ba1) = bessel_j_bounded(nu + 1.0, u, self.series)?;
                let (b, bb) = bessel_j_bounded(-nu, u, self.series)?;
                let (b1, bb1) = bessel_j_bounded(1.0 - nu, u, self.series)?;
                let da = nu / u * a - a1;
                let db = -nu / u * b - b1;
                let bda = (nu / u).norm() * ba + ba1;
                let bdb = (nu / u).norm() * bb + bb1;
                let scale = (PI * kp).norm();
                Ok((
                    PI * kp * da * db,
                    scale * EPS8 * (bda * db.norm() + da.norm() * bdb + EPS8 * bda * bdb),
                ))
            }
            SpectralKind::Periodic => {
                // Δ = cos π√λ, so Δ² − 1 = −sin²(π√λ)
                let s = sin_pi(nu);
                Ok((-(s * s), EPS8 * (1.0 + (s * s).norm())))
            }
        }
    }
}

// sin z / z with a series near the origin
fn sinc(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

impl Analytic for SpectralTarget<'_> {
    fn sample(&self, z: C64) -> Result<Sample> {
        match self.evaluator {
            Evaluator::Ode => self.ode_sample(z),
            Evaluator::Constant(c) => {
                let (value, noise) = self.constant_value(c, z);
                let derivative = cauchy_derivative(|w| Ok(self.constant_value(c, w)), z)?;
                Ok(Sample {
                    value,
                    derivative,
                    noise,
                })
            }
            Evaluator::Model(kp) => {
                let (value, noise) = self.model_value(kp, z)?;
                let derivative = if self.kind == SpectralKind::Periodic {
                    // d/dλ (−sin² π√λ) = −(π²/2) · sin(2π√λ)/(π√λ)
                    -(PI * PI) * sinc(2.0 * PI * z.sqrt())
                } else {
                    cauchy_derivative(|w| self.model_value(kp, w), z)?
                };
                Ok(Sample {
                    value,
                    derivative,
                    noise,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn opts(route: Route) -> SolveOptions {
        SolveOptions {
            tol: DEFAULT_TOL,
            route,
        }
    }

    #[test]
    fn model_and_ode_routes_agree() {
        let p = Potential::model(c(0.8, 0.3));
        for kind in [SpectralKind::Dirichlet, SpectralKind::Neumann, SpectralKind::Periodic] {
            for x0 in [0.0, 0.7] {
                let a = SpectralTarget::new(&p, kind, x0, &opts(Route::Auto));
                let b = SpectralTarget::new(&p, kind, x0, &opts(Route::Ode));
                assert!(a.is_closed_form() && !b.is_closed_form());
                for z in [c(0.3, 0.1), c(2.5, -0.4), c(11.0, 1.0), c(-1.5, 0.0)] {
                    let (sa, sb) = (a.sample(z).unwrap(), b.sample(z).unwrap());
                    let scale = 1.0 + sa.value.norm();
                    assert!((sa.value - sb.value).norm() < 1e-8 * scale, "{kind:?} {z}");
                    assert!(
                        (sa.derivative - sb.derivative).norm() < 1e-7 * (1.0 + sa.derivative.norm()),
                        "{kind:?} {z}: {} vs {}",
                        sa.derivative,
                        sb.derivative
                    );
                }
            }
        }
    }

    #[test]
    fn constant_route_matches_ode() {
        let p = Potential::constant(c(1.5, -0.5));
        for kind in [SpectralKind::Dirichlet, SpectralKind::Neumann, SpectralKind::Periodic] {
            let a = SpectralTarget::new(&p, kind, 0.2, &opts(Route::Auto));
            let b = SpectralTarget::new(&p, kind, 0.2, &opts(Route::Ode));
            for z in [c(0.3, 0.1), c(6.0, 2.0), c(-3.0, 0.0)] {
                let (sa, sb) = (a.sample(z).unwrap(), b.sample(z).unwrap());
                assert!((sa.value - sb.value).norm() < 1e-8 * (1.0 + sa.value.norm()));
                assert!((sa.derivative - sb.derivative).norm() < 1e-7 * (1.0 + sa.derivative.norm()));
            }
        }
    }

    #[test]
    fn noise_is_small_but_positive() {
        let p = Potential::model(c(1.0, 0.0));
        let t = SpectralTarget::new(&p, SpectralKind::Dirichlet, 0.0, &opts(Route::Auto));
        let s = t.sample(c(4.0, 0.0)).unwrap();
        assert!(s.noise > 0.0 && s.noise < 1e-12);
    }
}
