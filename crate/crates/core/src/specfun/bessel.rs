//! Bessel functions of complex order by their power series.

use super::gamma::{cos_pi, rgamma, sin_pi};
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::C64;

fn is_integer(z: C64) -> bool {
    z.im == 0.0 && z.re.fract() == 0.0
}

/// `Σ_m w(m) · x^m / (m! Γ(m+ν+1))`.
///
/// Reciprocal Gamma values are computed directly until the argument
/// `m+ν+1` has crossed all poles, then by the recurrence `1/Γ(z+1) = 1/(zΓ(z))`.
/// The loop stops once the terms are past their peak and negligible next
/// to the partial sum (or to the largest term, when the sum cancels).
pub(crate) fn gamma_series(
    nu: C64,
    x: C64,
    ctl: SeriesControl,
    weight: impl Fn(usize) -> C64,
) -> Result<C64> {
    gamma_series_bounded(nu, x, ctl, weight).map(|(sum, _)| sum)
}

/// As [`gamma_series`], also returning `Σ |term|`, which bounds the
/// rounding error of the sum relative to machine epsilon.
pub(crate) fn gamma_series_bounded(
    nu: C64,
    x: C64,
    ctl: SeriesControl,
    weight: impl Fn(usize) -> C64,
) -> Result<(C64, f64)> {
    ctl.validate()?;
    let direct_until = (-nu.re - 1.0).ceil().max(0.0) as usize + 1;
    let mut power = C64::new(1.0, 0.0); // x^m / m!
    let mut rg = rgamma(nu + 1.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut max_term = 0.0f64;
    let mut abs_sum = 0.0f64;
    for m in 0..ctl.max_terms {
        if m > 0 {
            power *= x / m as f64;
            let arg = nu + (m as f64 + 1.0);
            rg = if m <= direct_until {
                rgamma(arg)
            } else {
                rg / (arg - 1.0)
            };
        }
        let term = power * rg * weight(m);
        sum += term;
        let size = term.norm();
        abs_sum += size;
        max_term = max_term.max(size);
        let decaying = m >= direct_until
            && x.norm() < 0.5 * (m as f64 + 1.0) * (nu + (m as f64 + 2.0)).norm();
        if decaying
            && (size <= ctl.rel_tol * sum.norm() || size <= 1e-17 * max_term || max_term == 0.0)
        {
            return Ok((sum, abs_sum));
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel power series",
        terms: ctl.max_terms,
    })
}

fn check_domain(nu: C64, u: C64) -> Result<()> {
    if u.im == 0.0 && u.re < 0.0 && !is_integer(nu) {
        return Err(Error::BranchCut { nu, u });
    }
    Ok(())
}

/// Bessel function of the first kind `J_ν(u)`, principal branch.
pub fn bessel_j(nu: C64, u: C64, ctl: SeriesControl) -> Result<C64> {
    bessel_j_bounded(nu, u, ctl).map(|(j, _)| j)
}

/// `J_ν(u)` together with `|(u/2)^ν| Σ |term|`, a scale for its rounding error.
pub(crate) fn bessel_j_bounded(nu: C64, u: C64, ctl: SeriesControl) -> Result<(C64, f64)> {
    check_domain(nu, u)?;
    if u == C64::new(0.0, 0.0) {
        return if nu == C64::new(0.0, 0.0) {
            Ok((C64::new(1.0, 0.0), 1.0))
        } else if nu.re > 0.0 {
            Ok((C64::new(0.0, 0.0), 0.0))
        } else {
            Err(Error::BranchCut { nu, u })
        };
    }
    let half = u / 2.0;
    let (sum, abs_sum) = gamma_series_bounded(nu, -(half * half), ctl, |_| C64::new(1.0, 0.0))?;
    let pre = principal_pow(half, nu);
    Ok((pre * sum, pre.norm() * abs_sum))
}

// (u/2)^ν for integer ν is single valued; use exact integer powers so that
// the negative real axis is handled without a branch.
fn principal_pow(base: C64, nu: C64) -> C64 {
    if is_integer(nu) && nu.re.abs() < i32::MAX as f64 {
        base.powi(nu.re as i32)
    } else {
        (nu * base.ln()).exp()
    }
}

/// `J′_ν(u) = (ν/u) J_ν(u) − J_{ν+1}(u)`.
pub fn bessel_j_prime(nu: C64, u: C64, ctl: SeriesControl) -> Result<C64> {
    if u == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("J′ requires u ≠ 0".into()));
    }
    Ok(nu / u * bessel_j(nu, u, ctl)? - bessel_j(nu + 1.0, u, ctl)?)
}

/// Bessel function of the second kind for non-integer order,
/// `(J_ν cos νπ − J_{−ν}) / sin νπ`.
pub fn bessel_y(nu: C64, u: C64, ctl: SeriesControl) -> Result<C64> {
    if is_integer(nu) {
        return Err(Error::IntegerOrder(nu));
    }
    if u.im == 0.0 && u.re <= 0.0 {
        return Err(Error::BranchCut { nu, u });
    }
    let dist = (nu - nu.re.round()).norm();
    if dist < 1e-4 {
        log::warn!("Y_ν with ν = {nu} is ill-conditioned (distance {dist:.1e} to an integer)");
    }
    let j_pos = bessel_j(nu, u, ctl)?;
    let j_neg = bessel_j(-nu, u, ctl)?;
    Ok((j_pos * cos_pi(nu) - j_neg) / sin_pi(nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }
    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // termwise series derivatives, independent of the recurrence route
    fn series_derivative(nu: C64, u: C64, order: u32) -> C64 {
        let h = u / 2.0;
        let mut sum = c(0.0, 0.0);
        let mut fact = 1.0;
        for m in 0..120 {
            if m > 0 {
                fact *= m as f64;
            }
            let p = nu + 2.0 * m as f64;
            let coeff = match order {
                1 => p / 2.0,
                2 => p * (p - 1.0) / 4.0,
                _ => unreachable!(),
            };
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * coeff * (h.ln() * (p - order as f64)).exp() * rgamma(nu + (m as f64 + 1.0))
                / fact;
        }
        sum
    }

    #[test]
    fn origin() {
        assert_eq!(bessel_j(c(0.0, 0.0), c(0.0, 0.0), ctl()).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel_j(c(1.5, 0.0), c(0.0, 0.0), ctl()).unwrap(), c(0.0, 0.0));
        assert!(bessel_j(c(-0.5, 0.0), c(0.0, 0.0), ctl()).is_err());
    }

    #[test]
    fn negative_integer_order() {
        let u = c(1.2, 0.0);
        let a = bessel_j(c(-3.0, 0.0), u, ctl()).unwrap();
        let b = bessel_j(c(3.0, 0.0), u, ctl()).unwrap();
        assert!(rel(a, -b) < 1e-12, "{a} {b}");
        let u = c(0.8, 0.0);
        let a = bessel_j_prime(c(-2.0, 0.0), u, ctl()).unwrap();
        let b = bessel_j_prime(c(2.0, 0.0), u, ctl()).unwrap();
        assert!(rel(a, b) < 1e-12, "{a} {b}");
    }

    #[test]
    fn half_integer_closed_forms() {
        let u = c(2.0, 0.0);
        let k = (2.0 / (PI * 2.0)).sqrt();
        let j = bessel_j(c(0.5, 0.0), u, ctl()).unwrap();
        assert!(rel(j, c(k * 2f64.sin(), 0.0)) < 1e-13);
        let y = bessel_y(c(0.5, 0.0), u, ctl()).unwrap();
        assert!(rel(y, c(-k * 2f64.cos(), 0.0)) < 1e-13);
        // d/du √(2/(πu)) sin u
        let x = 2.0f64;
        let want = (2.0 / PI).sqrt() * (x.cos() / x.sqrt() - 0.5 * x.sin() / x.powf(1.5));
        let jp = bessel_j_prime(c(0.5, 0.0), u, ctl()).unwrap();
        assert!(rel(jp, c(want, 0.0)) < 1e-13);
    }

    #[test]
    fn derivative_of_j0() {
        let u = c(1.0, 0.0);
        let a = bessel_j_prime(c(0.0, 0.0), u, ctl()).unwrap();
        let b = bessel_j(c(1.0, 0.0), u, ctl()).unwrap();
        assert!(rel(a, -b) < 1e-14);
        assert!(rel(a, series_derivative(c(0.0, 0.0), u, 1)) < 1e-13);
    }

    // reference values from a 40-digit evaluation
    #[test]
    fn reference_values() {
        let cases = [
            (c(0.3, 0.0), c(1.0, 0.0), c(0.740_222_479_281_020_5, 0.0)),
            (c(0.5, 0.5), c(1.0, 1.0), c(0.653_909_616_325_548_2, -0.084_764_340_894_061_25)),
            (c(2.5, 0.0), c(3.0, -2.0), c(0.848_299_560_466_276_9, -0.530_829_665_253_684_9)),
            (c(-3.7, 0.4), c(0.6, 0.2), c(-4.725_602_169_989_798, 149.287_088_629_172_9)),
            (c(0.0, 2.0), c(1.0, 0.0), c(0.961_192_720_952_186_9, -6.148_391_123_951_321)),
            (c(12.25, 0.0), c(4.0, 1.0), c(-5.627_149_722_544_185e-6, 1.707_747_458_131_006e-6)),
            (c(-20.5, 0.0), c(2.0, 0.5), c(2.717_605_217_419_663e16, 9.311_561_958_009_174e16)),
        ];
        for (nu, u, want) in cases {
            let got = bessel_j(nu, u, ctl()).unwrap();
            assert!(rel(got, want) < 1e-11, "J_{nu}({u}) = {got}, want {want}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            bessel_j(c(0.5, 0.0), c(-1.0, 0.0), ctl()),
            Err(Error::BranchCut { .. })
        ));
        assert!(bessel_j(c(2.0, 0.0), c(-1.0, 0.0), ctl()).is_ok());
        assert!(matches!(bessel_y(c(1.0, 0.0), c(1.0, 0.0), ctl()), Err(Error::IntegerOrder(_))));
        let tight = SeriesControl { max_terms: 3, rel_tol: 1e-12 };
        assert!(matches!(
            bessel_j(c(0.0, 0.0), c(5.0, 0.0), tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn ode_residual_for_y() {
        let nu = c(0.3, 0.0);
        let u = c(1.0, 0.0);
        let h = 1e-3;
        let y = |x: C64| bessel_y(nu, x, ctl()).unwrap();
        let y0 = y(u);
        // fourth-order central differences
        let y1 = (-y(u + 2.0 * h) + 8.0 * y(u + h) - 8.0 * y(u - h) + y(u - 2.0 * h)) / (12.0 * h);
        let y2 = (-y(u + 2.0 * h) + 16.0 * y(u + h) - 30.0 * y0 + 16.0 * y(u - h) - y(u - 2.0 * h))
            / (12.0 * h * h);
        let res = y2 + y1 / u + (1.0 - nu * nu / (u * u)) * y0;
        assert!(res.norm() < 1e-9 * y0.norm().max(1.0), "{res}");
    }

    #[test]
    fn wronskian_complex_order() {
        let nu = c(0.5, 0.5);
        let u = c(1.0, 1.0);
        let w = bessel_j(nu, u, ctl()).unwrap() * bessel_j_prime(-nu, u, ctl()).unwrap()
            - bessel_j_prime(nu, u, ctl()).unwrap() * bessel_j(-nu, u, ctl()).unwrap();
        let want = -2.0 * sin_pi(nu) / (PI * u);
        assert!(rel(w, want) < 1e-9);
    }

    proptest! {
        #[test]
        fn ode_residual(nr in -6.0f64..6.0, ni in -2.0f64..2.0, r in 0.2f64..8.0, t in -2.5f64..2.5) {
            let nu = c(nr, ni);
            let u = C64::from_polar(r, t);
            let j = bessel_j(nu, u, ctl()).unwrap();
            let j1 = series_derivative(nu, u, 1);
            let j2 = series_derivative(nu, u, 2);
            let res = j2 + j1 / u + (1.0 - nu * nu / (u * u)) * j;
            let scale = j.norm() + j1.norm() + j2.norm() + (nu * nu / (u * u) * j).norm();
            prop_assert!(res.norm() < 1e-9 * scale);
            // the recurrence route agrees with the termwise derivative
            let jp = bessel_j_prime(nu, u, ctl()).unwrap();
            prop_assert!((jp - j1).norm() < 1e-10 * (j1.norm() + (nu / u * j).norm()));
        }

        #[test]
        fn wronskian(nr in -5.0f64..5.0, ni in -1.0f64..1.0, r in 0.3f64..6.0, t in -2.5f64..2.5) {
            let nu = c(nr, ni);
            prop_assume!((nu - nu.re.round()).norm() > 1e-2);
            let u = C64::from_polar(r, t);
            let w = bessel_j(nu, u, ctl()).unwrap() * bessel_j_prime(-nu, u, ctl()).unwrap()
                - bessel_j_prime(nu, u, ctl()).unwrap() * bessel_j(-nu, u, ctl()).unwrap();
            let want = -2.0 * sin_pi(nu) / (PI * u);
            prop_assert!(rel(w, want) < 1e-9, "{} vs {}", w, want);
        }

        #[test]
        fn integer_reflection(n in 0i32..12, r in 0.1f64..8.0, t in -3.0f64..3.0) {
            let u = C64::from_polar(r, t);
            let a = bessel_j(c(-n as f64, 0.0), u, ctl()).unwrap();
            let b = bessel_j(c(n as f64, 0.0), u, ctl()).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((a - sign * b).norm() <= 1e-12 * b.norm());
        }

        #[test]
        fn real_for_real_arguments(nu in -10.0f64..10.0, u in 0.05f64..10.0) {
            let j = bessel_j(c(nu, 0.0), c(u, 0.0), ctl()).unwrap();
            prop_assert!(j.im.abs() < 1e-13 * j.norm());
        }
    }
}
