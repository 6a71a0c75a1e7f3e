//! Complex Gamma function by the Lanczos approximation (g = 7, 9 terms),
//! with the reflection formula for `Re z < 1/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln √(2π)`
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `true` when `z` is exactly one of `0, -1, -2, ...`.
pub fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `sin(π z)` with exact argument reduction of the real part, so that the
/// result keeps full relative accuracy next to integers.
pub fn sin_pi(z: C64) -> C64 {
    let n = z.re.round();
    let r = z.re - n;
    let sign = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    C64::new(sign * s * y.cosh(), sign * c * y.sinh())
}

/// `cos(π z)`, reduced like [`sin_pi`].
pub fn cos_pi(z: C64) -> C64 {
    let n = z.re.round();
    let r = z.re - n;
    let sign = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    C64::new(sign * c * y.cosh(), -sign * s * y.sinh())
}

// ln Γ(z) for Re z >= 1/2.
fn ln_gamma_right(z: C64) -> C64 {
    let x = z - 1.0;
    let mut series = C64::new(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        series += p / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + series.ln()
}

/// Complex Gamma function. Fails at the poles `0, -1, -2, ...`.
pub fn gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        Ok(PI / (sin_pi(z) * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Reciprocal Gamma `1/Γ(z)`, an entire function; exactly zero at the poles
/// of Γ and accurate in relative terms next to them.
pub fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) / PI * ln_gamma_right(1.0 - z).exp()
    } else {
        (-ln_gamma_right(z)).exp()
    }
}
