//! Zero counting by the argument principle on rectangles, recursive
//! isolation, and polishing.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::targets::{Analytic, Sample};
use crate::error::{Error, Result};
use crate::par;
use crate::C64;

/// Initial number of quadrature points per side.
pub const DEFAULT_QUAD_POINTS: usize = 64;
/// Quadrature points per side are doubled up to this many.
pub const MAX_QUAD_POINTS: usize = 512;
/// Boxes holding several zeros are not split below this side length; the
/// cluster is reported as one zero of the counted multiplicity.
pub const CLUSTER_SIDE: f64 = 1e-4;
/// Default recursion limit for [`find_zeros`].
pub const DEFAULT_MAX_DEPTH: usize = 48;

const PERTURBATION_ATTEMPTS: usize = 5;
const BOUNDARY_RATIO: f64 = 1e-8;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub center: C64,
    /// Half extents along the real and imaginary axes.
    pub half_widths: [f64; 2],
}

impl SearchBox {
    pub fn new(center: C64, half_re: f64, half_im: f64) -> Result<Self> {
        if !(half_re > 0.0 && half_im > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "box half widths must be positive, got ({half_re}, {half_im})"
            )));
        }
        Ok(Self {
            center,
            half_widths: [half_re, half_im],
        })
    }

    /// Box `[re.0, re.1] × [im.0, im.1]`.
    pub fn from_bounds(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        Self::new(
            C64::new(0.5 * (re.0 + re.1), 0.5 * (im.0 + im.1)),
            0.5 * (re.1 - re.0),
            0.5 * (im.1 - im.0),
        )
    }

    pub fn re_bounds(&self) -> (f64, f64) {
        (self.center.re - self.half_widths[0], self.center.re + self.half_widths[0])
    }

    pub fn im_bounds(&self) -> (f64, f64) {
        (self.center.im - self.half_widths[1], self.center.im + self.half_widths[1])
    }

    pub fn max_side(&self) -> f64 {
        2.0 * self.half_widths[0].max(self.half_widths[1])
    }

    pub fn contains(&self, z: C64) -> bool {
        let (r0, r1) = self.re_bounds();
        let (i0, i1) = self.im_bounds();
        (r0..=r1).contains(&z.re) && (i0..=i1).contains(&z.im)
    }

    fn grown(&self, factor: f64) -> SearchBox {
        SearchBox {
            center: self.center,
            half_widths: [self.half_widths[0] * factor, self.half_widths[1] * factor],
        }
    }

    // counter-clockwise from the lower-left corner
    fn corners(&self) -> [C64; 4] {
        let (r0, r1) = self.re_bounds();
        let (i0, i1) = self.im_bounds();
        [C64::new(r0, i0), C64::new(r1, i0), C64::new(r1, i1), C64::new(r0, i1)]
    }
}

/// A located zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub value: C64,
    pub multiplicity: usize,
    /// `|f(value)|`
    pub residual: f64,
    /// Estimated distance to the exact zero.
    pub error: f64,
    /// `|f′(value)|`
    pub slope: f64,
}

fn boundary_points(b: &SearchBox, n: usize) -> Vec<C64> {
    let c = b.corners();
    let mut pts = Vec::with_capacity(4 * n);
    for k in 0..4 {
        let (a, e) = (c[k], c[(k + 1) % 4]);
        for j in 0..n {
            pts.push(a + (e - a) * (j as f64 / n as f64));
        }
    }
    pts
}

/// Winding number of `f` around the boundary of `b`.
///
/// The count comes from the accumulated phase of consecutive samples and
/// must agree to within 0.25 with the trapezoid rule applied to `f′/f`;
/// the sampling is doubled until both agree and no phase step exceeds π/2.
pub(crate) fn winding<F: Analytic + ?Sized>(f: &F, b: &SearchBox, quad_points: usize) -> Result<usize> {
    let mut n = quad_points.max(4);
    let mut last = f64::NAN;
    while n <= MAX_QUAD_POINTS.max(quad_points) {
        let pts = boundary_points(b, n);
        let samples: Vec<Sample> = par::try_map(&pts, |&z| f.sample(z))?;
        let (mut fmin, mut fmax) = (f64::INFINITY, 0.0f64);
        for s in &samples {
            let a = s.value.norm();
            if !a.is_finite() || !s.derivative.is_finite() {
                return Err(Error::BoundaryZero { attempts: 0 });
            }
            fmin = fmin.min(a);
            fmax = fmax.max(a);
        }
        if fmin <= BOUNDARY_RATIO * fmax || fmax == 0.0 {
            return Err(Error::BoundaryZero { attempts: 0 });
        }
        let m = samples.len();
        let mut phase = 0.0;
        let mut max_jump = 0.0f64;
        for j in 0..m {
            let step = (samples[(j + 1) % m].value / samples[j].value).arg();
            phase += step;
            max_jump = max_jump.max(step.abs());
        }
        // trapezoid on each side, endpoints shared with the neighbours
        let corners = b.corners();
        let mut integral = C64::new(0.0, 0.0);
        for k in 0..4 {
            let dz = (corners[(k + 1) % 4] - corners[k]) / n as f64;
            for j in 0..=n {
                let s = &samples[(k * n + j) % m];
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                integral += w * dz * s.derivative / s.value;
            }
        }
        let trapezoid = (integral / C64::new(0.0, 2.0 * PI)).re;
        let count = (phase / (2.0 * PI)).round();
        last = trapezoid;
        if max_jump < 0.5 * PI && (trapezoid - count).abs() < 0.25 && count >= 0.0 {
            return Ok(count as usize);
        }
        n *= 2;
    }
    Err(Error::NonIntegralWinding {
        value: last,
        points: n / 2,
    })
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::BoundaryZero { .. } | Error::NonIntegralWinding { .. })
}

/// Number of zeros of `f` inside `b`, counted with multiplicity.
///
/// If a zero sits on (or too close to) the boundary the box is enlarged
/// slightly, up to five times.
pub fn count_zeros<F: Analytic + ?Sized>(f: &F, b: &SearchBox, quad_points: usize) -> Result<usize> {
    let mut attempt = 0;
    loop {
        let bb = b.grown(1.0 + 1e-3 * attempt as f64);
        match winding(f, &bb, quad_points) {
            Err(e) if retryable(&e) => {
                attempt += 1;
                if attempt > PERTURBATION_ATTEMPTS {
                    return Err(Error::BoundaryZero { attempts: PERTURBATION_ATTEMPTS });
                }
                log::debug!("perturbing contour (attempt {attempt}): {e}");
            }
            other => return other,
        }
    }
}

/// All zeros of `f` in `b` with multiplicities, isolated by recursive
/// subdivision and polished by Newton-type iterations.
pub fn find_zeros<F: Analytic + ?Sized>(f: &F, b: &SearchBox, max_depth: usize) -> Result<Vec<Zero>> {
    let count = winding(f, b, DEFAULT_QUAD_POINTS)?;
    resolve(f, b, count, 0, max_depth)
}

// cut positions avoid the exact midpoint, where symmetric problems put zeros
const CUT_OFFSETS: [f64; PERTURBATION_ATTEMPTS] = [0.0123, -0.0871, 0.1534, -0.2112, 0.2745];

fn split<F: Analytic + ?Sized>(f: &F, b: &SearchBox, count: usize) -> Result<Vec<(SearchBox, usize)>> {
    let (r0, r1) = b.re_bounds();
    let (i0, i1) = b.im_bounds();
    let (w, h) = (r1 - r0, i1 - i0);
    let mut last_err = Error::BoundaryZero { attempts: PERTURBATION_ATTEMPTS };
    for (attempt, off) in CUT_OFFSETS.iter().enumerate() {
        let cut_re = r0 + (0.5 + off) * w;
        let cut_im = i0 + (0.5 - 0.7 * off) * h;
        let children: Vec<SearchBox> = if w >= 2.0 * h {
            vec![
                SearchBox::from_bounds((r0, cut_re), (i0, i1))?,
                SearchBox::from_bounds((cut_re, r1), (i0, i1))?,
            ]
        } else if h >= 2.0 * w {
            vec![
                SearchBox::from_bounds((r0, r1), (i0, cut_im))?,
                SearchBox::from_bounds((r0, r1), (cut_im, i1))?,
            ]
        } else {
            vec![
                SearchBox::from_bounds((r0, cut_re), (i0, cut_im))?,
                SearchBox::from_bounds((cut_re, r1), (i0, cut_im))?,
                SearchBox::from_bounds((r0, cut_re), (cut_im, i1))?,
                SearchBox::from_bounds((cut_re, r1), (cut_im, i1))?,
            ]
        };
        match par::try_map(&children, |cb| winding(f, cb, DEFAULT_QUAD_POINTS)) {
            Ok(counts) => {
                let total: usize = counts.iter().sum();
                if total == count {
                    return Ok(children.into_iter().zip(counts).collect());
                }
                log::debug!("split attempt {attempt}: children hold {total} zeros, parent {count}");
                last_err = Error::CountMismatch {
                    expected: count,
                    found: total,
                };
            }
            Err(e) if retryable(&e) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn resolve<F: Analytic + ?Sized>(
    f: &F,
    b: &SearchBox,
    count: usize,
    depth: usize,
    max_depth: usize,
) -> Result<Vec<Zero>> {
    match count {
        0 => return Ok(Vec::new()),
        1 => {
            if let Some(z) = newton(f, b)? {
                return Ok(vec![z]);
            }
        }
        _ if b.max_side() <= CLUSTER_SIDE => return Ok(vec![polish_cluster(f, b, count)?]),
        _ => {}
    }
    if depth >= max_depth {
        return Err(Error::MaxDepth(max_depth));
    }
    let children = split(f, b, count)?;
    let found = par::try_map(&children, |(cb, cc)| resolve(f, cb, *cc, depth + 1, max_depth))?;
    Ok(found.into_iter().flatten().collect())
}

fn ulp_floor(z: C64) -> f64 {
    4.0 * f64::EPSILON * z.norm().max(f64::MIN_POSITIVE)
}

fn finish(z: C64, s: &Sample, multiplicity: usize, error: f64) -> Zero {
    Zero {
        value: z,
        multiplicity,
        residual: s.value.norm(),
        error: error.max(ulp_floor(z)),
        slope: s.derivative.norm(),
    }
}

// Newton from the box centre; `None` if it fails or leaves the box.
fn newton<F: Analytic + ?Sized>(f: &F, b: &SearchBox) -> Result<Option<Zero>> {
    let roam = b.grown(2.0);
    let mut z = b.center;
    let mut s = f.sample(z)?;
    let mut best = (s.value.norm(), z, s);
    let mut prev_step = f64::INFINITY;
    for _ in 0..80 {
        if s.derivative == C64::new(0.0, 0.0) {
            break;
        }
        let step = s.value / s.derivative;
        let size = step.norm();
        if !size.is_finite() {
            break;
        }
        let next = z - step;
        if !roam.contains(next) {
            return Ok(None);
        }
        z = next;
        s = f.sample(z)?;
        if s.value.norm() <= best.0 {
            best = (s.value.norm(), z, s);
        }
        if size <= ulp_floor(z) || s.value == C64::new(0.0, 0.0) {
            break;
        }
        // below the noise floor the steps stop shrinking
        if size < 1e-8 * (1.0 + z.norm()) && size > 0.5 * prev_step {
            break;
        }
        prev_step = size;
    }
    let (_, z, s) = best;
    if !b.contains(z) || s.derivative == C64::new(0.0, 0.0) {
        return Ok(None);
    }
    let correction = (s.value / s.derivative).norm();
    if correction > 1e-6 * (1.0 + z.norm()) {
        return Ok(None);
    }
    let error = correction.max(s.noise / s.derivative.norm());
    Ok(Some(finish(z, &s, 1, error)))
}

fn polish_cluster<F: Analytic + ?Sized>(f: &F, b: &SearchBox, m: usize) -> Result<Zero> {
    if m == 2 {
        // the centre of a double zero is a simple zero of f′: secant on f′
        let mut z0 = b.center;
        let mut z1 = b.center + C64::new(0.25, 0.1) * b.max_side();
        let mut g0 = f.sample(z0)?.derivative;
        let mut g1 = f.sample(z1)?.derivative;
        let mut curvature = C64::new(0.0, 0.0);
        for _ in 0..60 {
            if g1 == g0 {
                break;
            }
            let slope = (g1 - g0) / (z1 - z0);
            curvature = slope;
            let z2 = z1 - g1 / slope;
            if !z2.is_finite() || (z2 - z1).norm() <= ulp_floor(z1) {
                if z2.is_finite() {
                    z1 = z2;
                }
                break;
            }
            z0 = z1;
            g0 = g1;
            z1 = z2;
            g1 = f.sample(z1)?.derivative;
        }
        let z = if b.grown(1.5).contains(z1) { z1 } else { b.center };
        let s = f.sample(z)?;
        let error = if curvature.norm() > 0.0 {
            (2.0 * (s.noise + s.value.norm()) / curvature.norm()).sqrt()
        } else {
            b.max_side()
        };
        return Ok(finish(z, &s, 2, error.min(b.max_side())));
    }
    // modified Newton for higher multiplicities
    let mut z = b.center;
    let mut s = f.sample(z)?;
    for _ in 0..60 {
        if s.derivative == C64::new(0.0, 0.0) {
            break;
        }
        let step = m as f64 * s.value / s.derivative;
        let next = z - step;
        if !b.grown(1.5).contains(next) {
            break;
        }
        z = next;
        s = f.sample(z)?;
        if step.norm() <= ulp_floor(z) {
            break;
        }
    }
    Ok(finish(z, &s, m, b.max_side()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn poly(roots: Vec<C64>) -> impl Fn(C64) -> Result<Sample> + Sync {
        move |z| {
            let mut v = c(1.0, 0.0);
            let mut d = c(0.0, 0.0);
            for r in &roots {
                d = d * (z - r) + v;
                v *= z - r;
            }
            Ok(Sample {
                value: v,
                derivative: d,
                noise: 1e-16 * (1.0 + v.norm()),
            })
        }
    }

    #[test]
    fn box_geometry() {
        let b = SearchBox::from_bounds((0.0, 2.0), (-1.0, 3.0)).unwrap();
        assert_eq!(b.center, c(1.0, 1.0));
        assert_eq!(b.max_side(), 4.0);
        assert!(b.contains(c(0.5, 2.9)) && !b.contains(c(2.5, 0.0)));
        assert!(SearchBox::new(c(0.0, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn counts_polynomial_roots() {
        let f = poly(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.5, -0.4), c(3.0, 0.0)]);
        let b = SearchBox::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&f, &b, DEFAULT_QUAD_POINTS).unwrap(), 3);
        let f2 = poly(vec![c(0.2, 0.1), c(0.2, 0.1), c(-0.5, 0.5)]);
        assert_eq!(count_zeros(&f2, &b, DEFAULT_QUAD_POINTS).unwrap(), 3);
    }

    #[test]
    fn partition_counts_add_up() {
        let f = poly(vec![c(0.11, 0.2), c(-0.3, 0.05), c(0.5, -0.4), c(0.52, -0.41)]);
        let whole = SearchBox::from_bounds((-1.0, 1.0), (-1.0, 1.0)).unwrap();
        let parts = [
            SearchBox::from_bounds((-1.0, 0.2), (-1.0, 0.1)).unwrap(),
            SearchBox::from_bounds((0.2, 1.0), (-1.0, 0.1)).unwrap(),
            SearchBox::from_bounds((-1.0, 0.2), (0.1, 1.0)).unwrap(),
            SearchBox::from_bounds((0.2, 1.0), (0.1, 1.0)).unwrap(),
        ];
        let total: usize = parts.iter().map(|b| count_zeros(&f, b, 64).unwrap()).sum();
        assert_eq!(total, count_zeros(&f, &whole, 64).unwrap());
    }

    #[test]
    fn boundary_zero_is_perturbed_away() {
        let f = poly(vec![c(1.0, 0.0)]);
        let b = SearchBox::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&f, &b, 64).unwrap(), 1);
    }

    #[test]
    fn finds_simple_and_multiple_zeros() {
        let f = poly(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.5, -0.4), c(0.5, -0.4), c(-0.6, 0.6), c(-0.6, 0.6), c(-0.6, 0.6)]);
        let b = SearchBox::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        let mut zs = find_zeros(&f, &b, DEFAULT_MAX_DEPTH).unwrap();
        zs.sort_by(|a, b| a.value.re.total_cmp(&b.value.re));
        let mults: Vec<usize> = zs.iter().map(|z| z.multiplicity).collect();
        assert_eq!(mults, vec![3, 1, 1, 2]);
        assert!((zs[0].value - c(-0.6, 0.6)).norm() < 1e-4);
        assert!((zs[1].value - c(-0.3, 0.0)).norm() < 1e-13);
        assert!((zs[2].value - c(0.1, 0.2)).norm() < 1e-13);
        assert!((zs[3].value - c(0.5, -0.4)).norm() < 1e-10);
    }

    #[test]
    fn polished_zeros_stay_in_their_box() {
        let roots = vec![c(0.31, 0.0), c(0.33, 0.0), c(0.9, 0.5)];
        let f = poly(roots);
        let b = SearchBox::from_bounds((0.0, 1.0), (-0.5, 0.7)).unwrap();
        for z in find_zeros(&f, &b, DEFAULT_MAX_DEPTH).unwrap() {
            assert!(b.contains(z.value));
            assert_eq!(z.multiplicity, 1);
        }
    }
}
