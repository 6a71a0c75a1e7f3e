//! Tracing of the spectral arcs `{λ : Δ(λ) ∈ [−1, 1]}`.

use std::f64::consts::PI;

use serde::Serialize;

use super::contour::SearchBox;
use super::{Route, SolveOptions};
use crate::error::{Error, Result};
use crate::floquet::integrate_fundamental;
use crate::par;
use crate::potential::Potential;
use crate::C64;

/// A polyline along the spectrum, ordered by arclength.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub points: Vec<C64>,
    /// The tracer could not continue (corrector failure or point budget).
    pub stalled: bool,
}

const GRID: usize = 32;
const MAX_POINTS: usize = 20_000;
// |Re Δ| may exceed 1 by this much before the arc is considered ended.
const EDGE_SLACK: f64 = 1e-8;

#[derive(Clone, Copy)]
enum Disc<'a> {
    Closed(C64),
    Ode(&'a Potential, f64),
}

impl Disc<'_> {
    // (Δ, Δ′)
    fn eval(&self, z: C64) -> Result<(C64, C64)> {
        match *self {
            Disc::Closed(shift) => {
                let r = (z - shift).sqrt();
                let x = PI * r;
                let sinc = if x.norm() < 1e-3 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                Ok((x.cos(), -0.5 * PI * PI * sinc))
            }
            Disc::Ode(p, tol) => {
                let f = integrate_fundamental(p, z, 0.0, tol, true)?;
                Ok((f.discriminant(), f.discriminant_dlambda().expect("variational data requested")))
            }
        }
    }

    fn im(&self, z: C64) -> Result<f64> {
        Ok(self.eval(z)?.0.im)
    }
}

/// Traces the arcs of the spectrum inside `region` with predictor steps of
/// length `step`. Seeds come from sign changes of `Im Δ` on a coarse grid.
pub fn spectral_arcs(p: &Potential, region: &SearchBox, step: f64, opts: &SolveOptions) -> Result<Vec<Arc>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("arc step must be positive, got {step}")));
    }
    crate::floquet::check_tol(opts.tol)?;
    let disc = match (opts.route, p.as_constant(), p.as_model()) {
        (Route::Auto, Some(c), _) => Disc::Closed(c),
        (Route::Auto, None, Some(_)) => Disc::Closed(C64::new(0.0, 0.0)),
        _ => Disc::Ode(p, opts.tol),
    };
    let seeds = scan_seeds(&disc, region)?;
    let mut arcs: Vec<Arc> = Vec::new();
    for seed in seeds {
        if arcs.iter().any(|a| near_polyline(&a.points, seed, step)) {
            continue;
        }
        let (back, back_stalled) = trace(&disc, region, seed, -1.0, step)?;
        let (fwd, fwd_stalled) = trace(&disc, region, seed, 1.0, step)?;
        let mut points: Vec<C64> = back.into_iter().rev().collect();
        points.extend(fwd.into_iter().skip(1));
        // report every arc from its left end
        let (first, last) = (points[0], points[points.len() - 1]);
        if (last.re, last.im) < (first.re, first.im) {
            points.reverse();
        }
        arcs.push(Arc {
            points,
            stalled: back_stalled || fwd_stalled,
        });
    }
    Ok(arcs)
}

fn near_polyline(points: &[C64], z: C64, step: f64) -> bool {
    if points.len() == 1 {
        return (points[0] - z).norm() < step;
    }
    points.windows(2).any(|w| {
        let (a, b) = (w[0], w[1]);
        let ab = b - a;
        let t = if ab.norm_sqr() > 0.0 {
            (((z - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (a + t * ab - z).norm() < step
    })
}

fn scan_seeds(disc: &Disc, region: &SearchBox) -> Result<Vec<C64>> {
    let (r0, r1) = region.re_bounds();
    let (i0, i1) = region.im_bounds();
    // cell-centred nodes, so symmetric regions never sample the real axis
    let node = |i: usize, j: usize| {
        C64::new(
            r0 + (i as f64 + 0.5) * (r1 - r0) / GRID as f64,
            i0 + (j as f64 + 0.5) * (i1 - i0) / GRID as f64,
        )
    };
    let nodes: Vec<(usize, usize)> = (0..GRID).flat_map(|i| (0..GRID).map(move |j| (i, j))).collect();
    let values = par::try_map(&nodes, |&(i, j)| disc.im(node(i, j)))?;
    let at = |i: usize, j: usize| values[i * GRID + j];
    let mut segments = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            if i + 1 < GRID && at(i, j) * at(i + 1, j) < 0.0 {
                segments.push((node(i, j), node(i + 1, j), at(i, j)));
            }
            if j + 1 < GRID && at(i, j) * at(i, j + 1) < 0.0 {
                segments.push((node(i, j), node(i, j + 1), at(i, j)));
            }
        }
    }
    let crossings = par::try_map(&segments, |&(a, b, fa)| bisect_im(disc, a, b, fa))?;
    let mut seeds = Vec::new();
    for z in crossings {
        if disc.eval(z)?.0.re.abs() <= 1.0 + EDGE_SLACK {
            seeds.push(z);
        }
    }
    Ok(seeds)
}

fn bisect_im(disc: &Disc, mut a: C64, mut b: C64, mut fa: f64) -> Result<C64> {
    for _ in 0..50 {
        let m = 0.5 * (a + b);
        let fm = disc.im(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

// Newton on Im Δ along the normal of the level curve.
fn correct(disc: &Disc, mut z: C64) -> Result<Option<(C64, C64, C64)>> {
    for _ in 0..12 {
        let (d, dd) = disc.eval(z)?;
        if d.im.abs() <= 1e-11 * (1.0 + d.norm()) {
            return Ok(Some((z, d, dd)));
        }
        let g = dd.norm();
        if g == 0.0 {
            return Ok(None);
        }
        let normal = C64::new(0.0, 1.0) * dd.conj() / g;
        z -= d.im / g * normal;
    }
    Ok(None)
}

fn clip_to_region(region: &SearchBox, inside: C64, outside: C64) -> C64 {
    let (mut a, mut b) = (inside, outside);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if region.contains(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

// Locates |Re Δ| = 1 between an interior point and one beyond the edge.
fn band_edge(disc: &Disc, inside: C64, outside: C64) -> Result<C64> {
    let (mut a, mut b) = (inside, outside);
    for _ in 0..50 {
        let m = 0.5 * (a + b);
        let m = correct(disc, m)?.map_or(m, |c| c.0);
        if disc.eval(m)?.0.re.abs() <= 1.0 {
            a = m;
        } else {
            b = m;
        }
        if (b - a).norm() < 1e-13 * (1.0 + a.norm()) {
            break;
        }
    }
    Ok(a)
}

fn trace(disc: &Disc, region: &SearchBox, seed: C64, dir: f64, step: f64) -> Result<(Vec<C64>, bool)> {
    let mut points = vec![seed];
    let mut z = seed;
    let mut prev: Option<C64> = None;
    while points.len() < MAX_POINTS {
        let (_, dd) = disc.eval(z)?;
        let g = dd.norm();
        let mut tangent = match (g > 1e-12, prev) {
            (true, _) => dd.conj() / g,
            (false, Some(t)) => t,
            (false, None) => return Ok((points, true)),
        };
        match prev {
            Some(t) if (tangent * t.conj()).re < 0.0 => tangent = -tangent,
            None => tangent *= dir,
            _ => {}
        }
        let Some((next, d, _)) = correct(disc, z + step * tangent)? else {
            return Ok((points, true));
        };
        if !region.contains(next) {
            points.push(clip_to_region(region, z, next));
            return Ok((points, false));
        }
        if d.re.abs() > 1.0 + EDGE_SLACK {
            points.push(band_edge(disc, z, next)?);
            return Ok((points, false));
        }
        if points.len() > 3 && (next - seed).norm() < 0.5 * step {
            points.push(seed);
            return Ok((points, false));
        }
        points.push(next);
        prev = Some(tangent);
        z = next;
    }
    Ok((points, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn region() -> SearchBox {
        SearchBox::from_bounds((-3.0, 12.0), (-2.0, 2.0)).unwrap()
    }

    fn all_points(arcs: &[Arc]) -> Vec<C64> {
        arcs.iter().flat_map(|a| a.points.iter().copied()).collect()
    }

    #[test]
    fn free_spectrum_is_the_positive_half_line() {
        let arcs = spectral_arcs(&Potential::zero(), &region(), 0.1, &SolveOptions::default()).unwrap();
        assert_eq!(arcs.len(), 1);
        let pts = &arcs[0].points;
        assert!(pts.iter().all(|z| z.im.abs() < 1e-9 && z.re > -1e-9));
        assert!(pts.first().unwrap().re.abs() < 1e-9);
        assert!((pts.last().unwrap().re - 12.0).abs() < 1e-6);
    }

    #[test]
    fn model_spectrum_matches_free_for_both_routes() {
        let p = Potential::model(c(1.0, 0.0));
        let arcs = spectral_arcs(&p, &region(), 0.2, &SolveOptions::default()).unwrap();
        assert!(all_points(&arcs).iter().all(|z| z.im.abs() < 1e-9 && z.re > -1e-9));
        let small = SearchBox::from_bounds((-2.0, 5.0), (-1.0, 1.0)).unwrap();
        let arcs = spectral_arcs(&p, &small, 0.25, &SolveOptions::ode(1e-10)).unwrap();
        assert!(!arcs.is_empty());
        for z in all_points(&arcs) {
            assert!(z.im.abs() < 1e-7 && z.re > -1e-7, "{z}");
        }
    }

    #[test]
    fn mathieu_bands_have_a_gap_near_one() {
        let p = Potential::mathieu(1.0);
        let r = SearchBox::from_bounds((-2.0, 5.0), (-1.0, 1.0)).unwrap();
        let arcs = spectral_arcs(&p, &r, 0.05, &SolveOptions::default()).unwrap();
        let pts = all_points(&arcs);
        assert!(pts.iter().all(|z| z.im.abs() < 1e-7));
        // gap (E_1, E_2) ≈ (-0.110, 1.859) and below E_0 ≈ -0.455
        assert!(!pts.iter().any(|z| z.re > -0.1 && z.re < 1.85));
        assert!(!pts.iter().any(|z| z.re < -0.46));
        assert!(pts.iter().any(|z| (z.re - 1.0).abs() > 0.9 && z.re > 1.9));
        assert!(arcs.len() >= 2);
    }

    #[test]
    fn invalid_step() {
        assert!(spectral_arcs(&Potential::zero(), &region(), 0.0, &SolveOptions::default()).is_err());
    }
}
