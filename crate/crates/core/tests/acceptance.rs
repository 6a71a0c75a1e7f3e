//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Thresholds and runtime budgets are
//! fixed here and must not be relaxed to make a run green.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hill_core::eigensolve::{dirichlet_eigenvalues, neumann_eigenvalues, positional_values};
use hill_core::floquet::{discriminant, discriminant_at, green_identity_residual, integrate_fundamental, propagate};
use hill_core::specfun::{
    bessel_j, bessel_j_prime, dirichlet_endpoint_model, neumann_endpoint_model, sin_pi, SeriesControl,
};
use hill_core::theorems;
use hill_core::traceform::{dirichlet_trace, neumann_trace};
use hill_core::{Potential, SolveOptions, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;
// integrator accuracy for the unimodularity property
const WRONSKIAN_TOL: f64 = 1e-13;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn model(k: f64) -> Potential {
    Potential::model(c(k, 0.0))
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 7 × 5 grid over [−5, 30] × [−5, 5]
fn lambda_grid() -> Vec<C64> {
    let mut g = Vec::new();
    for i in 0..7 {
        for j in 0..5 {
            g.push(c(-5.0 + 35.0 * i as f64 / 6.0, -5.0 + 10.0 * j as f64 / 4.0));
        }
    }
    g
}

fn discriminant_identity() -> Outcome {
    let mut worst = 0.0f64;
    for k in [0.5, 1.0, 4.0] {
        let p = model(k);
        for lam in lambda_grid() {
            let d = discriminant(&p, lam, TOL).map_err(err)?;
            worst = worst.max((d - (PI * lam.sqrt()).cos()).norm());
        }
    }
    ensure(worst < 1e-8, format!("max |Δ − cos(π√λ)| = {worst:.3e}"))
}

fn bessel_cross_validation() -> Outcome {
    let ctl = SeriesControl {
        max_terms: 400,
        rel_tol: 1e-16,
    };
    let (mut ws, mut wc) = (0.0f64, 0.0f64);
    for k in [0.5, 1.0, 4.0] {
        let p = model(k);
        let kc = c(k, 0.0);
        for lam in lambda_grid() {
            let f = integrate_fundamental(&p, lam, 0.0, TOL, false).map_err(err)?;
            let s = dirichlet_endpoint_model(lam, kc, ctl).map_err(err)?;
            let cp = neumann_endpoint_model(lam, kc, ctl).map_err(err)?;
            ws = ws.max((f.s_end - s).norm());
            wc = wc.max((f.c_prime_end - cp).norm());
        }
    }
    ensure(ws < 1e-8 && wc < 1e-8, format!("max |s − Bessel| = {ws:.3e}, max |c′ − Bessel| = {wc:.3e}"))
}

fn dirichlet_localization() -> Outcome {
    let mu = dirichlet_eigenvalues(&model(1.0), 0.0, 8, &SolveOptions::with_tol(TOL)).map_err(err)?;
    let mut ok = true;
    let mut notes = Vec::new();
    for (j, e) in (1..=8).zip(positional_values(&mu)) {
        let n2 = (j * j) as f64;
        let margin = (e.re - (n2 - 0.5)).min(n2 - e.re);
        let real = e.im.abs() < 1e-7;
        if !(margin > 1e-4 && real) {
            ok = false;
            notes.push(format!("j={j}: margin {margin:.3e}"));
        }
    }
    let detail = if notes.is_empty() {
        "all margins > 1e-4, all real".to_string()
    } else {
        notes.join("; ")
    };
    ensure(ok, detail)
}

fn neumann_localization() -> Outcome {
    let nu = neumann_eigenvalues(&model(1.0), 0.0, 8, &SolveOptions::with_tol(TOL)).map_err(err)?;
    let n0 = nu[0].value.re;
    let mut worst = f64::INFINITY;
    let mut ok = nu.len() == 9 && 0.0 < n0 && n0 < 0.5;
    for (k, e) in nu.iter().enumerate() {
        let k2 = (k * k) as f64;
        let margin = (e.value.re - k2).min(k2 + 0.5 - n0 - e.value.re);
        let resolution = 10.0 * (e.error + nu[0].error);
        ok &= margin > resolution && e.value.im.abs() < 1e-7;
        worst = worst.min(margin);
    }
    ensure(ok, format!("ν_0 = {n0:.12}, smallest margin {worst:.3e}"))
}

fn trace_sums() -> Outcome {
    let opts = SolveOptions::with_tol(TOL);
    let p = model(1.0);
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [dirichlet_trace(&p, 0.0, 30, &opts).map_err(err)?, neumann_trace(&p, 0.0, 30, &opts).map_err(err)?] {
        let fin = r.final_error();
        // errors are non-increasing for M ≥ 5 up to the roundoff of the eigenvalues entering the sums
        let monotone = r.errors[4..].windows(2).all(|w| w[1] <= w[0] + r.spectral_error);
        ok &= fin < 1e-3 && monotone;
        parts.push(format!("{}: |S_30 − 1| = {fin:.3e}, monotone = {monotone}", r.kind.as_str()));
    }
    ensure(ok, parts.join("; "))
}

fn half_period_interleaving() -> Outcome {
    let one = theorems::check_localization(1.0, 6, TOL).map_err(err)?;
    let small = theorems::check_localization(0.4, 6, TOL).map_err(err)?;
    let a = one.clause("vii").passed;
    let b = small.clause("vii").passed;
    let d = small.clause("viii").passed;
    ensure(
        a && b && d,
        format!("K=1 Dirichlet: {a}; K=0.4 Dirichlet with midpoints: {b}; K=0.4 Neumann with midpoints: {d}"),
    )
}

fn multiplicities() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [0.5, 1.0] {
        let r = theorems::check_multiplicities(c(k, 0.0), 3, TOL).map_err(err)?;
        let least = r.entries.iter().map(|e| e.monodromy_defect).fold(f64::INFINITY, f64::min);
        ok &= r.passed;
        parts.push(format!("K={k}: passed={} min defect {least:.3e}", r.passed));
    }
    let free = theorems::multiplicities(&Potential::zero(), 3, TOL).map_err(err)?;
    let control = free.entries.len() == 3 && free.entries.iter().all(|e| e.geometric == 2);
    ok &= control;
    parts.push(format!("V=0 geometric 2: {control}"));
    ensure(ok, parts.join("; "))
}

fn symmetry_suite() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [0.5, 1.0] {
        let p = model(k);
        let mut pt_dev = 0.0f64;
        let mut pt_ok = true;
        for x0 in [0.3, 1.1] {
            let r = theorems::check_pt_symmetry(&p, x0, 5, TOL).map_err(err)?;
            pt_ok &= r.passed;
            pt_dev = pt_dev.max(r.max_deviation);
        }
        let real = theorems::check_reality_at_special_points(&p, 5, TOL).map_err(err)?;
        ok &= pt_ok && real.passed;
        parts.push(format!(
            "K={k}: PT {pt_ok} (max dev {pt_dev:.2e}), reality {} (max |Im| {:.2e})",
            real.passed, real.max_deviation
        ));
    }
    ensure(ok, parts.join("; "))
}

fn random_potential(rng: &mut ChaCha8Rng) -> Potential {
    let modes = rng.gen_range(1..=3);
    Potential::new((0..modes).map(|_| {
        let n = rng.gen_range(-3..=3);
        (n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut parts = Vec::new();
    let mut ok = true;

    let mut w = 0.0f64;
    for _ in 0..50 {
        let p = random_potential(&mut rng);
        let lam = c(rng.gen_range(-5.0..30.0), rng.gen_range(-5.0..5.0));
        let f = integrate_fundamental(&p, lam, 0.0, WRONSKIAN_TOL, false).map_err(err)?;
        w = w.max((f.wronskian() - 1.0).norm());
    }
    ok &= w < 1e-10;
    parts.push(format!("wronskian {w:.2e}"));

    let mut dx = 0.0f64;
    for _ in 0..20 {
        let p = random_potential(&mut rng);
        let lam = c(rng.gen_range(-5.0..30.0), rng.gen_range(-5.0..5.0));
        let x0 = rng.gen_range(0.0..PI);
        let a = discriminant_at(&p, lam, 0.0, TOL).map_err(err)?;
        let b = discriminant_at(&p, lam, x0, TOL).map_err(err)?;
        dx = dx.max((a - b).norm());
    }
    ok &= dx < 1e-8;
    parts.push(format!("base point {dx:.2e}"));

    // ∂c/∂x0 = (λ − V(x0)) s and ∂s/∂x0 = −c at a fixed endpoint
    let mut der = 0.0f64;
    let h = 1e-4;
    for _ in 0..10 {
        let p = random_potential(&mut rng);
        let lam = c(rng.gen_range(-5.0..20.0), rng.gen_range(-3.0..3.0));
        let x0 = rng.gen_range(0.0..1.0);
        let x = x0 + rng.gen_range(1.0..3.0);
        let at = |a: f64| propagate(&p, lam, a, &[x], 1e-12).map(|m| m[0].entries);
        let m0 = at(x0).map_err(err)?;
        let mp = at(x0 + h).map_err(err)?;
        let mm = at(x0 - h).map_err(err)?;
        let dc = (mp[0][0] - mm[0][0]) / (2.0 * h);
        let ds = (mp[0][1] - mm[0][1]) / (2.0 * h);
        let scale = 1.0 + m0[0][0].norm() + (lam - p.eval(x0)).norm() * m0[0][1].norm();
        der = der
            .max((dc - (lam - p.eval(x0)) * m0[0][1]).norm() / scale)
            .max((ds + m0[0][0]).norm() / scale);
    }
    ok &= der < 1e-6;
    parts.push(format!("x0-derivatives {der:.2e}"));

    let ctl = SeriesControl::default();
    let (mut bw, mut res) = (0.0f64, 0.0f64);
    for _ in 0..30 {
        let nu = c(rng.gen_range(-4.0..4.0), rng.gen_range(-1.0..1.0));
        let u = C64::from_polar(rng.gen_range(0.3..6.0), rng.gen_range(-2.5..2.5));
        if (nu - nu.re.round()).norm() > 1e-2 {
            let wr = bessel_j(nu, u, ctl).map_err(err)? * bessel_j_prime(-nu, u, ctl).map_err(err)?
                - bessel_j_prime(nu, u, ctl).map_err(err)? * bessel_j(-nu, u, ctl).map_err(err)?;
            let want = -2.0 * sin_pi(nu) / (PI * u);
            bw = bw.max((wr - want).norm() / want.norm());
        }
        // derivatives through the three-term recurrences
        let j = |d: f64| bessel_j(nu + d, u, ctl);
        let (jm2, jm1, j0, jp1, jp2) = (
            j(-2.0).map_err(err)?,
            j(-1.0).map_err(err)?,
            j(0.0).map_err(err)?,
            j(1.0).map_err(err)?,
            j(2.0).map_err(err)?,
        );
        let d1 = (jm1 - jp1) / 2.0;
        let d2 = (jm2 - 2.0 * j0 + jp2) / 4.0;
        let r = u * u * d2 + u * d1 + (u * u - nu * nu) * j0;
        let scale = (u * u * d2).norm() + (u * d1).norm() + ((u * u).norm() + (nu * nu).norm()) * j0.norm();
        res = res.max(r.norm() / scale);
    }
    ok &= bw < 1e-9 && res < 1e-9;
    parts.push(format!("Bessel wronskian {bw:.2e}, Bessel residual {res:.2e}"));

    let mut green = 0.0f64;
    let mut points = 0;
    while points < 10 {
        let p = random_potential(&mut rng);
        let lam = c(rng.gen_range(-3.0..20.0), rng.gen_range(1.0..5.0));
        let d = discriminant(&p, lam, TOL).map_err(err)?;
        if (d * d - 1.0).norm() < 1e-2 {
            continue;
        }
        let x = rng.gen_range(0.0..PI);
        green = green.max(green_identity_residual(&p, lam, x, TOL).map_err(err)?);
        points += 1;
    }
    ok &= green < 1e-6;
    parts.push(format!("green identity {green:.2e}"));

    ensure(ok, parts.join(", "))
}

// Sign changes of Δ ∓ 1 on a uniform real grid, refined by bisection.
fn scan_band_edges(p: &Potential, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, String> {
    let f = |x: f64, target: f64| theorems::real_axis_discriminant(p, x, TOL).map(|d| d - target);
    let mut roots = Vec::new();
    for target in [1.0, -1.0] {
        let mut a = lo;
        let mut fa = f(a, target).map_err(err)?;
        while a < hi {
            let b = a + step;
            let fb = f(b, target).map_err(err)?;
            if fa * fb < 0.0 {
                let (mut l, mut r, mut fl) = (a, b, fa);
                for _ in 0..60 {
                    let m = 0.5 * (l + r);
                    let fm = f(m, target).map_err(err)?;
                    if fl * fm <= 0.0 {
                        r = m;
                    } else {
                        l = m;
                        fl = fm;
                    }
                }
                roots.push(0.5 * (l + r));
            }
            a = b;
            fa = fb;
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn real_interlacing() -> Outcome {
    let p = Potential::mathieu(1.0);
    let r = theorems::check_interlacing(&p, 0.0, 4, 1e-6, TOL).map_err(err)?;
    let scan = scan_band_edges(&p, -1.0, 17.0, 0.05)?;
    // every edge seen by the scan is a solver edge, and every solver edge
    // brackets a sign change of Δ ∓ 1 within 1e-6
    let seen = scan.iter().all(|s| r.periodic.iter().any(|e| (e - s).abs() < 1e-6));
    let confirmed = r.periodic.iter().all(|&e| {
        let target = if theorems::real_axis_discriminant(&p, e, TOL).unwrap_or(0.0) > 0.0 { 1.0 } else { -1.0 };
        let g = |x: f64| theorems::real_axis_discriminant(&p, x, TOL).map(|d| d - target).unwrap_or(f64::NAN);
        // a double-looking edge pair (narrow gap) may touch without a sign change in ±1e-6
        let (a, b) = (g(e - 1e-6), g(e + 1e-6));
        a * b <= 0.0 || r.periodic.iter().filter(|&&o| (o - e).abs() < 1e-2).count() > 1
    });
    ensure(
        r.passed && seen && confirmed && scan.len() >= 7,
        format!(
            "worst margin {:.3e}, scan found {} edges (all matched: {seen}), solver edges confirmed: {confirmed}",
            r.worst_margin,
            scan.len()
        ),
    )
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "model discriminant identity", budget: Duration::from_secs(30), run: discriminant_identity },
        Criterion { id: 2, name: "ODE vs Bessel endpoint values", budget: Duration::from_secs(60), run: bessel_cross_validation },
        Criterion { id: 3, name: "Dirichlet localization K=1", budget: Duration::from_secs(60), run: dirichlet_localization },
        Criterion { id: 4, name: "Neumann localization K=1", budget: Duration::from_secs(60), run: neumann_localization },
        Criterion { id: 5, name: "trace formula sums K=1", budget: Duration::from_secs(120), run: trace_sums },
        Criterion { id: 6, name: "half-period interleaving", budget: Duration::from_secs(90), run: half_period_interleaving },
        Criterion { id: 7, name: "periodic multiplicities", budget: Duration::from_secs(60), run: multiplicities },
        Criterion { id: 8, name: "PT and reality checks", budget: Duration::from_secs(60), run: symmetry_suite },
        Criterion { id: 9, name: "property suites", budget: Duration::from_secs(60), run: property_suites },
        Criterion { id: 10, name: "real potential interlacing", budget: Duration::from_secs(60), run: real_interlacing },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.iter().any(|f| c.name.contains(f.as_str()) || f == &c.id.to_string())) {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > c.budget;
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget {:?}", c.budget)),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{:.1}s] {}: {detail}", c.id, elapsed.as_secs_f64(), c.name);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
