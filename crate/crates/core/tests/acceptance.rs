//! Acceptance checks A1..A13. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; the process fails if any criterion
//! outside `EXPECTED_FAIL` fails, or if one inside it starts passing.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use unf_core::homoclinic::{
    classify_wu_fate, find_alpha_k, find_lambda0, split_function_k, symbolic_sequence, FateKind,
    Orientation,
};
use unf_core::lyapunov::{default_initial_state, largest_lyapunov, LyapunovConfig};
use unf_core::manifolds::{
    aux_separatrix_x0, riccati_tau, shoot_unstable, stable_curve, wu_seed, DEFAULT_DELTA,
};
use unf_core::model::{
    characteristic_a, gl_vector_field, hopf_threshold, map_p, map_v, map_v_inverse,
    saddle_spectrum, unf_vector_field,
};
use unf_core::ode::integrate;
use unf_core::sweep::{sweep_grid, Axis, SweepGrid};
use unf_core::{unf_field, Error, GlParams, IntegratorConfig, State, UnfParams};

/// Criteria whose golden values cannot be met; they are reported and must keep failing.
/// A1: the Chen goldens for beta and A are not the image of (35, 3, -7, -28);
/// the exact values are 67/sqrt(735) = 2.471329 and 35/sqrt(735) = 1.290994.
/// A9: the bound |x^s| < x^s_0 fails on high sheets of W^s for some triples.
/// Nudging such a sample by 1e-6 either way sends the orbit past O to
/// opposite sides, so the point is on W^s and the bound itself does not hold.
const EXPECTED_FAIL: &[&str] = &["A1", "A9"];

const LORENZ: (f64, f64, f64) = (0.6694, 0.1623, 1.05487);
const CHEN: (f64, f64, f64) = (0.26, 0.11, 2.47);

fn up(t: (f64, f64, f64)) -> UnfParams {
    UnfParams::new(t.0, t.1, t.2).unwrap()
}

fn cfg() -> IntegratorConfig {
    IntegratorConfig::default()
}

/// Outcome of one criterion: sub-checks as (description, ok).
#[derive(Default)]
struct Report(Vec<(String, bool)>);

impl Report {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.0.push((what.into(), ok));
    }

    fn ok(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|(_, ok)| *ok)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---------------------------------------------------------------------------

fn a1(r: &mut Report) {
    let tol = 1e-4;
    let p = map_p(&GlParams::lorenz(10.0, 8.0 / 3.0, 28.0)).unwrap();
    let a = characteristic_a(&p);
    for (name, got, want) in [
        ("lambda", p.lambda, 0.66938),
        ("alpha", p.alpha, 0.16233),
        ("beta", p.beta, 1.05487),
        ("A", a, 0.60860),
    ] {
        r.check(
            close(got, want, tol),
            format!("lorenz {name} {got:.6} vs {want} (tol {tol})"),
        );
    }
    let p = map_p(&GlParams::new(35.0, 3.0, -7.0, -28.0)).unwrap();
    let a = characteristic_a(&p);
    for (name, got, want) in [
        ("lambda", p.lambda, 0.25820),
        ("alpha", p.alpha, 0.11068),
        ("beta", p.beta, 2.47186),
        ("A", a, 1.29127),
    ] {
        r.check(
            close(got, want, tol),
            format!("chen {name} {got:.6} vs {want} (tol {tol})"),
        );
    }
    let s = 735f64.sqrt();
    r.check(close(p.beta, 67.0 / s, 1e-14), "chen beta = 67/sqrt(735)");
    let dev = (p.lambda - (a * a - 1.0) / (2.0 * a)).abs();
    r.check(
        dev < 1e-10,
        format!("chen curve identity |dev| = {dev:.1e} (tol 1e-10)"),
    );
}

/// `d V / d t` applied to a vector, written out by hand.
fn dv(g: &GlParams, s: &State, v: &State) -> State {
    let w = 1.0 / (g.a * (g.r - g.q)).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    State::new(
        w * h * v.x,
        w * w * g.a * h * (v.y - v.x),
        w * w * (g.a * v.z - s.x * v.x),
    )
}

fn a2(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(2);
    for (name, g) in [
        ("lorenz", GlParams::lorenz(10.0, 8.0 / 3.0, 28.0)),
        ("chen", GlParams::chen(35.0, 3.0, 28.0)),
    ] {
        let p = map_p(&g).unwrap();
        let w = g.omega().unwrap();
        let (mut push, mut trip) = (0f64, 0f64);
        for _ in 0..100 {
            let s = State::new(
                rng.gen_range(-20.0..20.0),
                rng.gen_range(-20.0..20.0),
                rng.gen_range(0.0..50.0),
            );
            let (u, _) = map_v(&g, &s, 0.0).unwrap();
            // time in the normal form runs 1/omega times faster
            let lhs = dv(&g, &s, &gl_vector_field(&g, &s)) * w;
            let rhs = unf_vector_field(&p, &u);
            push = push.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            let (back, t) = map_v_inverse(&g, &u, 1.0 / w).unwrap();
            trip = trip
                .max(back.dist(&s) / (1.0 + s.norm()))
                .max((t - 1.0).abs());
        }
        r.check(
            push < 1e-9,
            format!("{name} pushforward residual {push:.1e} (tol 1e-9)"),
        );
        r.check(
            trip < 1e-12,
            format!("{name} round trip {trip:.1e} (tol 1e-12)"),
        );
    }
}

/// Real part of the complex pair of a monic cubic `x^3 + c2 x^2 + c1 x + c0`,
/// or `None` when all roots are real.
fn complex_pair_re(c2: f64, c1: f64, c0: f64) -> Option<f64> {
    let f = |x: f64| ((x + c2) * x + c1) * x + c0;
    let df = |x: f64| (3.0 * x + 2.0 * c2) * x + c1;
    // the real root: bisection to bracket, Newton to polish
    let (mut lo, mut hi) = (-1e3, 1e3);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m) * f(lo) <= 0.0 {
            hi = m
        } else {
            lo = m
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..5 {
        x -= f(x) / df(x);
    }
    // deflate: x^2 + b x + c
    let b = c2 + x;
    let c = c1 + b * x;
    if b * b - 4.0 * c < 0.0 {
        Some(-0.5 * b)
    } else {
        None
    }
}

fn a3(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let l: f64 = rng.gen_range(0.0..10.0);
        let s = saddle_spectrum(&UnfParams::new(l, 0.5, 1.0).unwrap());
        worst = worst.max((s.e1 * s.e2 + 1.0).abs());
    }
    r.check(
        worst < 1e-12,
        format!("max |e1 e2 + 1| = {worst:.1e} (tol 1e-12)"),
    );

    let mut worst = 0f64;
    let mut complex = true;
    for _ in 0..50 {
        let (al, be): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.1..3.0));
        let l = hopf_threshold(al, be).unwrap();
        // Jacobian at E+: x^2 = al/(al+be), z = be/(al+be)
        let x2 = al / (al + be);
        let (x, z) = (x2.sqrt(), be / (al + be));
        let j21 = -(3.0 * x2 + z - 1.0);
        let (j23, j31) = (-x, 2.0 * be * x);
        // det(mu I - J) = mu^3 + c2 mu^2 + c1 mu + c0
        let c2 = l + al;
        let c1 = l * al - j21;
        let c0 = -al * j21 - j23 * j31;
        match complex_pair_re(c2, c1, c0) {
            Some(re) => worst = worst.max(re.abs()),
            None => complex = false,
        }
    }
    r.check(complex, "E+ has a complex pair at every threshold");
    r.check(
        worst < 1e-7,
        format!("max |Re| at threshold = {worst:.1e} (tol 1e-7)"),
    );
}

fn a4(r: &mut Report) {
    match find_lambda0(0.314, 1.05487, (0.6, 0.9), 1e-6, &cfg()) {
        Ok(b) => {
            let l = b.params.lambda;
            r.check(
                (0.7406..=0.7506).contains(&l),
                format!("lambda_0 = {l:.6} in [0.7406, 0.7506]"),
            );
            r.check(
                b.orientation == Orientation::Oriented,
                format!("orientation {:?}", b.orientation),
            );
        }
        Err(e) => r.check(false, format!("find_lambda0: {e}")),
    }
}

fn a5(r: &mut Report) {
    match find_alpha_k(0.6296, 2.47, 1, (0.15, 0.22), 1e-6, &cfg()) {
        Ok(b) => {
            let a = b.params.alpha;
            r.check(
                (0.179..=0.189).contains(&a),
                format!("alpha_1 = {a:.6} in [0.179, 0.189]"),
            );
            r.check(
                b.orientation == Orientation::NonOriented,
                format!("orientation {:?}", b.orientation),
            );
            r.check(b.half_turns == 1, format!("half_turns = {}", b.half_turns));
        }
        Err(e) => r.check(false, format!("find_alpha_k: {e}")),
    }
}

fn a6(r: &mut Report) {
    // the sheet index of the root near alpha = 0.04, fixed after the first computation
    const K: u32 = 11;
    const ALPHA_K: f64 = 0.040441;
    match find_alpha_k(0.3, 2.47, K, (0.035, 0.045), 1e-7, &cfg()) {
        Ok(b) => {
            let a = b.params.alpha;
            r.check(
                b.half_turns >= 2,
                format!("half_turns = {} (>= 2)", b.half_turns),
            );
            r.check(
                a > 0.02 && a < 0.08,
                format!("alpha_{K} = {a:.6} in (0.02, 0.08)"),
            );
            r.check(
                close(a, ALPHA_K, 1e-5),
                format!("alpha_{K} vs recorded {ALPHA_K} (tol 1e-5)"),
            );
        }
        Err(e) => r.check(false, format!("find_alpha_k(k={K}): {e}")),
    }
}

fn a7(r: &mut Report) {
    let (alpha, beta) = (0.35, 1.05487);
    let delta = |l: f64| split_function_k(&UnfParams::new(l, alpha, beta).unwrap(), 0, &cfg());
    match delta(2.0) {
        Ok(s) => r.check(s.delta < 0.0, format!("Delta_0(2) = {:.4} < 0", s.delta)),
        Err(e) => r.check(false, format!("Delta_0(2): {e}")),
    }
    match delta(0.02) {
        Ok(s) => r.check(s.delta > 0.0, format!("Delta_0(0.02) = {:.4} > 0", s.delta)),
        Err(Error::FateInterference { fate, .. }) if fate.kind == FateKind::Diverged => {
            r.check(true, "Delta_0(0.02): W^u diverges")
        }
        Err(e) => r.check(false, format!("Delta_0(0.02): {e}")),
    }
    // scan down from lambda = 2 for the first sign change, then bisect
    let grid: Vec<f64> = (0..=50)
        .map(|i| 2.0 - (2.0 - 0.02) * i as f64 / 50.0)
        .collect();
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for &l in &grid {
        if let Ok(s) = delta(l) {
            if let Some((lp, dp)) = prev {
                if dp < 0.0 && s.delta > 0.0 {
                    bracket = Some((l, lp));
                    break;
                }
            }
            prev = Some((l, s.delta));
        }
    }
    match bracket {
        Some(br) => match find_lambda0(alpha, beta, br, 1e-6, &cfg()) {
            Ok(b) => r.check(
                b.params.lambda > 0.02 && b.params.lambda < 2.0,
                format!(
                    "sign change in {br:.3?}, root lambda = {:.6}",
                    b.params.lambda
                ),
            ),
            Err(e) => r.check(false, format!("bisection in {br:?}: {e}")),
        },
        None => r.check(false, "no sign change found between 2 and 0.02"),
    }
}

fn a8(r: &mut Report) {
    let p = UnfParams::new(0.0, 0.2, 1.0).unwrap();
    let c = cfg().with_t_max(500.0);
    match integrate(unf_field(p), wu_seed(&p, DEFAULT_DELTA), 500.0, None, &c) {
        Err(Error::Escaped { t, .. }) => r.check(t < 500.0, format!("escaped at t = {t:.1}")),
        Err(e) => r.check(false, format!("integration: {e}")),
        Ok(_) => r.check(false, "W^u stayed bounded up to t = 500"),
    }
    match classify_wu_fate(&p, true, &c) {
        Ok(f) => r.check(f.kind == FateKind::Diverged, format!("fate {:?}", f.kind)),
        Err(e) => r.check(false, format!("fate: {e}")),
    }
}

fn random_triple(rng: &mut StdRng) -> UnfParams {
    UnfParams::new(
        rng.gen_range(0.1..1.5),
        rng.gen_range(0.02..1.0),
        rng.gen_range(0.2..3.0),
    )
    .unwrap()
}

fn a9(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut hits, mut bad, mut errors) = (0, 0, Vec::new());
    for _ in 0..50 {
        let p = random_triple(&mut rng);
        match shoot_unstable(&p, DEFAULT_DELTA, &cfg()) {
            Ok(h) => {
                hits += 1;
                let ok = h.x_u > 0.0
                    && h.x_u < 2f64.sqrt()
                    && h.z_u > 0.0
                    && h.z_u < 2.0 * p.beta / p.alpha;
                if !ok {
                    bad += 1;
                }
            }
            Err(Error::Escaped { .. } | Error::ConvergedToFocus { .. }) => {}
            Err(e) => errors.push(format!("{p:?}: {e}")),
        }
    }
    r.check(
        bad == 0 && errors.is_empty() && hits > 0,
        format!("0 < x_u < sqrt 2, 0 < z_u < 2 beta/alpha: {hits} hits, {bad} violations, {} errors {errors:?}", errors.len()),
    );

    let (mut samples, mut bad, mut errors) = (0, 0, Vec::new());
    let mut worst = (0.0, 0.0, None);
    let c = cfg().with_t_max(1e3);
    for _ in 0..50 {
        let p = random_triple(&mut rng);
        let bound = aux_separatrix_x0(p.lambda, &c).unwrap();
        // default range: up to just below the ladder limit
        match stable_curve(&p, 1e-6, (0.05, f64::MAX), 8, &c) {
            Ok(curve) => {
                samples += curve.samples.len();
                for &(z, x) in &curve.samples {
                    let ratio = x.abs() / bound;
                    if ratio >= 1.0 {
                        bad += 1;
                    }
                    if ratio > worst.0 {
                        worst = (ratio, z, Some(p));
                    }
                }
            }
            Err(e) => errors.push(format!("{p:?}: {e}")),
        }
    }
    r.check(
        bad == 0 && errors.is_empty() && samples > 0,
        format!(
            "|x^s| < x^s_0: {samples} samples, {bad} violations, {} errors; worst |x^s|/x^s_0 = {:.3} at z = {:.2}, {:?}",
            errors.len(),
            worst.0,
            worst.1,
            worst.2
        ),
    );
}

fn a10(r: &mut Report) {
    let p = up(CHEN);
    let ladder = riccati_tau(&p, 6).unwrap();
    let z = &ladder.zk;
    // sample up to just past the fourth sheet
    let z_hi = z[3] + 0.5 * (z[4] - z[3]);
    match stable_curve(&p, 1e-6, (0.05, z_hi), 60, &cfg().with_t_max(1e3)) {
        Ok(curve) => {
            r.check(
                curve.zero_ladder.len() >= 4,
                format!(
                    "{} zeros found below z = {z_hi:.3}",
                    curve.zero_ladder.len()
                ),
            );
            for (k, (zs, zr)) in curve.zero_ladder.iter().zip(z).take(4).enumerate() {
                let tol = 5e-3 * (1.0 + zr);
                r.check(
                    close(*zs, *zr, tol),
                    format!(
                        "k={} stable {zs:.6} vs riccati {zr:.6} (tol {tol:.1e})",
                        k + 1
                    ),
                );
            }
        }
        Err(e) => r.check(false, format!("stable_curve: {e}")),
    }
}

/// Largest Lyapunov exponent of the classical Lorenz system, by RK4 and
/// Benettin renormalization in its own coordinates and time.
fn lorenz_benettin(t_transient: f64, t_total: f64) -> f64 {
    let (sg, b, rr) = (10.0, 8.0 / 3.0, 28.0);
    let f = |u: &[f64; 6]| -> [f64; 6] {
        let (x, y, z, dx, dy, dz) = (u[0], u[1], u[2], u[3], u[4], u[5]);
        [
            sg * (y - x),
            x * (rr - z) - y,
            x * y - b * z,
            sg * (dy - dx),
            (rr - z) * dx - dy - x * dz,
            y * dx + x * dy - b * dz,
        ]
    };
    let h = 2e-3;
    let mut u = [1.0, 1.0, 20.0, 1.0, 0.0, 0.0];
    let (mut t, mut sum) = (0.0, 0.0);
    let steps_per_renorm = 50;
    let mut k = 0;
    while t < t_total {
        let k1 = f(&u);
        let add = |a: &[f64; 6], b: &[f64; 6], s: f64| {
            std::array::from_fn::<f64, 6, _>(|i| a[i] + s * b[i])
        };
        let k2 = f(&add(&u, &k1, 0.5 * h));
        let k3 = f(&add(&u, &k2, 0.5 * h));
        let k4 = f(&add(&u, &k3, h));
        for i in 0..6 {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        k += 1;
        if k % steps_per_renorm == 0 {
            let n = (u[3] * u[3] + u[4] * u[4] + u[5] * u[5]).sqrt();
            if t > t_transient {
                sum += n.ln();
            }
            for v in &mut u[3..] {
                *v /= n;
            }
        }
    }
    sum / (t - t_transient)
}

fn a11(r: &mut Report) {
    let lc = LyapunovConfig::default();
    for (name, t, positive) in [
        ("(0.7634, 0.35)", (0.7634, 0.35, 1.05487), false),
        ("lorenz", LORENZ, true),
        ("chen", CHEN, true),
    ] {
        let p = up(t);
        match largest_lyapunov(&p, default_initial_state(&p), &lc) {
            Ok(res) => {
                let ok = if positive {
                    res.lambda > 0.0
                } else {
                    res.lambda < 0.0
                };
                let sign = if positive { '>' } else { '<' };
                r.check(
                    ok && !res.diverged,
                    format!("{name}: Lambda = {:.4} {sign} 0", res.lambda),
                );
            }
            Err(e) => r.check(false, format!("{name}: {e}")),
        }
    }
    // exact image of the classical point, with a horizon long enough to average well
    let g = GlParams::lorenz(10.0, 8.0 / 3.0, 28.0);
    let p = map_p(&g).unwrap();
    let long = LyapunovConfig {
        t_transient: 500.0,
        t_total: 40_000.0,
        ..lc
    };
    let oracle = g.omega().unwrap() * lorenz_benettin(50.0, 2000.0);
    match largest_lyapunov(&p, default_initial_state(&p), &long) {
        Ok(res) => {
            let rel = (res.lambda - oracle).abs() / oracle;
            r.check(
                rel < 0.2,
                format!(
                    "Lambda = {:.5} vs omega-scaled Lorenz {oracle:.5}: rel {rel:.3} (tol 0.2)",
                    res.lambda
                ),
            );
        }
        Err(e) => r.check(false, format!("long run: {e}")),
    }
}

fn a12_grid(workers: usize) -> (SweepGrid, Vec<u8>) {
    let g = sweep_grid(
        1.05487,
        Axis::new(0.05, 0.45, 40).unwrap(),
        Axis::new(0.55, 0.85, 40).unwrap(),
        workers,
        &LyapunovConfig::default(),
    )
    .unwrap();
    let mut bytes = Vec::new();
    g.write_csv(&mut bytes).unwrap();
    (g, bytes)
}

fn a12(r: &mut Report) {
    let (grid, bytes) = a12_grid(4);
    let class_at = |i: usize, j: usize| grid.cell(i, j).code();
    let index = |alpha: f64, lambda: f64| {
        (
            grid.alpha_axis.nearest(alpha),
            grid.lambda_axis.nearest(lambda),
        )
    };

    let (i, j) = index(0.35, 0.7634);
    r.check(
        class_at(i, j) == 'E',
        format!("(0.35, 0.7634) stable foci: class {}", class_at(i, j)),
    );
    let (i, j) = index(0.314, 0.74564);
    r.check(
        class_at(i, j) != 'C',
        format!(
            "(0.314, 0.74564) first butterfly, no attractor yet: class {}",
            class_at(i, j)
        ),
    );
    // the heteroclinic anchor sits on the border of the chaotic region
    let (i, j) = index(0.2005, 0.6865);
    let mut around = Vec::new();
    for di in -1i64..=1 {
        for dj in -1i64..=1 {
            let (a, b) = (i as i64 + di, j as i64 + dj);
            if a >= 0
                && b >= 0
                && (a as usize) < grid.alpha_axis.n
                && (b as usize) < grid.lambda_axis.n
            {
                around.push(class_at(a as usize, b as usize));
            }
        }
    }
    let border = around.contains(&'C') && around.iter().any(|&c| c != 'C');
    r.check(
        border,
        format!(
            "(0.2005, 0.6865) on the chaos border: neighbourhood {}",
            around.iter().collect::<String>()
        ),
    );
    let (i, j) = index(0.162, 0.6694);
    r.check(
        class_at(i, j) == 'C',
        format!("(0.162, 0.6694) Lorenz attractor: class {}", class_at(i, j)),
    );

    let (_, serial) = a12_grid(1);
    r.check(serial == bytes, "CSV bytes identical for 1 and 4 workers");
}

fn a13(r: &mut Report) {
    // loops around one focus can take long; allow a generous gap between symbols
    let c = cfg().with_t_max(1e5);
    for (name, t, twisted) in [("lorenz", LORENZ, false), ("chen", CHEN, true)] {
        let p = up(t);
        match symbolic_sequence(&p, wu_seed(&p, DEFAULT_DELTA), 500, &c) {
            Ok(syms) => {
                let max = syms.iter().map(|s| s.half_turns).max().unwrap_or(0);
                let twisted_count = syms.iter().filter(|s| s.half_turns >= 1).count();
                let ok = syms.len() == 500
                    && if twisted {
                        twisted_count >= 1
                    } else {
                        max == 0
                    };
                r.check(
                    ok,
                    format!(
                        "{name}: {} symbols, {twisted_count} with half_turns >= 1, max {max}",
                        syms.len()
                    ),
                );
            }
            Err(e) => r.check(false, format!("{name}: {e}")),
        }
    }
}

fn main() {
    type Criterion = (&'static str, fn(&mut Report));
    let criteria: [Criterion; 13] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
        ("A11", a11),
        ("A12", a12),
        ("A13", a13),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let t0 = Instant::now();
        let mut r = Report::default();
        run(&mut r);
        let ok = r.ok();
        let expected_fail = EXPECTED_FAIL.contains(&id);
        let tag = match (ok, expected_fail) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{id:<4} {tag} [{:.1} s]", t0.elapsed().as_secs_f64());
        for (what, ok) in &r.0 {
            println!("       {} {what}", if *ok { "ok  " } else { "FAIL" });
        }
        if ok == expected_fail {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for {unexpected:?}");
        std::process::exit(1);
    }
}
