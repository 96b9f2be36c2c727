mod args;
mod output;

use std::fs;
use std::io;
use std::process::ExitCode;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use unf_core::homoclinic::{
    find_alpha_k, find_lambda_k, split_function, split_function_k, symbolic_sequence,
    write_symbols_csv, BifurcationPoint, SplitResult, Symbol,
};
use unf_core::lyapunov::{
    classify_attractor, default_initial_state, largest_lyapunov, AttractorClass, LyapunovResult,
};
use unf_core::manifolds::{
    domains_b, riccati_tau, shoot_unstable, stable_curve, wu_seed, DomainB, RiccatiLadder,
    StableCurve, UnstableHit, DEFAULT_DELTA,
};
use unf_core::model::{characteristic_a, classify_region, map_p, RegionLabel};
use unf_core::ode::{fmt17, integrate, Trajectory};
use unf_core::sweep::{sweep_grid, trace_curve, Axis, CurveTrace, SweepGrid, TraceConfig};
use unf_core::{unf_field, GlParams, State, UnfParams};

use args::{Cli, Command, Family, Global, ManifoldKind};
use output::{read_document, write_out, Output};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] unf_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) => 3,
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Serialize, Deserialize)]
struct MapParamsOut {
    gl: GlParams,
    params: UnfParams,
    omega: f64,
    #[serde(rename = "A")]
    a: f64,
    region: RegionLabel,
}

#[derive(Debug, Serialize, Deserialize)]
struct LyapunovOut {
    params: UnfParams,
    result: LyapunovResult,
    /// Absent when the run did not converge.
    class: Option<AttractorClass>,
}

fn table(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

fn map_params(
    family: Option<Family>,
    a: f64,
    b: f64,
    r: Option<f64>,
    c: Option<f64>,
    q: Option<f64>,
    tol: f64,
) -> CliResult<Output> {
    let need_c = || c.ok_or_else(|| usage("--c is required for this family"));
    let gl = match family {
        Some(Family::Lorenz) => GlParams::lorenz(
            a,
            b,
            r.ok_or_else(|| usage("--r is required for the Lorenz family"))?,
        ),
        Some(Family::Chen) => GlParams::chen(a, b, need_c()?),
        Some(Family::Lu) => GlParams::lu(a, b, need_c()?),
        Some(Family::Tigan) => GlParams::tigan(a, b, need_c()?),
        None => match (r, q) {
            (Some(r), Some(q)) => GlParams::new(a, b, r, q),
            _ => return Err(usage("give --family, or --r and --q for a generic system")),
        },
    };
    let params = map_p(&gl)?;
    let out = MapParamsOut {
        gl,
        params,
        omega: gl.omega()?,
        a: characteristic_a(&params),
        region: classify_region(&params, tol),
    };
    Ok(Output::new("map-params", &out)?)
}

#[allow(clippy::too_many_arguments)]
fn manifold(
    g: &Global,
    p: &UnfParams,
    kind: ManifoldKind,
    delta: f64,
    eps: f64,
    z_range: (f64, Option<f64>),
    n: usize,
    k_max: usize,
) -> CliResult<Output> {
    let cfg = g.integrator();
    Ok(match kind {
        ManifoldKind::Unstable => Output::new("unstable-hit", &shoot_unstable(p, delta, &cfg)?)?,
        ManifoldKind::Stable => {
            let z_hi = match z_range.1 {
                Some(z) => z,
                None => {
                    let z_star = riccati_tau(p, k_max)?.z_star;
                    z_range.0 + 0.95 * (z_star - z_range.0)
                }
            };
            let mut cfg = cfg;
            cfg.t_max = cfg.t_max.max(1e3);
            let curve = stable_curve(p, eps, (z_range.0, z_hi), n, &cfg)?;
            let t = table(|w| curve.write_csv(w))?;
            Output::new("stable-curve", &curve)?.with_table(t)
        }
        ManifoldKind::Riccati => {
            let ladder = riccati_tau(p, k_max)?;
            let t = table(|w| ladder.write_csv(w))?;
            Output::new("riccati-ladder", &ladder)?.with_table(t)
        }
        ManifoldKind::Domains => {
            let doms = domains_b(p, k_max)?;
            let t = table(|w| {
                use std::io::Write;
                writeln!(w, "k,z_lo,z_hi,half_turns,skirt")?;
                for d in &doms {
                    writeln!(
                        w,
                        "{},{},{},{},{}",
                        d.k,
                        fmt17(d.z_lo),
                        fmt17(d.z_hi),
                        d.half_turns,
                        d.skirt
                    )?;
                }
                Ok(())
            })?;
            Output::new("domains", &doms)?.with_table(t)
        }
    })
}

/// Re-serialize `data` through its typed form.
fn canonical<T: Serialize + DeserializeOwned>(data: Value) -> serde_json::Result<Value> {
    let typed: T = serde_json::from_value(data)?;
    serde_json::to_value(typed)
}

fn check(path: &std::path::Path) -> CliResult<Output> {
    let text = fs::read_to_string(path)?;
    let (kind, data) = read_document(&text).map_err(CliError::Usage)?;
    let data = match kind.as_str() {
        "map-params" => canonical::<MapParamsOut>(data)?,
        "trajectory" => canonical::<Trajectory>(data)?,
        "unstable-hit" => canonical::<UnstableHit>(data)?,
        "stable-curve" => canonical::<StableCurve>(data)?,
        "riccati-ladder" => canonical::<RiccatiLadder>(data)?,
        "domains" => canonical::<Vec<DomainB>>(data)?,
        "split" => canonical::<SplitResult>(data)?,
        "bifurcation-point" => canonical::<BifurcationPoint>(data)?,
        "lyapunov" => canonical::<LyapunovOut>(data)?,
        "sweep-grid" => canonical::<SweepGrid>(data)?,
        "curve-trace" => canonical::<CurveTrace>(data)?,
        "symbols" => canonical::<Vec<Symbol>>(data)?,
        other => return Err(CliError::Usage(format!("unknown document kind {other:?}"))),
    };
    Ok(Output {
        kind,
        data,
        table: None,
    })
}

fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    let cfg = g.integrator();
    cfg.validate()?;
    let out = match &cli.cmd {
        Command::MapParams {
            family,
            a,
            b,
            r,
            c,
            q,
            tol,
        } => map_params(*family, *a, *b, *r, *c, *q, *tol)?,
        Command::Integrate {
            point,
            start,
            t_span,
            dt,
        } => {
            let p = point.params()?;
            let s0 = match start.as_deref() {
                Some([x, y, z]) => State::new(*x, *y, *z),
                Some(_) => return Err(usage("--start takes three values")),
                None => wu_seed(&p, DEFAULT_DELTA),
            };
            let tr = integrate(unf_field(p), s0, *t_span, *dt, &cfg)?;
            let t = table(|w| tr.write_csv(w))?;
            Output::new("trajectory", &tr)?.with_table(t)
        }
        Command::Manifold {
            point,
            kind,
            delta,
            eps,
            z_lo,
            z_hi,
            n,
            k_max,
        } => manifold(
            g,
            &point.params()?,
            *kind,
            *delta,
            *eps,
            (*z_lo, *z_hi),
            *n,
            *k_max,
        )?,
        Command::Split { point, k } => {
            let p = point.params()?;
            let r = match k {
                Some(k) => split_function_k(&p, *k, &cfg)?,
                None => split_function(&p, &cfg)?,
            };
            Output::new("split", &r)?
        }
        Command::FindHomoclinic {
            beta,
            k,
            alpha,
            lambda_lo,
            lambda_hi,
            lambda,
            alpha_lo,
            alpha_hi,
            tol,
        } => {
            let bp = match (alpha, lambda) {
                (Some(a), None) => {
                    let br = (lambda_lo.unwrap_or_default(), lambda_hi.unwrap_or_default());
                    find_lambda_k(*a, *beta, *k, br, *tol, &cfg)?
                }
                (None, Some(l)) => {
                    let br = (alpha_lo.unwrap_or_default(), alpha_hi.unwrap_or_default());
                    find_alpha_k(*l, *beta, *k, br, *tol, &cfg)?
                }
                _ => {
                    return Err(usage(
                        "give --alpha with a lambda bracket, or --lambda with an alpha bracket",
                    ))
                }
            };
            Output::new("bifurcation-point", &bp)?
        }
        Command::Lyapunov {
            point,
            lyap,
            eps_zero,
        } => {
            let p = point.params()?;
            let result = largest_lyapunov(&p, default_initial_state(&p), &lyap.config(cfg))?;
            let class = classify_attractor(&result, *eps_zero).ok();
            Output::new(
                "lyapunov",
                &LyapunovOut {
                    params: p,
                    result,
                    class,
                },
            )?
        }
        Command::Sweep {
            beta,
            alpha_lo,
            alpha_hi,
            n_alpha,
            lambda_lo,
            lambda_hi,
            n_lambda,
            lyap,
            overlay,
        } => {
            let grid = sweep_grid(
                *beta,
                Axis::new(*alpha_lo, *alpha_hi, *n_alpha)?,
                Axis::new(*lambda_lo, *lambda_hi, *n_lambda)?,
                g.workers(),
                &lyap.config(cfg),
            )?;
            if let Some(path) = overlay {
                write_out(Some(path), &table(|w| grid.write_overlay_csv(w))?)?;
            }
            let t = table(|w| grid.write_csv(w))?;
            Output::new("sweep-grid", &grid)?.with_table(t)
        }
        Command::Trace {
            beta,
            k,
            alpha_lo,
            alpha_hi,
            n,
            lambda_lo,
            lambda_hi,
            scan_points,
            tol,
        } => {
            let tcfg = TraceConfig {
                lambda_window: (*lambda_lo, *lambda_hi),
                scan_points: *scan_points,
                tol: *tol,
                workers: g.workers(),
                integrator: cfg,
            };
            let tr = trace_curve(*beta, *k, Axis::new(*alpha_lo, *alpha_hi, *n)?, &tcfg)?;
            let t = table(|w| tr.write_csv(w))?;
            Output::new("curve-trace", &tr)?.with_table(t)
        }
        Command::Symbols { point, n, gap } => {
            let p = point.params()?;
            let syms =
                symbolic_sequence(&p, wu_seed(&p, DEFAULT_DELTA), *n, &cfg.with_t_max(*gap))?;
            let t = table(|w| write_symbols_csv(&syms, w))?;
            Output::new("symbols", &syms)?.with_table(t)
        }
        Command::Check { input } => check(input)?,
    };
    write_out(g.out.as_deref(), &out.render(g.format))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
