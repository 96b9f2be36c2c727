//! Parameter-plane sweeps at fixed `beta`: Lyapunov grids and homoclinic curve traces.
//!
//! Work is split into contiguous blocks, one per thread, and gathered in index
//! order, so every output is independent of the number of workers.

use std::io::{BufRead, Write};
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homoclinic::{find_lambda_k, split_side};
use crate::lyapunov::{
    classify_attractor, default_initial_state, largest_lyapunov, AttractorClass, LyapunovConfig,
    DEFAULT_EPS_ZERO,
};
use crate::model::{characteristic_a, hopf_threshold, UnfParams};
use crate::ode::{fmt17, IntegratorConfig};

/// Number of worker threads when the caller does not say.
pub fn default_workers() -> usize {
    thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// `f(0..n)` evaluated on `workers` threads over contiguous blocks, gathered in index order.
pub fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(&f).collect();
    }
    let block = n.div_ceil(workers);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * block).min(n);
                let hi = ((w + 1) * block).min(n);
                s.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Inclusive linspace `lo..=hi` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let ok = lo.is_finite() && hi.is_finite() && ((n >= 2 && lo < hi) || (n == 1 && lo == hi));
        if !ok {
            return Err(Error::InvalidInput(format!("bad axis {lo}:{hi}:{n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.n == 1 {
            self.lo
        } else if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    /// Index of the grid value closest to `v`.
    pub fn nearest(&self, v: f64) -> usize {
        if self.n == 1 {
            return 0;
        }
        let s = (v - self.lo) / (self.hi - self.lo) * (self.n - 1) as f64;
        s.round().clamp(0.0, (self.n - 1) as f64) as usize
    }

    fn descriptor(&self) -> String {
        format!("{}:{}:{}", fmt17(self.lo), fmt17(self.hi), self.n)
    }

    fn parse(s: &str) -> Option<Self> {
        let mut it = s.split(':');
        let lo = it.next()?.parse().ok()?;
        let hi = it.next()?.parse().ok()?;
        let n = it.next()?.parse().ok()?;
        Axis::new(lo, hi, n).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub alpha: f64,
    pub lambda: f64,
    /// Largest exponent; NaN when the cell failed.
    #[serde(rename = "Lambda", with = "crate::serde_f64")]
    pub exponent: f64,
    /// `None` when the computation or its classification failed.
    pub class: Option<AttractorClass>,
}

impl Cell {
    pub fn code(&self) -> char {
        self.class.map_or('X', AttractorClass::code)
    }
}

/// Analytic curves drawn over a grid column: the Tigan line `lambda = A` and
/// the Hopf threshold of `E+-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnOverlay {
    pub alpha: f64,
    pub tigan: f64,
    #[serde(with = "crate::serde_f64")]
    pub hopf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub beta: f64,
    pub alpha_axis: Axis,
    pub lambda_axis: Axis,
    /// Row-major with `lambda` as the row: index `i_lambda * n_alpha + i_alpha`.
    pub cells: Vec<Cell>,
    pub overlays: Vec<ColumnOverlay>,
}

impl SweepGrid {
    pub fn cell(&self, i_alpha: usize, i_lambda: usize) -> &Cell {
        &self.cells[i_lambda * self.alpha_axis.n + i_alpha]
    }

    /// Cell whose grid point is closest to `(alpha, lambda)`.
    pub fn nearest(&self, alpha: f64, lambda: f64) -> &Cell {
        self.cell(
            self.alpha_axis.nearest(alpha),
            self.lambda_axis.nearest(lambda),
        )
    }

    pub fn header(&self) -> String {
        format!(
            "# unf-sweep v1; beta={}; alpha={}; lambda={}",
            fmt17(self.beta),
            self.alpha_axis.descriptor(),
            self.lambda_axis.descriptor()
        )
    }

    /// Header comment, column line `alpha,lambda,Lambda,class`, one row per cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header())?;
        writeln!(w, "alpha,lambda,Lambda,class")?;
        for c in &self.cells {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(c.alpha),
                fmt17(c.lambda),
                fmt17(c.exponent),
                c.code()
            )?;
        }
        Ok(())
    }

    /// Columns `alpha,tigan,hopf`.
    pub fn write_overlay_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "alpha,tigan,hopf")?;
        for o in &self.overlays {
            writeln!(w, "{},{},{}", fmt17(o.alpha), fmt17(o.tigan), fmt17(o.hopf))?;
        }
        Ok(())
    }

    /// Parse a file written by [`SweepGrid::write_csv`]; overlays are recomputed.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("sweep csv: {m}"));
        let mut lines = r.lines().map(|l| l.map_err(|e| bad(&e.to_string())));
        let header = lines.next().ok_or_else(|| bad("empty file"))??;
        let rest = header
            .strip_prefix("# unf-sweep v1; ")
            .ok_or_else(|| bad("missing v1 header"))?;
        let mut beta = None;
        let mut alpha_axis = None;
        let mut lambda_axis = None;
        for part in rest.split("; ") {
            match part.split_once('=') {
                Some(("beta", v)) => beta = v.parse::<f64>().ok(),
                Some(("alpha", v)) => alpha_axis = Axis::parse(v),
                Some(("lambda", v)) => lambda_axis = Axis::parse(v),
                _ => return Err(bad(&format!("unknown header field {part:?}"))),
            }
        }
        let (beta, alpha_axis, lambda_axis) = match (beta, alpha_axis, lambda_axis) {
            (Some(b), Some(a), Some(l)) => (b, a, l),
            _ => return Err(bad("incomplete header")),
        };
        if lines.next().transpose()?.as_deref() != Some("alpha,lambda,Lambda,class") {
            return Err(bad("missing column line"));
        }
        let mut cells = Vec::with_capacity(alpha_axis.n * lambda_axis.n);
        for line in lines {
            let line = line?;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad(&format!("row {line:?}")));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("number {s:?}")));
            let code = f[3].chars().next().ok_or_else(|| bad("empty class"))?;
            let class = match code {
                'X' => None,
                c => Some(AttractorClass::from_code(c).ok_or_else(|| bad(&format!("class {c}")))?),
            };
            cells.push(Cell {
                alpha: num(f[0])?,
                lambda: num(f[1])?,
                exponent: num(f[2])?,
                class,
            });
        }
        if cells.len() != alpha_axis.n * lambda_axis.n {
            return Err(bad(&format!(
                "{} rows for a {}x{} grid",
                cells.len(),
                alpha_axis.n,
                lambda_axis.n
            )));
        }
        let overlays = overlays(beta, &alpha_axis);
        Ok(Self {
            beta,
            alpha_axis,
            lambda_axis,
            cells,
            overlays,
        })
    }
}

fn overlays(beta: f64, alpha_axis: &Axis) -> Vec<ColumnOverlay> {
    alpha_axis
        .values()
        .into_iter()
        .map(|alpha| ColumnOverlay {
            alpha,
            tigan: characteristic_a(&UnfParams {
                lambda: 0.0,
                alpha,
                beta,
            }),
            hopf: hopf_threshold(alpha, beta).unwrap_or(f64::NAN),
        })
        .collect()
}

/// Largest exponent and its class for one parameter point, from the default seed.
pub fn lyapunov_cell(p: &UnfParams, cfg: &LyapunovConfig, eps_zero: f64) -> Cell {
    let res = largest_lyapunov(p, default_initial_state(p), cfg);
    let (exponent, class) = match res {
        Ok(r) => (r.lambda, classify_attractor(&r, eps_zero).ok()),
        Err(_) => (f64::NAN, None),
    };
    Cell {
        alpha: p.alpha,
        lambda: p.lambda,
        exponent,
        class,
    }
}

/// Classify every `(alpha, lambda)` node of the grid.
pub fn sweep_grid(
    beta: f64,
    alpha_axis: Axis,
    lambda_axis: Axis,
    workers: usize,
    cfg: &LyapunovConfig,
) -> Result<SweepGrid> {
    if !(beta > 0.0 && alpha_axis.lo > 0.0 && lambda_axis.lo > 0.0) {
        return Err(Error::InvalidDomain(format!(
            "sweep needs positive beta and ranges, got beta={beta}, alpha from {}, lambda from {}",
            alpha_axis.lo, lambda_axis.lo
        )));
    }
    cfg.validate()?;
    let na = alpha_axis.n;
    let cells = par_map(na * lambda_axis.n, workers, |i| {
        let p = UnfParams {
            lambda: lambda_axis.value(i / na),
            alpha: alpha_axis.value(i % na),
            beta,
        };
        lyapunov_cell(&p, cfg, DEFAULT_EPS_ZERO)
    });
    Ok(SweepGrid {
        beta,
        alpha_axis,
        lambda_axis,
        cells,
        overlays: overlays(beta, &alpha_axis),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub alpha: f64,
    pub lambda: f64,
    pub k: u32,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub beta: f64,
    pub k: u32,
    /// Ordered by `alpha`.
    pub points: Vec<TracePoint>,
    /// `alpha` intervals whose samples could not be located.
    pub gaps: Vec<(f64, f64)>,
}

impl CurveTrace {
    /// Columns `alpha,lambda,k,residual`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "alpha,lambda,k,residual")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(p.alpha),
                fmt17(p.lambda),
                p.k,
                fmt17(p.residual)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Where to look for the first root, in `lambda`.
    pub lambda_window: (f64, f64),
    /// Samples of the window scanned for the first bracket.
    pub scan_points: usize,
    pub tol: f64,
    pub workers: usize,
    pub integrator: IntegratorConfig,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            lambda_window: (0.05, 2.0),
            scan_points: 40,
            tol: 1e-6,
            workers: default_workers(),
            integrator: IntegratorConfig::default(),
        }
    }
}

/// First sign change of the split function for twist `k` along the window.
fn scan_bracket(alpha: f64, beta: f64, k: u32, cfg: &TraceConfig) -> Option<(f64, f64)> {
    let axis = Axis::new(
        cfg.lambda_window.0,
        cfg.lambda_window.1,
        cfg.scan_points.max(2),
    )
    .ok()?;
    let inside = par_map(axis.n, cfg.workers, |i| {
        let p = UnfParams::new(axis.value(i), alpha, beta).ok()?;
        split_side(&p, &cfg.integrator).ok().map(|s| s.inside(k))
    });
    (1..axis.n).find_map(|i| match (inside[i - 1], inside[i]) {
        (Some(a), Some(b)) if a != b => Some((axis.value(i - 1), axis.value(i))),
        _ => None,
    })
}

const TRACE_MIN_HALF_WIDTH: f64 = 5e-3;
const TRACE_WIDENINGS: usize = 5;

/// Follow the surface `Delta_k = 0` as `lambda(alpha)` across `alpha_axis`.
///
/// The first root comes from a scan of the lambda window. Later samples bracket
/// around the secant prediction from the last two roots and widen on failure.
pub fn trace_curve(beta: f64, k: u32, alpha_axis: Axis, cfg: &TraceConfig) -> Result<CurveTrace> {
    if !(beta > 0.0 && alpha_axis.lo > 0.0) {
        return Err(Error::InvalidDomain(format!(
            "trace needs positive beta and alpha, got {beta}, {}",
            alpha_axis.lo
        )));
    }
    let (wlo, whi) = cfg.lambda_window;
    if !(wlo > 0.0 && whi > wlo && cfg.tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad lambda window {:?} or tol {}",
            cfg.lambda_window, cfg.tol
        )));
    }
    let mut points: Vec<TracePoint> = Vec::new();
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    let mut gap_start: Option<f64> = None;
    let mut last_alpha = alpha_axis.lo;
    for alpha in alpha_axis.values() {
        let found = match points.as_slice() {
            [] => scan_bracket(alpha, beta, k, cfg)
                .and_then(|br| find_lambda_k(alpha, beta, k, br, cfg.tol, &cfg.integrator).ok()),
            prev => {
                let a = prev[prev.len() - 1];
                let (predict, step) = match prev {
                    [.., b, a] => {
                        let slope = (a.lambda - b.lambda) / (a.alpha - b.alpha);
                        let d = slope * (alpha - a.alpha);
                        (a.lambda + d, d.abs())
                    }
                    _ => (a.lambda, 0.0),
                };
                let mut half = (2.0 * step).max(TRACE_MIN_HALF_WIDTH);
                let mut hit = None;
                for _ in 0..TRACE_WIDENINGS {
                    let br = ((predict - half).max(wlo), (predict + half).min(whi));
                    if let Ok(bp) = find_lambda_k(alpha, beta, k, br, cfg.tol, &cfg.integrator) {
                        hit = Some(bp);
                        break;
                    }
                    half *= 2.0;
                }
                hit
            }
        };
        match found {
            Some(bp) => {
                if let Some(g) = gap_start.take() {
                    gaps.push((g, alpha));
                }
                points.push(TracePoint {
                    alpha,
                    lambda: bp.params.lambda,
                    k,
                    residual: bp.residual,
                });
            }
            None => {
                gap_start.get_or_insert(if points.is_empty() { alpha } else { last_alpha });
            }
        }
        last_alpha = alpha;
    }
    if let Some(g) = gap_start {
        gaps.push((g, alpha_axis.hi));
    }
    if points.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(CurveTrace {
        beta,
        k,
        points,
        gaps,
    })
}
