use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unf_core::lyapunov::{LyapunovConfig, DEFAULT_EPS_ZERO};
use unf_core::manifolds::{DEFAULT_DELTA, NEAR_AXIS};
use unf_core::{IntegratorConfig, UnfParams};

#[derive(Debug, Parser)]
#[command(
    name = "unf",
    version,
    about = "Universal normal form of the Lorenz/Chen family"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, env = "UNF_RTOL", default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, global = true, env = "UNF_ATOL", default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long, global = true, default_value_t = 0.2)]
    pub max_step: f64,
    #[arg(long, global = true, default_value_t = 500.0)]
    pub t_max: f64,
    #[arg(long, global = true, default_value_t = 50.0)]
    pub escape_radius: f64,
    /// Worker threads for sweep, trace and the stable curve [default: all cores]
    #[arg(long, global = true, env = "UNF_WORKERS")]
    pub workers: Option<usize>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: json for single results, csv for tables]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Global {
    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            rtol: self.rtol,
            atol: self.atol,
            max_step: self.max_step,
            t_max: self.t_max,
            escape_radius: self.escape_radius,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(unf_core::sweep::default_workers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lorenz,
    Chen,
    Lu,
    Tigan,
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
}

impl Point {
    pub fn params(&self) -> unf_core::Result<UnfParams> {
        UnfParams::new(self.lambda, self.alpha, self.beta)
    }
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[arg(long, default_value_t = LyapunovConfig::default().t_transient)]
    pub t_transient: f64,
    #[arg(long, default_value_t = LyapunovConfig::default().t_total)]
    pub t_total: f64,
    #[arg(long, default_value_t = LyapunovConfig::default().renorm_dt)]
    pub renorm_dt: f64,
}

impl LyapunovArgs {
    pub fn config(&self, integrator: IntegratorConfig) -> LyapunovConfig {
        LyapunovConfig {
            t_transient: self.t_transient,
            t_total: self.t_total,
            renorm_dt: self.renorm_dt,
            integrator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManifoldKind {
    /// First hit of W^u with the section
    Unstable,
    /// First-intersection curve of W^s with the section
    Stable,
    /// Zeros of the tangent-manifold slope
    Riccati,
    /// Section domains between consecutive sheets
    Domains,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map generalized Lorenz parameters to the normal form and classify the region
    MapParams {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// r for the Lorenz family or a generic system
        #[arg(long)]
        r: Option<f64>,
        /// c for the Chen, Lu and Tigan families
        #[arg(long)]
        c: Option<f64>,
        /// q for a generic system
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = unf_core::model::DEFAULT_BOUNDARY_TOL)]
        tol: f64,
    },
    /// Integrate one trajectory (columns t,x,y,z)
    Integrate {
        #[command(flatten)]
        point: Point,
        /// Start point; the local seed of W^u when omitted
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
        start: Option<Vec<f64>>,
        /// Negative for reverse time
        #[arg(long, allow_negative_numbers = true, default_value_t = 200.0)]
        t_span: f64,
        /// Sampling interval; every accepted step when omitted
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Invariant manifolds of the saddle
    Manifold {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value_t = ManifoldKind::Unstable)]
        kind: ManifoldKind,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, default_value_t = NEAR_AXIS)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        z_lo: f64,
        /// Upper end of the stable curve; just below the ladder limit when omitted
        #[arg(long)]
        z_hi: Option<f64>,
        #[arg(long, default_value_t = 40)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Split function at one parameter point
    Split {
        #[command(flatten)]
        point: Point,
        /// Sheet index; the twist of p^u itself when omitted
        #[arg(long)]
        k: Option<u32>,
    },
    /// Locate a homoclinic bifurcation by bisection in lambda (give --alpha) or alpha (give --lambda)
    FindHomoclinic {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, conflicts_with = "lambda", requires_all = ["lambda_lo", "lambda_hi"])]
        alpha: Option<f64>,
        #[arg(long)]
        lambda_lo: Option<f64>,
        #[arg(long)]
        lambda_hi: Option<f64>,
        #[arg(long, requires_all = ["alpha_lo", "alpha_hi"])]
        lambda: Option<f64>,
        #[arg(long)]
        alpha_lo: Option<f64>,
        #[arg(long)]
        alpha_hi: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Largest Lyapunov exponent and attractor class
    Lyapunov {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        lyap: LyapunovArgs,
        #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
        eps_zero: f64,
    },
    /// Lyapunov classification over an (alpha, lambda) grid
    Sweep {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        alpha_lo: f64,
        #[arg(long)]
        alpha_hi: f64,
        #[arg(long, default_value_t = 40)]
        n_alpha: usize,
        #[arg(long)]
        lambda_lo: f64,
        #[arg(long)]
        lambda_hi: f64,
        #[arg(long, default_value_t = 40)]
        n_lambda: usize,
        #[command(flatten)]
        lyap: LyapunovArgs,
        /// Also write the Tigan and Hopf overlay curves (columns alpha,tigan,hopf)
        #[arg(long)]
        overlay: Option<PathBuf>,
    },
    /// Continue a homoclinic bifurcation curve lambda(alpha)
    Trace {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long)]
        alpha_lo: f64,
        #[arg(long)]
        alpha_hi: f64,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Window searched in lambda for the first root
        #[arg(long, default_value_t = 0.05)]
        lambda_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        lambda_hi: f64,
        #[arg(long, default_value_t = 40)]
        scan_points: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Symbol sequence (side of each loop and half-turns around the z-axis)
    Symbols {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Longest allowed time between two symbols
        #[arg(long, default_value_t = 1e5)]
        gap: f64,
    },
    /// Re-read a JSON document written by this tool and print it again
    Check { input: PathBuf },
}
