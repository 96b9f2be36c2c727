//! Rotation ladder of the tangent stable manifold along the invariant line `I`.
//!
//! Near `I` the flow is linear in `(x, y)` with `z(t) = z_f e^{-alpha t}`,
//! `z_f = 1 + lambda^2/4`. With `x = e^{-lambda t/2} u` this is
//! `u'' = (z_f - z(t)) u`. On the skirt (`t > 0`) the tangent manifold is the
//! decaying solution, whose log-derivative `eta = -u'/u` solves
//!
//! ```text
//! eta' = z_f e^{-alpha t} - z_f + eta^2
//! ```
//!
//! and is found by backward integration from its limit `sqrt(z_f)`. Above the
//! focus height the same solution is continued as the linear oscillator
//! `w'' + omega(s)^2 w = 0`, `omega^2 = z_f (e^{alpha s} - 1)`, `s = -t`,
//! which never blows up. The roots of `w' + lambda w / 2` are the heights at
//! which the tangent manifold crosses the section through `I`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::UnfParams;
use crate::ode::{fmt17, refine_root, solve_to, Dopri5, IntegratorConfig};

/// Upper end of the focus integration, as a height above `z_f`.
pub(crate) const Z_CEILING: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiLadder {
    /// Value of the bounded skirt solution at the focus height.
    pub eta0: f64,
    /// Rotation times `tau_1 < tau_2 < ...`, measured upward from the focus height.
    pub tau: Vec<f64>,
    /// Heights `z_k = z_f e^{alpha tau_k}`.
    pub zk: Vec<f64>,
    /// Aitken extrapolation of the last three `tau`; infinite when the gaps do not shrink.
    pub t_inf: f64,
    pub z_star: f64,
}

impl RiccatiLadder {
    /// Columns `k,tau,zk`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,tau,zk")?;
        for (i, (t, z)) in self.tau.iter().zip(&self.zk).enumerate() {
            writeln!(w, "{},{},{}", i + 1, fmt17(*t), fmt17(*z))?;
        }
        Ok(())
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.tau.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

fn inner_cfg() -> IntegratorConfig {
    IntegratorConfig {
        rtol: 1e-12,
        atol: 1e-14,
        max_step: 0.05,
        t_max: f64::MAX,
        escape_radius: f64::MAX,
    }
}

/// Bounded solution of the skirt Riccati equation, evaluated at the focus height.
pub fn skirt_eta0(p: &UnfParams) -> Result<f64> {
    p.require_positive()?;
    let zf = p.focus_height();
    let t_far = (zf / 1e-8).ln() / p.alpha;
    let (a, root) = (p.alpha, zf.sqrt());
    let cfg = IntegratorConfig {
        max_step: 0.5,
        ..inner_cfg()
    };
    let f = move |t: f64, y: &[f64; 1]| [zf * (-a * t).exp() - zf + y[0] * y[0]];
    let y = solve_to(f, t_far, [root], 0.0, &cfg)?;
    Ok(y[0])
}

/// Rotation ladder with `k_max` entries.
pub fn riccati_tau(p: &UnfParams, k_max: usize) -> Result<RiccatiLadder> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let eta0 = skirt_eta0(p)?;
    let zf = p.focus_height();
    let (a, h) = (p.alpha, 0.5 * p.lambda);
    let s_max = (1.0 + Z_CEILING / zf).ln() / a;
    let f = move |s: f64, w: &[f64; 2]| [w[1], -zf * ((a * s).exp() - 1.0) * w[0]];
    let g = move |w: &[f64; 2]| w[1] + h * w[0];
    let mut st = Dopri5::new(f, 0.0, [1.0, eta0], 1.0, &inner_cfg()).without_escape();
    let mut tau = Vec::with_capacity(k_max);
    while tau.len() < k_max && st.t() < s_max {
        let step = st.step_until(Some(s_max))?;
        let (mut ta, mut ga) = (step.t0, g(&step.y0));
        for j in 1..=8 {
            let tb = step.t0 + step.h() * j as f64 / 8.0;
            let gb = g(&step.eval(tb));
            if ga != 0.0 && ga.signum() != gb.signum() {
                let (tr, _) = refine_root(&step, ta, tb, g, 1e-14);
                if tau.len() < k_max {
                    tau.push(tr);
                }
            }
            ta = tb;
            ga = gb;
        }
    }
    if tau.len() < k_max {
        return Err(Error::LadderTruncated {
            found: tau,
            wanted: k_max,
        });
    }
    let zk: Vec<f64> = tau.iter().map(|t| zf * (a * t).exp()).collect();
    let t_inf = aitken_limit(&tau);
    Ok(RiccatiLadder {
        eta0,
        zk,
        t_inf,
        z_star: zf * (a * t_inf).exp(),
        tau,
    })
}

/// Aitken delta-squared limit of the last three terms.
pub fn aitken_limit(seq: &[f64]) -> f64 {
    let n = seq.len();
    if n < 3 {
        return f64::INFINITY;
    }
    let (a, b, c) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let den = (c - b) - (b - a);
    if den >= 0.0 {
        return f64::INFINITY;
    }
    c - (c - b) * (c - b) / den
}

/// Frequency `omega(s)` of the focus piece at time `s` above the focus height.
pub fn focus_frequency(p: &UnfParams, s: f64) -> f64 {
    (p.focus_height() * ((p.alpha * s).exp() - 1.0))
        .max(0.0)
        .sqrt()
}

/// Section domain `b_k` between consecutive ladder heights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainB {
    pub k: u32,
    pub z_lo: f64,
    pub z_hi: f64,
    /// `2m` for `m` full rotations around `I`, `2m + 1` for `m` and a half.
    pub half_turns: u32,
    /// `b_0`, the saddle/node piece below the first ladder height.
    pub skirt: bool,
}

/// `b_0 .. b_{k_max-1}` from a ladder of `k_max` heights.
pub fn domains_b(p: &UnfParams, k_max: usize) -> Result<Vec<DomainB>> {
    let ladder = riccati_tau(p, k_max)?;
    let mut out = Vec::with_capacity(k_max);
    let mut lo = 0.0;
    for (k, &hi) in ladder.zk.iter().enumerate() {
        out.push(DomainB {
            k: k as u32,
            z_lo: lo,
            z_hi: hi,
            half_turns: k as u32,
            skirt: k == 0,
        });
        lo = hi;
    }
    Ok(out)
}
