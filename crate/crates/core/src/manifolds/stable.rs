//! The stable manifold `W^s` of the saddle, located through where orbits leave.
//!
//! Every orbit that comes close to `W^s` slides down along `I`, reaches the
//! saddle region and leaves along one branch of `W^u`. Two numbers describe
//! that passage: the half-turns made around `I` on the way down and the side
//! on which the orbit finally leaves. Both are constant on each component of
//! the complement of `W^s`, so `W^s` is found as the boundary between classes
//! along horizontal rays `{(x, 0, z)}` of the section.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifolds::aux::aux_separatrix_x0;
use crate::manifolds::riccati::{riccati_tau, Z_CEILING};
use crate::manifolds::unstable::FOCUS_CAPTURE;
use crate::model::{equilibria, State, UnfParams};
use crate::ode::{fmt17, substep_times, AngleTracker, Dopri5, IntegratorConfig, Side};
use crate::unf_field;

/// Default distance from `I` of the reference point of a ray.
pub const NEAR_AXIS: f64 = 1e-6;

const RAY_H0: f64 = 0.01;
const RAY_H_MAX: f64 = 0.05;
const RAY_X_MIN: f64 = 1e-9;
const RAY_TOL: f64 = 1e-10;

/// How a classified orbit ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Settle {
    /// Entered `{x y > 0, x^2 + z < 1}`: it is leaving the saddle along `W^u`.
    Committed,
    Focus,
    Diverged,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePassage {
    /// `floor(max |theta(t) - theta(0)| / pi)` up to the commit.
    pub half_turns: u32,
    pub exit: Side,
    pub start: Side,
    pub settle: Settle,
    pub t: f64,
    pub state: State,
}

impl SaddlePassage {
    /// Side from which the orbit approaches the saddle after `half_turns`.
    pub fn approach(&self) -> Side {
        if self.half_turns.is_multiple_of(2) {
            self.start
        } else {
            match self.start {
                Side::Plus => Side::Minus,
                Side::Minus => Side::Plus,
            }
        }
    }

    /// Half-turns, plus one when the orbit leaves opposite to its approach.
    /// Points between `I` and the `k`-th sheet of `W^s` have index `<= k`.
    pub fn index(&self) -> u32 {
        self.half_turns + u32::from(self.exit != self.approach())
    }
}

/// Follow the orbit of `s0` until it commits to a branch of `W^u`.
pub fn classify_point(p: &UnfParams, s0: State, cfg: &IntegratorConfig) -> Result<SaddlePassage> {
    let eq = equilibria(p)?;
    let start = Side::of(s0.x);
    let mut st = Dopri5::new(unf_field(*p), 0.0, s0.to_array(), 1.0, cfg);
    let mut angle = AngleTracker::new(s0.x, s0.y);
    let theta0 = angle.theta();
    let mut excursion: f64 = 0.0;
    let done = |settle, exit, t, state, exc: f64| SaddlePassage {
        half_turns: (exc / PI).floor() as u32,
        exit,
        start,
        settle,
        t,
        state,
    };
    loop {
        if st.t() >= cfg.t_max {
            let s = State::from(*st.y());
            return Ok(done(Settle::Undecided, start, st.t(), s, excursion));
        }
        let step = match st.step() {
            Ok(s) => s,
            Err(Error::Escaped { t, state }) => {
                return Ok(done(
                    Settle::Diverged,
                    Side::of(state.x),
                    t,
                    state,
                    excursion,
                ));
            }
            Err(e) => return Err(e),
        };
        for t in substep_times(&step) {
            let y = step.eval(t);
            excursion = excursion.max((angle.update(y[0], y[1]) - theta0).abs());
            if y[0] * y[1] > 0.0 && y[0] * y[0] + y[2] < 1.0 {
                return Ok(done(
                    Settle::Committed,
                    Side::of(y[0]),
                    t,
                    State::from(y),
                    excursion,
                ));
            }
        }
        let s = State::from(step.y1);
        for (e, side) in [(eq.plus, Side::Plus), (eq.minus, Side::Minus)] {
            if s.dist(&e) < FOCUS_CAPTURE {
                return Ok(done(Settle::Focus, side, step.t1, s, excursion));
            }
        }
    }
}

/// Class of the section point `(x, 0, z)`.
pub fn classify_on_section(
    p: &UnfParams,
    x: f64,
    z: f64,
    cfg: &IntegratorConfig,
) -> Result<SaddlePassage> {
    classify_point(p, State::new(x, 0.0, z), cfg)
}

/// First point along the ray at height `z`, starting at `x_start` and moving
/// outward (towards `x_limit`) or inward (towards `I`), where `class` changes.
/// `None` when the end of the ray is reached without a change.
pub(crate) fn ray_boundary<C: PartialEq>(
    p: &UnfParams,
    z: f64,
    x_start: f64,
    outward: bool,
    x_limit: f64,
    class: impl Fn(&SaddlePassage) -> C,
    cfg: &IntegratorConfig,
) -> Result<Option<f64>> {
    let at = |x: f64| -> Result<C> { Ok(class(&classify_on_section(p, x, z, cfg)?)) };
    let c0 = at(x_start)?;
    let mut h = RAY_H0;
    let mut prev = x_start;
    loop {
        let (next, last) = if outward {
            let n = prev + h;
            if n >= x_limit {
                (x_limit, true)
            } else {
                (n, false)
            }
        } else {
            let n = prev - h;
            if n <= RAY_X_MIN {
                (RAY_X_MIN, true)
            } else {
                (n, false)
            }
        };
        if at(next)? != c0 {
            let (mut same, mut diff) = (prev, next);
            while (diff - same).abs() > RAY_TOL {
                let mid = 0.5 * (same + diff);
                if at(mid)? == c0 {
                    same = mid;
                } else {
                    diff = mid;
                }
            }
            return Ok(Some(0.5 * (same + diff)));
        }
        if last {
            return Ok(None);
        }
        prev = next;
        h = (1.5 * h).min(RAY_H_MAX);
    }
}

/// Where the first sheet of `W^s` met from `I` crosses the ray at height `z`,
/// together with the exit side of the reference point at distance `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayCrossing {
    pub z: f64,
    /// Unsigned distance of the crossing from `I`.
    pub distance: f64,
    /// Exit side of orbits starting next to `I`; `+` on the skirt.
    pub axis_exit: Side,
}

impl RayCrossing {
    /// Signed curve value `x^s(z)`.
    pub fn x_s(&self) -> f64 {
        self.axis_exit.sign() * self.distance
    }
}

pub fn ray_crossing(
    p: &UnfParams,
    z: f64,
    eps: f64,
    x_limit: f64,
    cfg: &IntegratorConfig,
) -> Result<RayCrossing> {
    let near = classify_on_section(p, eps, z, cfg)?;
    let reference = near.index();
    let distance = ray_boundary(p, z, eps, true, x_limit, |c| c.index() == reference, cfg)?
        .ok_or_else(|| {
            Error::NoConvergence(format!("no sheet of W^s below x = {x_limit} at z = {z}"))
        })?;
    Ok(RayCrossing {
        z,
        distance,
        axis_exit: near.exit,
    })
}

/// Rough upper end of the ladder used to validate heights, capped at the
/// height where the ladder search stops.
pub fn z_star_estimate(p: &UnfParams) -> Result<f64> {
    let ceiling = p.focus_height() + Z_CEILING;
    match riccati_tau(p, 8) {
        Ok(ladder) => Ok(ladder.z_star.min(ceiling)),
        // fast drift along I: fewer sheets below the ceiling
        Err(Error::LadderTruncated { .. }) => Ok(ceiling),
        Err(e) => Err(e),
    }
}

/// Value `x^s(z)` of the first-intersection curve of `W^s` with the section.
pub fn stable_x_at(p: &UnfParams, z_target: f64, cfg: &IntegratorConfig) -> Result<f64> {
    p.require_positive()?;
    let z_star = z_star_estimate(p)?;
    if !(z_target > 0.0 && z_target < z_star) {
        return Err(Error::OutOfRange {
            value: z_target,
            lo: 0.0,
            hi: z_star,
        });
    }
    let x_limit = 1.1 * aux_separatrix_x0(p.lambda, cfg)?;
    Ok(ray_crossing(p, z_target, NEAR_AXIS, x_limit, cfg)?.x_s())
}

/// Sampled curve `x = x^s(z)` on `S+` with the heights where it meets `I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableCurve {
    pub samples: Vec<(f64, f64)>,
    pub zero_ladder: Vec<f64>,
    pub z_star: f64,
}

impl StableCurve {
    /// Columns `z,x`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "z,x")?;
        for (z, x) in &self.samples {
            writeln!(w, "{},{}", fmt17(*z), fmt17(*x))?;
        }
        Ok(())
    }
}

/// Sample `x^s` at `n` uniform heights of `z_range` (clipped to `0.95 z_star`).
/// Samples whose orbits escape or fail are dropped.
pub fn stable_curve(
    p: &UnfParams,
    eps: f64,
    z_range: (f64, f64),
    n: usize,
    cfg: &IntegratorConfig,
) -> Result<StableCurve> {
    p.require_positive()?;
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::InvalidInput(format!(
            "eps = {eps} outside [1e-7, 1e-3]"
        )));
    }
    if n < 2 || !(z_range.0 > 0.0 && z_range.1 > z_range.0) {
        return Err(Error::InvalidInput(format!(
            "bad sampling: n = {n}, range {z_range:?}"
        )));
    }
    let z_star = z_star_estimate(p)?;
    let hi = z_range.1.min(0.95 * z_star);
    if hi <= z_range.0 {
        return Err(Error::OutOfRange {
            value: z_range.0,
            lo: 0.0,
            hi: 0.95 * z_star,
        });
    }
    let x_limit = 1.1 * aux_separatrix_x0(p.lambda, cfg)?;
    let zs: Vec<f64> = (0..n)
        .map(|i| z_range.0 + (hi - z_range.0) * i as f64 / (n - 1) as f64)
        .collect();
    let rays = crate::sweep::par_map(zs.len(), crate::sweep::default_workers(), |i| {
        ray_crossing(p, zs[i], eps, x_limit, cfg)
    });

    let mut samples = Vec::with_capacity(n);
    let mut sides: Vec<(f64, Side)> = Vec::with_capacity(n);
    for r in rays.into_iter().flatten() {
        samples.push((r.z, r.x_s()));
        sides.push((r.z, r.axis_exit));
    }
    let mut zero_ladder = Vec::new();
    for w in sides.windows(2) {
        if w[0].1 != w[1].1 {
            zero_ladder.push(axis_flip(p, eps, w[0].0, w[1].0, w[0].1, cfg)?);
        }
    }
    Ok(StableCurve {
        samples,
        zero_ladder,
        z_star,
    })
}

/// Height in `(lo, hi)` where the exit side of points next to `I` flips.
pub fn axis_flip(
    p: &UnfParams,
    eps: f64,
    mut lo: f64,
    mut hi: f64,
    side_lo: Side,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    while hi - lo > 1e-9 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if classify_on_section(p, eps, mid, cfg)?.exit == side_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
