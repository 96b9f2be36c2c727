use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{equilibria, saddle_spectrum, State, UnfParams};
use crate::ode::{Direction, IntegratorConfig, SectionWalker, Side};
use crate::unf_field;

/// Default offset of the local seed on `W^u`.
pub const DEFAULT_DELTA: f64 = 1e-6;

/// Distance to `E+-` below which an orbit is declared converged.
pub const FOCUS_CAPTURE: f64 = 1e-6;

/// First intersection `p^u = (x_u, 0, z_u)` of the right branch of `W^u` with `S+`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnstableHit {
    pub x_u: f64,
    pub z_u: f64,
    /// Lifted angle of `(x, y)` gained between the seed and the hit.
    pub theta: f64,
    pub t_flight: f64,
}

impl UnstableHit {
    pub fn point(&self) -> State {
        State::new(self.x_u, 0.0, self.z_u)
    }
}

/// Quadratic local approximation of `W^u` at distance `delta` along `x`;
/// a negative `delta` gives the left branch.
pub fn wu_seed(p: &UnfParams, delta: f64) -> State {
    let e1 = saddle_spectrum(p).e1;
    State::new(
        delta,
        e1 * delta,
        p.beta * delta * delta / (p.alpha + 2.0 * e1),
    )
}

/// Integrate the right branch of `W^u` to its first crossing of `S+`.
pub fn shoot_unstable(p: &UnfParams, delta: f64, cfg: &IntegratorConfig) -> Result<UnstableHit> {
    p.require_positive()?;
    if !(delta > 0.0 && delta <= 1e-5) {
        return Err(Error::InvalidInput(format!(
            "seed offset {delta} outside (0, 1e-5]"
        )));
    }
    shoot_from(p, wu_seed(p, delta), cfg)
}

fn shoot_from(p: &UnfParams, seed: State, cfg: &IntegratorConfig) -> Result<UnstableHit> {
    cfg.validate()?;
    let eq = equilibria(p)?;
    let mut walker = SectionWalker::new(unf_field(*p), seed, 1.0, Direction::Down, cfg);
    let theta0 = walker.theta();
    loop {
        if walker.t() >= cfg.t_max {
            return Err(Error::EventNotFound { t: walker.t() });
        }
        if let Some(c) = walker.advance()? {
            if c.side == Side::Plus {
                return Ok(UnstableHit {
                    x_u: c.state.x,
                    z_u: c.state.z,
                    theta: c.theta - theta0,
                    t_flight: c.time,
                });
            }
        }
        let s = walker.state();
        if s.dist(&eq.plus) < FOCUS_CAPTURE || s.dist(&eq.minus) < FOCUS_CAPTURE {
            return Err(Error::ConvergedToFocus {
                t: walker.t(),
                state: s,
            });
        }
    }
}

/// Distance between the hits obtained from seeds at `delta` and `delta/2`.
pub fn seed_sensitivity(p: &UnfParams, delta: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let a = shoot_unstable(p, delta, cfg)?;
    let b = shoot_unstable(p, 0.5 * delta, cfg)?;
    Ok(a.point().dist(&b.point()))
}

/// Mirror image: the left branch hits `S-` at `(-x_u, 0, z_u)`.
pub fn shoot_unstable_left(
    p: &UnfParams,
    delta: f64,
    cfg: &IntegratorConfig,
) -> Result<UnstableHit> {
    p.require_positive()?;
    let eq = equilibria(p)?;
    let mut walker = SectionWalker::new(unf_field(*p), wu_seed(p, -delta), 1.0, Direction::Up, cfg);
    let theta0 = walker.theta();
    loop {
        if walker.t() >= cfg.t_max {
            return Err(Error::EventNotFound { t: walker.t() });
        }
        if let Some(c) = walker.advance()? {
            if c.side == Side::Minus {
                return Ok(UnstableHit {
                    x_u: c.state.x,
                    z_u: c.state.z,
                    theta: c.theta - theta0,
                    t_flight: c.time,
                });
            }
        }
        let s = walker.state();
        if s.dist(&eq.plus) < FOCUS_CAPTURE || s.dist(&eq.minus) < FOCUS_CAPTURE {
            return Err(Error::ConvergedToFocus {
                t: walker.t(),
                state: s,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorenz_hit_within_bounds() {
        let p = UnfParams::new(0.6694, 0.1623, 1.05487).unwrap();
        let h = shoot_unstable(&p, DEFAULT_DELTA, &IntegratorConfig::default()).unwrap();
        assert!(h.x_u > 0.0 && h.x_u < 2f64.sqrt());
        assert!(h.z_u > 0.0 && h.z_u < 2.0 * p.beta / p.alpha);
        assert!(
            (h.x_u - 0.85317).abs() < 1e-4 && (h.z_u - 0.88977).abs() < 1e-4,
            "{h:?}"
        );
    }

    #[test]
    fn mirrored_branch() {
        let p = UnfParams::new(0.26, 0.11, 2.47).unwrap();
        let cfg = IntegratorConfig::default();
        let r = shoot_unstable(&p, DEFAULT_DELTA, &cfg).unwrap();
        let l = shoot_unstable_left(&p, DEFAULT_DELTA, &cfg).unwrap();
        assert!((r.x_u + l.x_u).abs() < 1e-9 && (r.z_u - l.z_u).abs() < 1e-9);
        assert!((r.theta - l.theta).abs() < 1e-9);
    }

    #[test]
    fn seed_offset_is_irrelevant() {
        let p = UnfParams::new(0.6694, 0.1623, 1.05487).unwrap();
        assert!(seed_sensitivity(&p, DEFAULT_DELTA, &IntegratorConfig::default()).unwrap() < 1e-5);
    }

    #[test]
    fn bad_inputs() {
        let p = UnfParams::new(0.6694, 0.1623, 1.05487).unwrap();
        let cfg = IntegratorConfig::default();
        assert!(shoot_unstable(&p, 1e-3, &cfg).is_err());
        assert!(shoot_unstable(&UnfParams::new(0.0, 0.2, 1.0).unwrap(), 1e-6, &cfg).is_err());
    }
}
