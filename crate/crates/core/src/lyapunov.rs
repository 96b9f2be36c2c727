//! Largest Lyapunov exponent by renormalized tangent-vector propagation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifolds::unstable::{wu_seed, DEFAULT_DELTA};
use crate::model::{unf_jacobian, unf_vector_field, State, UnfParams};
use crate::ode::{Dopri5, IntegratorConfig};

/// Threshold on `|Lambda|` separating periodic from chaotic or equilibrium regimes.
pub const DEFAULT_EPS_ZERO: f64 = 5e-3;

/// Tail variation of the running average below which a run counts as converged,
/// absolute and relative to `|Lambda|`; whichever is looser.
const CONVERGENCE_ABS: f64 = 2e-3;
const CONVERGENCE_REL: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovConfig {
    pub t_transient: f64,
    pub t_total: f64,
    pub renorm_dt: f64,
    pub integrator: IntegratorConfig,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            t_transient: 200.0,
            t_total: 2000.0,
            renorm_dt: 1.0,
            integrator: IntegratorConfig::default(),
        }
    }
}

impl LyapunovConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_transient > 0.0 && self.t_total > self.t_transient && self.renorm_dt > 0.0) {
            return Err(Error::InvalidInput(format!(
                "need t_total > t_transient > 0 and renorm_dt > 0, got {self:?}"
            )));
        }
        if self.renorm_dt > self.t_total - self.t_transient {
            return Err(Error::InvalidInput(
                "renorm_dt longer than the averaging window".into(),
            ));
        }
        self.integrator.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovResult {
    /// Largest exponent in normal-form time units; `+inf` when the orbit escaped.
    #[serde(rename = "Lambda", with = "crate::serde_f64")]
    pub lambda: f64,
    /// Length of the averaging window.
    pub t_used: f64,
    pub converged: bool,
    /// Largest deviation of the running average from `lambda` over the last quarter.
    #[serde(with = "crate::serde_f64")]
    pub uncertainty: f64,
    pub diverged: bool,
}

/// Default initial condition: the local seed of the right branch of `W^u`.
pub fn default_initial_state(p: &UnfParams) -> State {
    wu_seed(p, DEFAULT_DELTA)
}

/// Benettin estimate of the largest exponent along the orbit of `s0`.
pub fn largest_lyapunov(p: &UnfParams, s0: State, cfg: &LyapunovConfig) -> Result<LyapunovResult> {
    cfg.validate()?;
    let p = *p;
    let field = move |_: f64, y: &[f64; 6]| -> [f64; 6] {
        let s = State::new(y[0], y[1], y[2]);
        let f = unf_vector_field(&p, &s);
        let j = unf_jacobian(&p, &s);
        let mut out = [f.x, f.y, f.z, 0.0, 0.0, 0.0];
        for r in 0..3 {
            out[3 + r] = j[r][0] * y[3] + j[r][1] * y[4] + j[r][2] * y[5];
        }
        out
    };
    let v0 = 1.0 / 3f64.sqrt();
    let mut st = Dopri5::new(
        field,
        0.0,
        [s0.x, s0.y, s0.z, v0, v0, v0],
        1.0,
        &cfg.integrator,
    );

    let window = cfg.t_total - cfg.t_transient;
    let n_renorm = (window / cfg.renorm_dt).round().max(1.0) as usize;
    let n_transient = (cfg.t_transient / cfg.renorm_dt).ceil() as usize;
    let mut sum = 0.0;
    let mut running = Vec::with_capacity(n_renorm);
    for i in 0..n_transient + n_renorm {
        let t_next = if i < n_transient {
            (cfg.renorm_dt * (i + 1) as f64).min(cfg.t_transient)
        } else {
            cfg.t_transient + cfg.renorm_dt * (i + 1 - n_transient) as f64
        };
        let y = match st.advance_to(t_next) {
            Ok(y) => y,
            Err(Error::Escaped { .. }) => {
                return Ok(LyapunovResult {
                    lambda: f64::INFINITY,
                    t_used: st.t(),
                    converged: false,
                    uncertainty: f64::INFINITY,
                    diverged: true,
                });
            }
            Err(e) => return Err(e),
        };
        let norm = (y[3] * y[3] + y[4] * y[4] + y[5] * y[5]).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NoConvergence(format!(
                "tangent vector degenerated at t = {t_next}"
            )));
        }
        st.set_state([y[0], y[1], y[2], y[3] / norm, y[4] / norm, y[5] / norm]);
        if i >= n_transient {
            sum += norm.ln();
            running.push(sum / (t_next - cfg.t_transient));
        }
    }
    let t_used = n_renorm as f64 * cfg.renorm_dt;
    let lambda = sum / t_used;
    let tail = &running[running.len() * 3 / 4..];
    let uncertainty = tail.iter().map(|r| (r - lambda).abs()).fold(0.0, f64::max);
    Ok(LyapunovResult {
        lambda,
        t_used,
        converged: uncertainty < CONVERGENCE_ABS.max(CONVERGENCE_REL * lambda.abs()),
        uncertainty,
        diverged: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttractorClass {
    Chaotic,
    Periodic,
    Equilibrium,
    Diverged,
}

impl AttractorClass {
    /// One-letter code used in grid files.
    pub fn code(self) -> char {
        match self {
            AttractorClass::Chaotic => 'C',
            AttractorClass::Periodic => 'P',
            AttractorClass::Equilibrium => 'E',
            AttractorClass::Diverged => 'D',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'C' => Some(AttractorClass::Chaotic),
            'P' => Some(AttractorClass::Periodic),
            'E' => Some(AttractorClass::Equilibrium),
            'D' => Some(AttractorClass::Diverged),
            _ => None,
        }
    }
}

/// Sign of the exponent with a dead band of `eps_zero` around zero.
pub fn classify_attractor(res: &LyapunovResult, eps_zero: f64) -> Result<AttractorClass> {
    if res.diverged {
        return Ok(AttractorClass::Diverged);
    }
    if !res.converged {
        return Err(Error::NoConvergence(format!(
            "running average still varies by {:.3e} (Lambda = {:.4e})",
            res.uncertainty, res.lambda
        )));
    }
    Ok(if res.lambda > eps_zero {
        AttractorClass::Chaotic
    } else if res.lambda < -eps_zero {
        AttractorClass::Equilibrium
    } else {
        AttractorClass::Periodic
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::equilibria;

    fn res(lambda: f64) -> LyapunovResult {
        LyapunovResult {
            lambda,
            t_used: 1.0,
            converged: true,
            uncertainty: 0.0,
            diverged: false,
        }
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(
            classify_attractor(&res(0.05), DEFAULT_EPS_ZERO).unwrap(),
            AttractorClass::Chaotic
        );
        assert_eq!(
            classify_attractor(&res(-0.2), DEFAULT_EPS_ZERO).unwrap(),
            AttractorClass::Equilibrium
        );
        assert_eq!(
            classify_attractor(&res(1e-5), 1e-3).unwrap(),
            AttractorClass::Periodic
        );
        let mut r = res(0.3);
        r.converged = false;
        assert!(classify_attractor(&r, DEFAULT_EPS_ZERO).is_err());
        r.diverged = true;
        assert_eq!(
            classify_attractor(&r, DEFAULT_EPS_ZERO).unwrap(),
            AttractorClass::Diverged
        );
    }

    #[test]
    fn codes_roundtrip() {
        for c in [
            AttractorClass::Chaotic,
            AttractorClass::Periodic,
            AttractorClass::Equilibrium,
            AttractorClass::Diverged,
        ] {
            assert_eq!(AttractorClass::from_code(c.code()), Some(c));
        }
    }

    #[test]
    fn stable_focus_matches_spectrum() {
        let p = UnfParams::new(0.7634, 0.35, 1.05487).unwrap();
        let e = equilibria(&p).unwrap().plus;
        let s0 = State::new(e.x + 0.01, e.y, e.z);
        let r = largest_lyapunov(&p, s0, &LyapunovConfig::default()).unwrap();
        // the complex pair at E+ dominates; its real part is -(trace - real root)/2
        let j = unf_jacobian(&p, &e);
        let tr = j[0][0] + j[1][1] + j[2][2];
        let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
            - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
            + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
        let m2 = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] - j[0][2] * j[2][0]
            + j[1][1] * j[2][2]
            - j[1][2] * j[2][1];
        // real root of mu^3 - tr mu^2 + m2 mu - det by Newton from below
        let mut mu = -10.0;
        for _ in 0..200 {
            let f = mu * mu * mu - tr * mu * mu + m2 * mu - det;
            let d = 3.0 * mu * mu - 2.0 * tr * mu + m2;
            mu -= f / d;
        }
        let re = 0.5 * (tr - mu);
        let lead = re.max(mu);
        assert!(r.lambda < -1e-3 && r.converged, "{r:?}");
        assert!(
            (r.lambda - lead).abs() < 0.1 * lead.abs(),
            "{} vs {lead}",
            r.lambda
        );
    }

    #[test]
    fn escape_is_flagged() {
        let p = UnfParams::new(0.0, 0.2, 1.0).unwrap();
        let r =
            largest_lyapunov(&p, default_initial_state(&p), &LyapunovConfig::default()).unwrap();
        assert!(r.diverged && r.lambda.is_infinite());
    }

    #[test]
    fn bad_horizons() {
        let p = UnfParams::new(0.5, 0.2, 1.0).unwrap();
        let cfg = LyapunovConfig {
            t_transient: 10.0,
            t_total: 5.0,
            ..Default::default()
        };
        assert!(largest_lyapunov(&p, default_initial_state(&p), &cfg).is_err());
    }
}
