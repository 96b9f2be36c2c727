use crate::error::{Error, Result};
use crate::homoclinic::{FateKind, FateLabel};
use crate::manifolds::unstable::{wu_seed, DEFAULT_DELTA, FOCUS_CAPTURE};
use crate::model::{equilibria, UnfParams};
use crate::ode::{Direction, IntegratorConfig, SectionWalker, Side};
use crate::unf_field;

/// Follow the right branch of `W^u` from its local seed.
///
/// Without `follow_through` the first crossing of `S+` decides. With it the
/// orbit is followed up to `t_max` so that a later capture by a focus or an
/// escape takes precedence; recurrent orbits report their first hit.
pub fn classify_wu_fate(
    p: &UnfParams,
    follow_through: bool,
    cfg: &IntegratorConfig,
) -> Result<FateLabel> {
    if !(p.lambda >= 0.0 && p.alpha >= 0.0 && p.beta >= 0.0) {
        return Err(Error::InvalidDomain(format!(
            "non-negative parameters required, got {p:?}"
        )));
    }
    cfg.validate()?;
    let eq = equilibria(p)?;
    let mut walker = SectionWalker::new(
        unf_field(*p),
        wu_seed(p, DEFAULT_DELTA),
        1.0,
        Direction::Down,
        cfg,
    );
    let mut first_hit: Option<FateLabel> = None;
    while walker.t() < cfg.t_max {
        let crossing = match walker.advance() {
            Ok(c) => c,
            Err(Error::Escaped { t, state }) => {
                return Ok(FateLabel {
                    kind: FateKind::Diverged,
                    t,
                    state,
                })
            }
            Err(e) => return Err(e),
        };
        if let Some(c) = crossing {
            if c.side == Side::Plus && first_hit.is_none() {
                let hit = FateLabel {
                    kind: FateKind::SectionHit,
                    t: c.time,
                    state: c.state,
                };
                if !follow_through {
                    return Ok(hit);
                }
                first_hit = Some(hit);
            }
        }
        let s = walker.state();
        if s.dist(&eq.plus) < FOCUS_CAPTURE {
            return Ok(FateLabel {
                kind: FateKind::ConvergedToFocusPlus,
                t: walker.t(),
                state: s,
            });
        }
        if s.dist(&eq.minus) < FOCUS_CAPTURE {
            return Ok(FateLabel {
                kind: FateKind::ConvergedToFocusMinus,
                t: walker.t(),
                state: s,
            });
        }
    }
    Ok(first_hit.unwrap_or(FateLabel {
        kind: FateKind::Undecided,
        t: walker.t(),
        state: walker.state(),
    }))
}
