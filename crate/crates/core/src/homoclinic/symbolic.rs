use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homoclinic::{FateKind, FateLabel};
use crate::manifolds::unstable::FOCUS_CAPTURE;
use crate::model::{equilibria, State, UnfParams};
use crate::ode::{refine_root, substep_times, AngleTracker, Dopri5, IntegratorConfig, EVENT_TOL};
use crate::unf_field;

/// Whole half-turns contained in an unwrapped angle.
pub fn winding_half_turns(theta_total: f64) -> u32 {
    ((theta_total.abs() + 1e-9) / PI).floor() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolSide {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub side: SymbolSide,
    /// Half-turns around `I` made above the focus height since the previous symbol.
    pub half_turns: u32,
}

/// One symbol per loop around `E+` (R) or `E-` (L).
///
/// A loop is marked by the outer turning point of `x` below the focus height
/// `1 + lambda^2/4`: a maximum with `x > 0` or a minimum with `x < 0`. Rotation
/// about `I` above that height is what the half-turn count records.
/// `cfg.t_max` bounds the time between consecutive symbols.
pub fn symbolic_sequence(
    p: &UnfParams,
    s0: State,
    n_symbols: usize,
    cfg: &IntegratorConfig,
) -> Result<Vec<Symbol>> {
    cfg.validate()?;
    let eq = equilibria(p)?;
    let z_f = p.focus_height();
    let mut st = Dopri5::new(unf_field(*p), 0.0, s0.to_array(), 1.0, cfg);
    let mut angle = AngleTracker::new(s0.x, s0.y);
    let mut twist = 0.0;
    let mut last_symbol_t = 0.0;
    let mut out = Vec::with_capacity(n_symbols);
    while out.len() < n_symbols {
        if st.t() - last_symbol_t > cfg.t_max {
            let fate = FateLabel {
                kind: FateKind::Undecided,
                t: st.t(),
                state: State::from(*st.y()),
            };
            return Err(Error::FateInterference {
                fate,
                bracket: None,
            });
        }
        let step = match st.step() {
            Ok(s) => s,
            Err(Error::Escaped { t, state }) => {
                let fate = FateLabel {
                    kind: FateKind::Diverged,
                    t,
                    state,
                };
                return Err(Error::FateInterference {
                    fate,
                    bracket: None,
                });
            }
            Err(e) => return Err(e),
        };
        let mut ta = step.t0;
        let mut ya = step.y0;
        let mut prev_theta = angle.theta();
        for tb in substep_times(&step) {
            let yb = step.eval(tb);
            let theta = angle.update(yb[0], yb[1]);
            if 0.5 * (ya[2] + yb[2]) > z_f {
                twist += theta - prev_theta;
            }
            prev_theta = theta;
            let down = ya[1] > 0.0 && yb[1] <= 0.0;
            let up = ya[1] < 0.0 && yb[1] >= 0.0;
            if down || up {
                let (tc, yc) = refine_root(&step, ta, tb, |s| s[1], EVENT_TOL * 0.01);
                let side = match (down, yc[0] > 0.0) {
                    (true, true) => Some(SymbolSide::R),
                    (false, false) => Some(SymbolSide::L),
                    _ => None,
                };
                if let (Some(side), true) = (side, yc[2] <= z_f) {
                    if out.len() < n_symbols {
                        out.push(Symbol {
                            side,
                            half_turns: winding_half_turns(twist),
                        });
                    }
                    twist = 0.0;
                    last_symbol_t = tc;
                }
            }
            ta = tb;
            ya = yb;
        }
        let s = State::from(step.y1);
        if s.dist(&eq.plus) < FOCUS_CAPTURE || s.dist(&eq.minus) < FOCUS_CAPTURE {
            let kind = if s.x > 0.0 {
                FateKind::ConvergedToFocusPlus
            } else {
                FateKind::ConvergedToFocusMinus
            };
            let fate = FateLabel {
                kind,
                t: step.t1,
                state: s,
            };
            return Err(Error::FateInterference {
                fate,
                bracket: None,
            });
        }
    }
    Ok(out)
}

/// Columns `index,side,half_turns`.
pub fn write_symbols_csv<W: Write>(symbols: &[Symbol], mut w: W) -> std::io::Result<()> {
    writeln!(w, "index,side,half_turns")?;
    for (i, s) in symbols.iter().enumerate() {
        let side = match s.side {
            SymbolSide::L => "L",
            SymbolSide::R => "R",
        };
        writeln!(w, "{i},{side},{}", s.half_turns)?;
    }
    Ok(())
}
