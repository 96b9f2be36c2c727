use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homoclinic::{FateKind, FateLabel};
use crate::manifolds::aux::aux_separatrix_x0;
use crate::manifolds::stable::{classify_point, ray_boundary, SaddlePassage, Settle};
use crate::manifolds::unstable::{shoot_unstable, UnstableHit, DEFAULT_DELTA};
use crate::model::{State, UnfParams};
use crate::ode::{IntegratorConfig, Side};

/// `Delta_k = x_u - x^s(z_u)` together with the twist data of `p^u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub k: u32,
    pub delta: f64,
    /// Half-turns of the orbit of `p^u` around `I` before it returns to the saddle.
    pub half_turns: u32,
    /// `p^u` lies between `I` and the `k`-th sheet of `W^s`; equivalent to `delta < 0`.
    pub inside: bool,
    pub x_u: f64,
    pub z_u: f64,
    /// Where the `k`-th sheet crosses the ray through `p^u` (0 when it does not).
    pub x_s: f64,
}

/// Cheap part of the split function: `p^u` and the passage of its orbit past the saddle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSide {
    pub hit: UnstableHit,
    pub passage: SaddlePassage,
}

impl SplitSide {
    pub fn inside(&self, k: u32) -> bool {
        self.passage.index() <= k
    }
}

fn interference(kind: FateKind, t: f64, state: State) -> Error {
    Error::FateInterference {
        fate: FateLabel { kind, t, state },
        bracket: None,
    }
}

fn focus_kind(s: &State) -> FateKind {
    if s.x >= 0.0 {
        FateKind::ConvergedToFocusPlus
    } else {
        FateKind::ConvergedToFocusMinus
    }
}

pub fn split_side(p: &UnfParams, cfg: &IntegratorConfig) -> Result<SplitSide> {
    let hit = match shoot_unstable(p, DEFAULT_DELTA, cfg) {
        Ok(h) => h,
        Err(Error::ConvergedToFocus { t, state }) => {
            return Err(interference(focus_kind(&state), t, state))
        }
        Err(Error::Escaped { t, state }) => return Err(interference(FateKind::Diverged, t, state)),
        Err(Error::EventNotFound { t }) => {
            return Err(interference(FateKind::Undecided, t, State::ORIGIN))
        }
        Err(e) => return Err(e),
    };
    let passage = classify_point(p, hit.point(), cfg)?;
    match passage.settle {
        Settle::Diverged => Err(interference(FateKind::Diverged, passage.t, passage.state)),
        Settle::Undecided => Err(interference(FateKind::Undecided, passage.t, passage.state)),
        Settle::Committed | Settle::Focus => Ok(SplitSide { hit, passage }),
    }
}

/// `Delta_k` for the twist `k` made by the orbit of `p^u` itself.
pub fn split_function(p: &UnfParams, cfg: &IntegratorConfig) -> Result<SplitResult> {
    let side = split_side(p, cfg)?;
    split_from_side(p, &side, side.passage.half_turns, cfg)
}

/// `Delta_k` for a prescribed `k`.
pub fn split_function_k(p: &UnfParams, k: u32, cfg: &IntegratorConfig) -> Result<SplitResult> {
    let side = split_side(p, cfg)?;
    split_from_side(p, &side, k, cfg)
}

fn split_from_side(
    p: &UnfParams,
    side: &SplitSide,
    k: u32,
    cfg: &IntegratorConfig,
) -> Result<SplitResult> {
    let (x_u, z_u) = (side.hit.x_u, side.hit.z_u);
    let inside = side.inside(k);
    let x_limit = 1.1 * aux_separatrix_x0(p.lambda, cfg)?.max(x_u);
    let found = ray_boundary(p, z_u, x_u, inside, x_limit, |c| c.index() <= k, cfg)?;
    let x_s = match (found, inside) {
        (Some(x), _) => x,
        (None, false) => 0.0,
        (None, true) => {
            return Err(Error::NoConvergence(format!(
                "no sheet of W^s beyond p^u below x = {x_limit}"
            )));
        }
    };
    Ok(SplitResult {
        k,
        delta: x_u - x_s,
        half_turns: side.passage.half_turns,
        inside,
        x_u,
        z_u,
        x_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Oriented,
    NonOriented,
}

impl Orientation {
    pub fn of(k: u32) -> Self {
        if k.is_multiple_of(2) {
            Orientation::Oriented
        } else {
            Orientation::NonOriented
        }
    }
}

/// A located homoclinic bifurcation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub params: UnfParams,
    pub k: u32,
    pub orientation: Orientation,
    /// `|Delta_k|` at the accepted parameter.
    pub residual: f64,
    pub half_turns: u32,
    /// Final bracket in the continuation parameter.
    pub bracket: (f64, f64),
}

fn with_bracket(e: Error, lo: f64, hi: f64) -> Error {
    match e {
        Error::FateInterference { fate, .. } => Error::FateInterference {
            fate,
            bracket: Some((lo, hi)),
        },
        other => other,
    }
}

fn locate(
    make: impl Fn(f64) -> Result<UnfParams>,
    k: u32,
    bracket: (f64, f64),
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<BifurcationPoint> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad bracket {bracket:?} or tolerance {tol}"
        )));
    }
    let eval =
        |v: f64, lo: f64, hi: f64| split_side(&make(v)?, cfg).map_err(|e| with_bracket(e, lo, hi));
    let mut s_lo = eval(lo, lo, hi)?;
    let mut s_hi = eval(hi, lo, hi)?;
    let in_lo = s_lo.inside(k);
    if in_lo == s_hi.inside(k) {
        let f = |v: f64, s: &SplitSide| -> f64 {
            split_from_side(&make(v).expect("validated"), s, k, cfg)
                .map(|r| r.delta)
                .unwrap_or(f64::NAN)
        };
        return Err(Error::BracketNotSignChanging {
            lo,
            hi,
            f_lo: f(lo, &s_lo),
            f_hi: f(hi, &s_hi),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let s = eval(mid, lo, hi)?;
        if s.inside(k) == in_lo {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
            s_hi = s;
        }
    }
    let root = 0.5 * (lo + hi);
    for s in [&s_lo, &s_hi] {
        if s.passage.half_turns != k {
            return Err(Error::TwistMismatch {
                expected: k,
                found: s.passage.half_turns,
                param: root,
            });
        }
    }
    let params = make(root)?;
    let side = split_side(&params, cfg).map_err(|e| with_bracket(e, lo, hi))?;
    let residual = split_from_side(&params, &side, k, cfg)?.delta.abs();
    Ok(BifurcationPoint {
        params,
        k,
        orientation: Orientation::of(k),
        residual,
        half_turns: k,
        bracket: (lo, hi),
    })
}

/// Damping `lambda_0(alpha, beta)` of the primary (untwisted) homoclinic butterfly.
pub fn find_lambda0(
    alpha: f64,
    beta: f64,
    bracket: (f64, f64),
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<BifurcationPoint> {
    find_lambda_k(alpha, beta, 0, bracket, tol, cfg)
}

/// Damping at which the orbit with `k` half-turns is homoclinic, at fixed `alpha`.
pub fn find_lambda_k(
    alpha: f64,
    beta: f64,
    k: u32,
    bracket: (f64, f64),
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<BifurcationPoint> {
    locate(|l| UnfParams::new(l, alpha, beta), k, bracket, tol, cfg)
}

/// Relaxation rate `alpha_k(lambda, beta)` of the homoclinic orbit with `k` half-turns.
pub fn find_alpha_k(
    lambda: f64,
    beta: f64,
    k: u32,
    bracket: (f64, f64),
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<BifurcationPoint> {
    locate(|a| UnfParams::new(lambda, a, beta), k, bracket, tol, cfg)
}

impl SplitSide {
    pub fn exit(&self) -> Side {
        self.passage.exit
    }
}
