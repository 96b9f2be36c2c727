//! Dormand-Prince 5(4) with Hairer's continuous extension, plus Poincaré
//! section detection on the half-planes `S = {y = 0, z > 0}`.
//!
//! The stepper is generic over the state dimension so the same code drives the
//! phase flow (N = 3), the variational flow (N = 12) and the planar auxiliary
//! and Riccati problems (N = 2). Reverse time is a negative span.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::State;

/// Tolerances and limits shared by every integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Horizon on `|t|`.
    pub t_max: f64,
    pub escape_radius: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 0.2,
            t_max: 500.0,
            escape_radius: 50.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rtol > 0.0
            && self.atol > 0.0
            && self.max_step > 0.0
            && self.t_max > 0.0
            && self.escape_radius > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid integrator config {self:?}"
            )))
        }
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    /// Same settings with both tolerances multiplied by `factor`.
    pub fn scaled_tolerances(mut self, factor: f64) -> Self {
        self.rtol *= factor;
        self.atol *= factor;
        self
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus the embedded fourth-order ones
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step together with its fourth-order interpolant.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    rc: [[f64; N]; 4],
}

impl<const N: usize> DenseStep<N> {
    /// Interpolated state at `t` (any value between `t0` and `t1`).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            let [r2, r3, r4, r5] = [self.rc[0][i], self.rc[1][i], self.rc[2][i], self.rc[3][i]];
            *o = self.y0[i] + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
        }
        out
    }

    pub fn h(&self) -> f64 {
        self.t1 - self.t0
    }
}

/// Adaptive Dormand-Prince stepper for `y' = f(t, y)`.
pub struct Dopri5<F, const N: usize> {
    f: F,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    dir: f64,
    rtol: f64,
    atol: f64,
    max_step: f64,
    escape_radius: Option<f64>,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let ch = h * c;
        for i in 0..N {
            out[i] += ch * k[i];
        }
    }
    out
}

fn phase_norm<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().take(3).map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn as_state<const N: usize>(y: &[f64; N]) -> State {
    let g = |i: usize| if i < N { y[i] } else { 0.0 };
    State::new(g(0), g(1), g(2))
}

impl<F, const N: usize> Dopri5<F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    /// `dir` is the sign of time: `1.0` forward, `-1.0` reverse.
    /// Escape is checked on the norm of the first three components.
    pub fn new(f: F, t0: f64, y0: [f64; N], dir: f64, cfg: &IntegratorConfig) -> Self {
        let k1 = f(t0, &y0);
        let mut s = Self {
            f,
            t: t0,
            y: y0,
            k1,
            h: 0.0,
            dir: if dir < 0.0 { -1.0 } else { 1.0 },
            rtol: cfg.rtol,
            atol: cfg.atol,
            max_step: cfg.max_step,
            escape_radius: Some(cfg.escape_radius),
        };
        s.h = s.initial_step();
        s
    }

    pub fn without_escape(mut self) -> Self {
        self.escape_radius = None;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Replace the current state (e.g. after renormalizing a tangent vector).
    pub fn set_state(&mut self, y: [f64; N]) {
        self.y = y;
        self.k1 = (self.f)(self.t, &y);
    }

    fn err_norm(&self, y0: &[f64; N], y1: &[f64; N], e: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            acc += (e[i] / sc).powi(2);
        }
        (acc / N as f64).sqrt()
    }

    fn initial_step(&self) -> f64 {
        let d0 = self.err_norm(&self.y, &self.y, &self.y);
        let d1 = self.err_norm(&self.y, &self.y, &self.k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            (0.01 * d0 / d1).min(self.max_step)
        };
        let y1 = axpy(&self.y, self.dir * h0, &[(1.0, &self.k1)]);
        let f1 = (self.f)(self.t + self.dir * h0, &y1);
        let mut df = [0.0; N];
        for i in 0..N {
            df[i] = f1[i] - self.k1[i];
        }
        let d2 = self.err_norm(&self.y, &self.y, &df) / h0;
        let h1 = if !d2.is_finite() {
            h0 * 1e-2
        } else if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.max_step)
    }

    /// Take one accepted step, never passing `t_stop` when given.
    pub fn step_until(&mut self, t_stop: Option<f64>) -> Result<DenseStep<N>> {
        let f = &self.f;
        let t = self.t;
        let y = self.y;
        let k1 = self.k1;
        let mut h = self.h.min(self.max_step);
        loop {
            let mut last = false;
            if let Some(ts) = t_stop {
                let remaining = (ts - t) * self.dir;
                if remaining <= h {
                    h = remaining;
                    last = true;
                }
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t });
            }
            let hs = self.dir * h;
            let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                t + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y1 = axpy(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t1 = if last {
                t_stop.unwrap_or(t + hs)
            } else {
                t + hs
            };
            let k7 = f(t1, &y1);
            let mut e = [0.0; N];
            for i in 0..N {
                e[i] = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let err = self.err_norm(&y, &y1, &e);
            if !err.is_finite() {
                h *= 0.2;
                continue;
            }
            if err <= 1.0 {
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                let mut rc = [[0.0; N]; 4];
                for i in 0..N {
                    let r2 = y1[i] - y[i];
                    let r3 = hs * k1[i] - r2;
                    let r4 = r2 - hs * k7[i] - r3;
                    let r5 = hs
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i]);
                    rc[0][i] = r2;
                    rc[1][i] = r3;
                    rc[2][i] = r4;
                    rc[3][i] = r5;
                }
                if !last || fac < 1.0 {
                    self.h = (h * fac).min(self.max_step);
                }
                self.t = t1;
                self.y = y1;
                self.k1 = k7;
                if let Some(r) = self.escape_radius {
                    if phase_norm(&y1) > r || y1.iter().any(|v| !v.is_finite()) {
                        return Err(Error::Escaped {
                            t: t1,
                            state: as_state(&y1),
                        });
                    }
                }
                return Ok(DenseStep {
                    t0: t,
                    t1,
                    y0: y,
                    y1,
                    rc,
                });
            }
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    pub fn step(&mut self) -> Result<DenseStep<N>> {
        self.step_until(None)
    }

    /// Integrate up to exactly `t_end`.
    pub fn advance_to(&mut self, t_end: f64) -> Result<[f64; N]> {
        while (t_end - self.t) * self.dir > 0.0 {
            self.step_until(Some(t_end))?;
        }
        Ok(self.y)
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` and return the end state.
pub fn solve_to<F, const N: usize>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    Dopri5::new(f, t0, y0, (t1 - t0).signum(), cfg)
        .without_escape()
        .advance_to(t1)
}

/// Lifts the polar angle of `(x, y)` to the real line.
#[derive(Debug, Clone, Copy)]
pub struct AngleTracker {
    theta: f64,
    last: f64,
}

impl AngleTracker {
    pub fn new(x: f64, y: f64) -> Self {
        let a = y.atan2(x);
        Self { theta: a, last: a }
    }

    pub fn update(&mut self, x: f64, y: f64) -> f64 {
        let a = y.atan2(x);
        let mut d = a - self.last;
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        self.theta += d;
        self.last = a;
        self.theta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Sub-samples per accepted step used for angle unwrapping and sign scans.
pub const SUBSTEPS: usize = 8;

pub(crate) fn substep_times(step: &DenseStep<3>) -> impl Iterator<Item = f64> + '_ {
    (1..=SUBSTEPS).map(move |j| {
        if j == SUBSTEPS {
            step.t1
        } else {
            step.t0 + step.h() * j as f64 / SUBSTEPS as f64
        }
    })
}

/// Root of `g` along the interpolant between `ta` and `tb` (sign change
/// assumed), by Illinois-modified regula falsi with a bisection fallback.
pub fn refine_root<const N: usize>(
    step: &DenseStep<N>,
    mut ta: f64,
    mut tb: f64,
    g: impl Fn(&[f64; N]) -> f64,
    tol: f64,
) -> (f64, [f64; N]) {
    let mut ga = g(&step.eval(ta));
    let mut gb = g(&step.eval(tb));
    if ga == 0.0 {
        return (ta, step.eval(ta));
    }
    let mut side = 0i8;
    for it in 0..200 {
        let tm = if it % 4 == 3 || gb == ga {
            0.5 * (ta + tb)
        } else {
            let c = tb - gb * (tb - ta) / (gb - ga);
            if (c - ta) * (c - tb) < 0.0 {
                c
            } else {
                0.5 * (ta + tb)
            }
        };
        let ym = step.eval(tm);
        let gm = g(&ym);
        if gm.abs() <= tol || (tb - ta).abs() < 1e-15 * tm.abs().max(1.0) {
            return (tm, ym);
        }
        if gm.signum() == ga.signum() {
            ta = tm;
            ga = gm;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            tb = tm;
            gb = gm;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    let t = 0.5 * (ta + tb);
    (t, step.eval(t))
}

/// Which crossings of `y = 0` count as section events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `y` decreasing through zero.
    Down,
    Up,
    Any,
}

impl Direction {
    fn accepts(self, ya: f64, yb: f64) -> bool {
        match self {
            Direction::Down => ya > 0.0 && yb <= 0.0,
            Direction::Up => ya < 0.0 && yb >= 0.0,
            Direction::Any => (ya > 0.0 && yb <= 0.0) || (ya < 0.0 && yb >= 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// A state on `S = {y = 0, z > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionCrossing {
    pub state: State,
    pub time: f64,
    pub side: Side,
    /// Lifted angle of `(x, y)` accumulated since the start.
    pub theta: f64,
}

/// Tolerance on `|y|` for refined section crossings.
pub const EVENT_TOL: f64 = 1e-10;

/// Streams the section crossings of one trajectory, in order.
pub struct SectionWalker<F> {
    stepper: Dopri5<F, 3>,
    angle: AngleTracker,
    t0: f64,
    t_max: f64,
    direction: Direction,
    pending: Vec<SectionCrossing>,
}

impl<F> SectionWalker<F>
where
    F: Fn(f64, &[f64; 3]) -> [f64; 3],
{
    pub fn new(
        field: F,
        s0: State,
        dir: f64,
        direction: Direction,
        cfg: &IntegratorConfig,
    ) -> Self {
        Self {
            stepper: Dopri5::new(field, 0.0, s0.to_array(), dir, cfg),
            angle: AngleTracker::new(s0.x, s0.y),
            t0: 0.0,
            t_max: cfg.t_max,
            direction,
            pending: Vec::new(),
        }
    }

    pub fn theta(&self) -> f64 {
        self.angle.theta()
    }

    pub fn state(&self) -> State {
        State::from(*self.stepper.y())
    }

    pub fn t(&self) -> f64 {
        self.stepper.t()
    }

    /// Next crossing; `EventNotFound` once the horizon is reached.
    pub fn next_crossing(&mut self) -> Result<SectionCrossing> {
        loop {
            if !self.pending.is_empty() {
                return Ok(self.pending.remove(0));
            }
            if (self.stepper.t() - self.t0).abs() >= self.t_max {
                return Err(Error::EventNotFound {
                    t: self.stepper.t(),
                });
            }
            let step = self.stepper.step()?;
            self.scan(&step);
        }
    }

    /// Returns a queued crossing, or takes one step and returns the first
    /// crossing found inside it. Ignores the horizon.
    pub fn advance(&mut self) -> Result<Option<SectionCrossing>> {
        if self.pending.is_empty() {
            let step = self.stepper.step()?;
            self.scan(&step);
        }
        Ok(if self.pending.is_empty() {
            None
        } else {
            Some(self.pending.remove(0))
        })
    }

    fn scan(&mut self, step: &DenseStep<3>) {
        let mut ta = step.t0;
        let mut ya = step.y0;
        for tb in substep_times(step) {
            let yb = step.eval(tb);
            if self.direction.accepts(ya[1], yb[1]) {
                let (tc, yc) = refine_root(step, ta, tb, |s| s[1], EVENT_TOL * 0.01);
                if yc[2] > 0.0 {
                    let theta = self.angle.update(yc[0], yc[1]);
                    self.pending.push(SectionCrossing {
                        state: State::new(yc[0], yc[1], yc[2]),
                        time: tc,
                        side: Side::of(yc[0]),
                        theta,
                    });
                }
            }
            self.angle.update(yb[0], yb[1]);
            ta = tb;
            ya = yb;
        }
    }
}

/// First crossing of `S` in the requested direction.
pub fn integrate_to_section<F>(
    field: F,
    s0: State,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<SectionCrossing>
where
    F: Fn(f64, &[f64; 3]) -> [f64; 3],
{
    integrate_to_section_dir(field, s0, 1.0, direction, cfg)
}

/// As [`integrate_to_section`] with an explicit time direction.
pub fn integrate_to_section_dir<F>(
    field: F,
    s0: State,
    dir: f64,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<SectionCrossing>
where
    F: Fn(f64, &[f64; 3]) -> [f64; 3],
{
    cfg.validate()?;
    if s0.y.abs() <= EVENT_TOL {
        return Err(Error::InvalidInput(format!(
            "start point already on the section: {s0:?}"
        )));
    }
    SectionWalker::new(field, s0, dir, direction, cfg).next_crossing()
}

/// Sampled trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> Option<(f64, State)> {
        Some((*self.t.last()?, *self.states.last()?))
    }

    /// Columns `t,x,y,z`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,y,z")?;
        for (t, s) in self.t.iter().zip(&self.states) {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(*t),
                fmt17(s.x),
                fmt17(s.y),
                fmt17(s.z)
            )?;
        }
        Ok(())
    }
}

/// Decimal rendering with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

/// Integrate over `t_span` (negative for reverse time). With `sample_dt` the
/// trajectory is sampled on a uniform grid through the dense output, otherwise
/// every accepted step is recorded.
pub fn integrate<F>(
    field: F,
    s0: State,
    t_span: f64,
    sample_dt: Option<f64>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64; 3]) -> [f64; 3],
{
    cfg.validate()?;
    if !t_span.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite span {t_span}")));
    }
    let dir = if t_span < 0.0 { -1.0 } else { 1.0 };
    let mut out = Trajectory {
        t: vec![0.0],
        states: vec![s0],
    };
    if t_span == 0.0 {
        return Ok(out);
    }
    let mut st = Dopri5::new(field, 0.0, s0.to_array(), dir, cfg);
    let mut next_sample = sample_dt.map(|dt| dt.abs() * dir);
    while (t_span - st.t()) * dir > 0.0 {
        let step = st.step_until(Some(t_span))?;
        match (&mut next_sample, sample_dt) {
            (Some(ns), Some(dt)) => {
                while (*ns - step.t1) * dir <= 1e-12 * dt.abs() && (*ns - t_span) * dir <= 0.0 {
                    out.t.push(*ns);
                    out.states.push(State::from(step.eval(*ns)));
                    *ns += dt.abs() * dir;
                }
            }
            _ => {
                out.t.push(step.t1);
                out.states.push(State::from(step.y1));
            }
        }
    }
    if out.t.last().is_some_and(|&t| (t - t_span).abs() > 1e-9) {
        out.t.push(st.t());
        out.states.push(State::from(*st.y()));
    }
    Ok(out)
}
