//! Vector fields, equilibria, spectra and the parameter/coordinate maps between
//! the generalized Lorenz family and its universal normal form (UNF)
//!
//! ```text
//! x' = y
//! y' = -(x^2 + z - 1) x - lambda y
//! z' = -alpha z + beta x^2
//! ```

use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half-width of the band around `lambda = A` treated as the Tigan line.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

pub type Matrix3 = [[f64; 3]; 3];

/// Parameters `(lambda, alpha, beta)` of the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnfParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl UnfParams {
    pub fn new(lambda: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(lambda.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite parameters ({lambda}, {alpha}, {beta})"
            )));
        }
        Ok(Self {
            lambda,
            alpha,
            beta,
        })
    }

    /// Characteristic parameter `A = (alpha + beta) / 2`.
    pub fn a(&self) -> f64 {
        characteristic_a(self)
    }

    /// Height `1 + lambda^2/4` where the linearization along the z-axis turns
    /// from node to focus.
    pub fn focus_height(&self) -> f64 {
        1.0 + 0.25 * self.lambda * self.lambda
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if self.lambda > 0.0 && self.alpha > 0.0 && self.beta > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidDomain(format!(
                "positive parameters required, got {self:?}"
            )))
        }
    }
}

/// Parameters `(a, b, r, q)` of the generalized Lorenz system
///
/// ```text
/// x' = -a (x - y)
/// y' = (r - z) x - q y
/// z' = x y - b z
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlParams {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub q: f64,
}

impl GlParams {
    pub fn new(a: f64, b: f64, r: f64, q: f64) -> Self {
        Self { a, b, r, q }
    }

    pub fn lorenz(a: f64, b: f64, r: f64) -> Self {
        Self::new(a, b, r, 1.0)
    }

    pub fn chen(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c - a, -c)
    }

    pub fn lu(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, 0.0, -c)
    }

    pub fn tigan(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, b, c - a, 0.0)
    }

    /// Time scale `omega = 1/sqrt(a (r - q))` of the conjugacy.
    pub fn omega(&self) -> Result<f64> {
        let d = self.a * (self.r - self.q);
        if d > 0.0 && d.is_finite() {
            Ok(1.0 / d.sqrt())
        } else {
            Err(Error::InvalidDomain(format!(
                "a (r - q) = {d} must be positive"
            )))
        }
    }
}

/// A point of the three-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State {
    pub const ORIGIN: State = State {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Image under the involution `(x, y, z) -> (-x, -y, z)`.
    pub fn mirror(self) -> Self {
        Self::new(-self.x, -self.y, self.z)
    }

    pub fn dist(&self, other: &State) -> f64 {
        (*self - *other).norm()
    }
}

impl From<[f64; 3]> for State {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for State {
    type Output = State;
    fn add(self, o: State) -> State {
        State::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, o: State) -> State {
        State::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for State {
    type Output = State;
    fn mul(self, k: f64) -> State {
        State::new(self.x * k, self.y * k, self.z * k)
    }
}

pub fn unf_vector_field(p: &UnfParams, s: &State) -> State {
    State::new(
        s.y,
        -(s.x * s.x + s.z - 1.0) * s.x - p.lambda * s.y,
        -p.alpha * s.z + p.beta * s.x * s.x,
    )
}

pub fn unf_jacobian(p: &UnfParams, s: &State) -> Matrix3 {
    [
        [0.0, 1.0, 0.0],
        [-(3.0 * s.x * s.x + s.z - 1.0), -p.lambda, -s.x],
        [2.0 * p.beta * s.x, 0.0, -p.alpha],
    ]
}

pub fn gl_vector_field(g: &GlParams, s: &State) -> State {
    State::new(
        -g.a * (s.x - s.y),
        (g.r - s.z) * s.x - g.q * s.y,
        s.x * s.y - g.b * s.z,
    )
}

/// The saddle `O` and the symmetric pair `E+`, `E-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibria {
    pub origin: State,
    pub plus: State,
    pub minus: State,
}

pub fn equilibria(p: &UnfParams) -> Result<Equilibria> {
    let sum = p.alpha + p.beta;
    if sum == 0.0 {
        return Err(Error::DegenerateParameters(
            "alpha + beta = 0: only the origin is an equilibrium".into(),
        ));
    }
    let x2 = p.alpha / sum;
    if x2 < 0.0 {
        return Err(Error::DegenerateParameters(format!(
            "alpha / (alpha + beta) = {x2} < 0: E+- are not real"
        )));
    }
    let plus = State::new(x2.sqrt(), 0.0, p.beta / sum);
    Ok(Equilibria {
        origin: State::ORIGIN,
        plus,
        minus: plus.mirror(),
    })
}

/// Shilnikov saddle quantity `(1 - alpha^2)/alpha - lambda`, undefined at `alpha = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SaddleQuantity {
    Value(f64),
    AlphaZero,
}

impl SaddleQuantity {
    /// `true` when the leading direction is the weak z-axis (`sigma > 0`).
    pub fn is_shilnikov(&self) -> bool {
        match *self {
            SaddleQuantity::Value(v) => v > 0.0,
            SaddleQuantity::AlphaZero => true,
        }
    }
}

/// Characteristic exponents of the saddle `O`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleSpectrum {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub sigma: SaddleQuantity,
}

pub fn saddle_spectrum(p: &UnfParams) -> SaddleSpectrum {
    let (e1, e2) = planar_saddle_exponents(p.lambda);
    let sigma = if p.alpha == 0.0 {
        SaddleQuantity::AlphaZero
    } else {
        SaddleQuantity::Value((1.0 - p.alpha * p.alpha) / p.alpha - p.lambda)
    };
    SaddleSpectrum {
        e1,
        e2,
        e3: -p.alpha,
        sigma,
    }
}

/// Roots of `mu^2 + lambda mu - 1 = 0`, written so that `e1 * e2 = -1` holds to
/// rounding for every `lambda` (the small root is taken from the product).
pub(crate) fn planar_saddle_exponents(lambda: f64) -> (f64, f64) {
    let r = (0.25 * lambda * lambda + 1.0).sqrt();
    let h = 0.5 * lambda;
    if h >= 0.0 {
        let e2 = -h - r;
        (-1.0 / e2, e2)
    } else {
        let e1 = -h + r;
        (e1, -1.0 / e1)
    }
}

/// Damping `lambda_s(alpha, beta)` at which `E+-` undergo the Andronov-Hopf
/// bifurcation; the foci are stable for `lambda > lambda_s`.
pub fn hopf_threshold(alpha: f64, beta: f64) -> Result<f64> {
    let sum = alpha + beta;
    if sum == 0.0 {
        return Err(Error::DegenerateParameters("alpha + beta = 0".into()));
    }
    let m = 2.0 + alpha * beta + alpha * alpha;
    let disc = m * m + 8.0 * beta * sum;
    if disc < 0.0 {
        return Err(Error::DegenerateParameters(format!(
            "negative radicand {disc}"
        )));
    }
    Ok((disc.sqrt() - m) / (2.0 * sum))
}

/// Coordinate and time map from the generalized Lorenz system to the UNF.
pub fn map_v(g: &GlParams, s: &State, t: f64) -> Result<(State, f64)> {
    let w = g.omega()?;
    let w2 = w * w;
    Ok((
        State::new(
            w * s.x / SQRT_2,
            w2 * g.a * (s.y - s.x) / SQRT_2,
            w2 * (g.a * s.z - 0.5 * s.x * s.x),
        ),
        t / w,
    ))
}

pub fn map_v_inverse(g: &GlParams, s: &State, t: f64) -> Result<(State, f64)> {
    let w = g.omega()?;
    let x = SQRT_2 * s.x / w;
    Ok((
        State::new(
            x,
            SQRT_2 * (s.x + s.y / (g.a * w)) / w,
            (s.z + s.x * s.x) / (g.a * w * w),
        ),
        w * t,
    ))
}

/// Parameter map `(a, b, r, q) -> (lambda, alpha, beta)`.
pub fn map_p(g: &GlParams) -> Result<UnfParams> {
    if !(g.a > 0.0 && g.b > 0.0) {
        return Err(Error::InvalidDomain(format!(
            "a, b must be positive: {g:?}"
        )));
    }
    if !(g.r > g.q && g.q > -g.a) {
        return Err(Error::InvalidDomain(format!("r > q > -a violated: {g:?}")));
    }
    let w = g.omega()?;
    let beta = (2.0 * g.a - g.b) * w;
    if beta <= 0.0 {
        return Err(Error::NonPositiveBeta { beta });
    }
    UnfParams::new((g.q + g.a) * w, g.b * w, beta)
}

pub fn characteristic_a(p: &UnfParams) -> f64 {
    0.5 * (p.alpha + p.beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Zone {
    LorenzLike,
    ChenLike,
    TiganBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub zone: Zone,
    pub on_chen_curve: bool,
    pub on_lu_curve: bool,
}

/// Lorenz-like (`lambda > A`), Chen-like (`lambda < A`) or the Tigan line,
/// plus membership of the Chen curve `lambda = (A^2-1)/(2A)` and the Lu curve
/// `lambda = (A^2-1)/A`. `tol` is relative to `max(1, A)`.
pub fn classify_region(p: &UnfParams, tol: f64) -> RegionLabel {
    let a = characteristic_a(p);
    let band = tol * a.abs().max(1.0);
    let zone = if p.lambda > a + band {
        Zone::LorenzLike
    } else if p.lambda < a - band {
        Zone::ChenLike
    } else {
        Zone::TiganBoundary
    };
    let (on_chen_curve, on_lu_curve) = if a > 1.0 {
        let chen = (a * a - 1.0) / (2.0 * a);
        let lu = (a * a - 1.0) / a;
        (
            (p.lambda - chen).abs() <= band,
            (p.lambda - lu).abs() <= band,
        )
    } else {
        (false, false)
    };
    RegionLabel {
        zone,
        on_chen_curve,
        on_lu_curve,
    }
}

/// The normal form rescaled by `x -> sqrt(beta/alpha) x`, `y -> sqrt(beta/alpha) y`:
///
/// ```text
/// x' = y
/// y' = -(mu x^2 + z - 1) x - lambda y
/// z' = alpha (x^2 - z)
/// ```
///
/// which is the Shimizu-Morioka system in the limit `mu -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShimizuMorioka {
    pub mu: f64,
    pub lambda: f64,
    pub alpha: f64,
    /// Factor `sqrt(beta/alpha)` applied to `x` and `y`.
    pub scale: f64,
}

impl ShimizuMorioka {
    pub fn vector_field(&self, s: &State) -> State {
        State::new(
            s.y,
            -(self.mu * s.x * s.x + s.z - 1.0) * s.x - self.lambda * s.y,
            self.alpha * (s.x * s.x - s.z),
        )
    }

    pub fn to_rescaled(&self, s: &State) -> State {
        State::new(self.scale * s.x, self.scale * s.y, s.z)
    }

    pub fn from_rescaled(&self, s: &State) -> State {
        State::new(s.x / self.scale, s.y / self.scale, s.z)
    }
}

pub fn shimizu_rescale(p: &UnfParams) -> Result<ShimizuMorioka> {
    if p.beta <= 0.0 {
        return Err(Error::DegenerateParameters(format!(
            "beta = {} must be positive",
            p.beta
        )));
    }
    if p.alpha <= 0.0 {
        return Err(Error::DegenerateParameters(format!(
            "alpha = {} must be positive",
            p.alpha
        )));
    }
    Ok(ShimizuMorioka {
        mu: p.alpha / p.beta,
        lambda: p.lambda,
        alpha: p.alpha,
        scale: (p.beta / p.alpha).sqrt(),
    })
}
