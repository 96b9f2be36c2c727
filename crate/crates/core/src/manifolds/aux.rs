//! Planar bounds and predictors: the separatrix of the 2D auxiliary system,
//! the absorbing layer around `I`, and the small-`alpha` landing height of `W^u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::planar_saddle_exponents;
use crate::ode::{refine_root, Dopri5, IntegratorConfig};

/// First crossing of the positive x-axis by the stable separatrix of the
/// saddle of `x' = y, y' = -(x^2 - 1) x - lambda y`, traced in reverse time.
/// It bounds `|x|` on the first intersection of `W^s` with the section.
pub fn aux_separatrix_x0(lambda: f64, cfg: &IntegratorConfig) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidDomain(format!(
            "lambda = {lambda} must be non-negative"
        )));
    }
    let (_, e2) = planar_saddle_exponents(lambda);
    let delta = 1e-7;
    let inner = IntegratorConfig {
        rtol: cfg.rtol.min(1e-12),
        atol: cfg.atol.min(1e-14),
        max_step: 0.05,
        ..*cfg
    };
    let f = move |_: f64, s: &[f64; 2]| [s[1], -(s[0] * s[0] - 1.0) * s[0] - lambda * s[1]];
    let mut st = Dopri5::new(f, 0.0, [delta, e2 * delta], -1.0, &inner).without_escape();
    while st.t() > -200.0 {
        let step = st.step()?;
        if step.y0[1] < 0.0 && step.y1[1] >= 0.0 {
            let (_, s) = refine_root(&step, step.t0, step.t1, |s| s[1], 1e-15);
            if s[0] > 0.0 {
                return Ok(s[0]);
            }
        }
        if step.y1[0] > 1e3 {
            break;
        }
    }
    Err(Error::NoConvergence(format!(
        "separatrix did not reach the x-axis for lambda = {lambda}"
    )))
}

/// Heights `(z1, z2)` between which the quadratic part of `-V'` for
/// `V = c1 x^2/2 + x^4/4 + c2 x y + y^2/2`,
///
/// ```text
/// c2 (z - 1) x^2 - (C - z) x y + (lambda - c2) y^2,   C = c1 + 1 - lambda c2,
/// ```
///
/// is positive definite, so orbits in the layer are pulled towards `I`.
/// Definiteness needs `B (z - 1) > (C - z)^2` with `B = 4 c2 (lambda - c2)`,
/// whose roots are `C + B/2 -+ sqrt(B C + B^2/4 - B)`.
pub fn absorbing_layer(lambda: f64, c1: f64, c2: f64) -> Result<(f64, f64)> {
    if !(c2 > 0.0 && c1 > c2 * c2) {
        return Err(Error::InvalidDomain(format!(
            "need c1 > c2^2 > 0, got c1 = {c1}, c2 = {c2}"
        )));
    }
    if lambda <= c2 {
        return Err(Error::InvalidDomain(format!(
            "need lambda > c2, got {lambda} <= {c2}"
        )));
    }
    let b = 4.0 * c2 * (lambda - c2);
    let c = c1 + 1.0 - lambda * c2;
    let rad = b * c + 0.25 * b * b - b;
    if rad < 0.0 {
        return Err(Error::InvalidDomain(format!(
            "empty layer: radicand {rad} < 0"
        )));
    }
    let r = rad.sqrt();
    Ok((c + 0.5 * b - r, c + 0.5 * b + r))
}

/// Smallest eigenvalue of the symmetric matrix of the layer form at height `z`.
pub fn layer_form_min_eigenvalue(lambda: f64, c1: f64, c2: f64, z: f64) -> f64 {
    let c = c1 + 1.0 - lambda * c2;
    let (a, d, off) = (c2 * (z - 1.0), lambda - c2, -0.5 * (c - z));
    let mean = 0.5 * (a + d);
    mean - (0.25 * (a - d) * (a - d) + off * off).sqrt()
}

/// Polar data of a point entering the neighbourhood of `I` at height `z0`,
/// for the linear solution `x = rho e^{-lambda t/2} sin(Omega t + phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaunchData {
    pub z0: f64,
    pub rho: f64,
    pub phi: f64,
    pub omega: f64,
}

pub fn launch_data(lambda: f64, z0: f64, x0: f64, y0: f64) -> Result<LaunchData> {
    let om2 = z0 - 1.0 - 0.25 * lambda * lambda;
    if om2 <= 0.0 {
        return Err(Error::InvalidDomain(format!(
            "z0 = {z0} is not above the focus height"
        )));
    }
    let omega = om2.sqrt();
    // x0 = rho sin(phi), y0 = rho (Omega cos(phi) - lambda/2 sin(phi))
    let c = (y0 + 0.5 * lambda * x0) / omega;
    Ok(LaunchData {
        z0,
        rho: x0.hypot(c),
        phi: x0.atan2(c),
        omega,
    })
}

/// Closed form of `int_0^inf e^{-lambda t} sin^2(Omega t + phi) dt`.
pub fn m_infinity(lambda: f64, omega: f64, phi: f64) -> f64 {
    let tp = 2.0 * phi;
    0.5 / lambda
        - 0.5 * (lambda * tp.cos() - 2.0 * omega * tp.sin())
            / (lambda * lambda + 4.0 * omega * omega)
}

/// Height `z0 + beta rho^2 M_inf` at which `W^u` settles on `I` when `alpha = 0`.
pub fn small_alpha_zu(
    beta: f64,
    z0: f64,
    rho: f64,
    phi: f64,
    lambda: f64,
    omega: f64,
) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::InvalidDomain(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    let om2 = z0 - 1.0 - 0.25 * lambda * lambda;
    if om2 <= 0.0 || omega <= 0.0 {
        return Err(Error::InvalidDomain(format!(
            "Omega^2 = {om2} must be positive"
        )));
    }
    if (omega * omega - om2).abs() > 1e-9 * om2.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "Omega = {omega} inconsistent with z0 - 1 - lambda^2/4 = {om2}"
        )));
    }
    Ok(z0 + beta * rho * rho * m_infinity(lambda, omega, phi))
}
