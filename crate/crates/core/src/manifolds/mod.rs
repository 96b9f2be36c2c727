//! Invariant manifolds of the saddle `O` and the section geometry around `I`.

pub mod aux;
pub mod riccati;
pub mod stable;
pub mod unstable;

pub use aux::{
    absorbing_layer, aux_separatrix_x0, launch_data, m_infinity, small_alpha_zu, LaunchData,
};
pub use riccati::{domains_b, riccati_tau, DomainB, RiccatiLadder};
pub use stable::{
    classify_on_section, classify_point, stable_curve, stable_x_at, SaddlePassage, Settle,
    StableCurve, NEAR_AXIS,
};
pub use unstable::{shoot_unstable, wu_seed, UnstableHit, DEFAULT_DELTA};
