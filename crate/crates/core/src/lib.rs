//! Numerical toolkit for the universal normal form of the Lorenz/Chen family.
//!
//! The normal form
//!
//! ```text
//! x' = y
//! y' = -(x^2 + z - 1) x - lambda y
//! z' = -alpha z + beta x^2
//! ```
//!
//! is conjugate to every member of the generalized Lorenz family (Lorenz, Chen,
//! Lu, Tigan) through [`model::map_v`] and [`model::map_p`]. On top of that the
//! crate computes the invariant manifolds of the saddle at the origin, the split
//! function whose zeros are (twisted) homoclinic bifurcations, the largest
//! Lyapunov exponent, and deterministic parallel sweeps of the parameter plane.

pub mod error;
pub mod homoclinic;
pub mod lyapunov;
pub mod manifolds;
pub mod model;
pub mod ode;
pub mod serde_f64;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{GlParams, State, UnfParams};
pub use ode::IntegratorConfig;

/// The normal-form vector field as a closure usable by the integrators.
pub fn unf_field(p: UnfParams) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Copy {
    move |_, y| model::unf_vector_field(&p, &State::from(*y)).to_array()
}
