//! Dolbeault calculus on compact Hermitian models and the Monge-Ampère volume
//! conditions built on it.
//!
//! Forms are sparse maps from `(I, J)` multi-indices to coefficients in one of
//! three backends (see [`fields`]). On top of that sit the `∂`, `∂̄` operators
//! ([`calculus`]), compact models with exact integration ([`manifolds`]), the
//! perturbed volume functional ([`monge_ampere`]) and the six equivalent
//! conditions with their cross-checks ([`characterize`]).

pub mod calculus;
pub mod characterize;
pub mod error;
pub mod exterior;
pub mod fields;
pub mod manifolds;
pub mod monge_ampere;
pub mod presets;
pub mod random;
pub mod scenario;

pub use error::{Error, Result};

/// Largest supported complex dimension.
pub const MAX_DIM: usize = 6;
/// Real axes of the largest torus.
pub const MAX_AXES: usize = 2 * MAX_DIM;
