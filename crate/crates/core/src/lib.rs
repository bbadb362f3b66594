//! Entangled probes for discriminating and estimating unknown quantum
//! transformations.
//!
//! - [`linops`]: dense complex kernel (tensor products, partial traces,
//!   the `|A>>` correspondence, entropies, unitary eigendecomposition).
//! - [`discrim`]: unitary groups, output ensembles of entangled probes,
//!   Helstrom discrimination, the eigenvalue-polygon overlap rule and
//!   covariant POVMs.
//! - [`gauss`]: Gaussian one- and two-mode states, displacement noise,
//!   heterodyne statistics, PPT separability and photon budgets.
//! - [`mc`]: seeded Monte Carlo validation of the analytic results.

pub mod discrim;
pub mod error;
pub mod gauss;
pub mod linops;
pub mod mc;
pub mod sample;

pub use error::{Error, Result};
pub use linops::{ComplexMatrix, ProbeState, C64};
