//! Spectral graph analysis and nth-order linear consensus dynamics over
//! bounded-degree undirected weighted graphs.
//!
//! The crate is organized around four layers:
//!
//! - [`graph`]: graph representation, Laplacians, degree-bound validation,
//!   and three-way bottleneck partitions with their eigenvalue bounds.
//! - [`generators`]: deterministic and seeded-random constructors for the
//!   graph families under comparison (paths, rings, tori, barbells,
//!   random regular graphs via the configuration model).
//! - [`spectral`]: algebraic connectivity, grounded eigenvalue, Cheeger
//!   constants (exact and sweep-cut), and expander-trend classification.
//! - [`dynamics`]: block-companion consensus closed loops, stability
//!   analysis, fixed-step RK4 simulation with disturbance/grounding
//!   events, and H-infinity sensitivity (closed form and frequency sweep).
//!
//! Dense symmetric eigensolves go through [`linalg`], a self-contained
//! Householder tridiagonalization + implicit QL implementation.
//!
//! With the `parallel` feature (on by default) the subset enumerations,
//! frequency sweeps, and batch evaluations run on rayon; without it the
//! same code paths run sequentially.
//!
//! ## Quick start
//!
//! ```
//! use consensus_core::generators::generate_random_regular;
//! use consensus_core::spectral::{algebraic_connectivity, grounded_eigenvalue};
//!
//! // A degree-4 random regular graph stays well connected as it grows...
//! let g = generate_random_regular(60, 4, 7).unwrap();
//! let lambda2 = algebraic_connectivity(&g).unwrap();
//! assert!(lambda2 > 0.2);
//!
//! // ...but grounding any node caps the relevant eigenvalue at q/(N-1).
//! let grounded = grounded_eigenvalue(&g, 0).unwrap();
//! assert!(grounded > 0.0 && grounded <= lambda2);
//! assert!(grounded <= 4.0 / 59.0);
//! ```

pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
