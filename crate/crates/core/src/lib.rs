//! Entropy stable discontinuous Galerkin discretizations of the 2D compressible
//! Euler equations on uniform quadrilateral meshes.
//!
//! The crate contrasts the nodal LGL collocation scheme (DGSEM) with schemes that
//! evaluate the spatial operator through the entropy projection (Gauss collocation
//! and two hybrid DGSEM variants), and ships the machinery needed to measure their
//! robustness: an adaptive Runge-Kutta integrator with crash detection, the
//! instability test problems, and entropy/spectrum diagnostics.

pub mod analysis;
pub mod error;
pub mod euler;
pub mod mesh;
pub mod problems;
pub mod refops;
pub mod schemes;
pub mod timeloop;

pub use error::{Error, InadmissibleKind, Result};
pub use euler::{ConsState, EntropyVars, GasModel};
pub use mesh::{BoundaryCondition, UniformQuadMesh};
pub use refops::{Quadrature1D, RefOperators1D};
pub use schemes::{SchemeConfig, SemiDiscretization, SolutionField, Variant};
pub use timeloop::{RunReport, TolPair};
