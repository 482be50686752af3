//! Semidiscrete right-hand sides for the four tensor-product scheme variants.
//!
//! Every variant is evaluated in two phases. Phase one computes, per element, the
//! (possibly entropy projected) states at volume and face points. Phase two
//! evaluates flux differencing, interface fluxes and the mass-matrix solve per
//! element, reading only phase-one data of its neighbours.

mod boundary;
mod config;
mod field;
mod kernels;
mod operators;
mod semidiscretization;

pub use boundary::{interface_flux_contribution, mirror_state};
pub use config::{InterfaceFlux, KernelPath, ProjectionMode, SchemeConfig, Variant};
pub use field::SolutionField;
pub use operators::{FaceCoupling, SchemeOperators, MAX_DEGREE};
pub use semidiscretization::{ProjectedTrace, SemiDiscretization, SourceFn};

#[cfg(test)]
mod tests;
