//! 2D compressible Euler state algebra: variable transforms, entropy quantities
//! and the two-point volume and interface fluxes.

mod flux;
mod state;

pub use flux::{
    ec_flux, ec_flux_chandrashekar, inv_ln_mean, lax_friedrichs_flux, ln_mean, TwoPointFlux,
};
pub(crate) use flux::{lax_friedrichs_prim, two_point_prim};
pub(crate) use state::entropy_variables_prim;
pub use state::{
    conservative_from_entropy, entropy, entropy_potential, entropy_variables, physical_flux,
    pressure, Axis, ConsState, EntropyVars, GasModel, Prim,
};
