use crate::error::Result;
use crate::euler::{lax_friedrichs_prim, two_point_prim, Axis, ConsState, GasModel, Prim};

use super::config::{InterfaceFlux, SchemeConfig};

/// Reflective-wall exterior state: the normal momentum component is negated.
pub fn mirror_state(u: &ConsState, normal: [f64; 2]) -> ConsState {
    let [rho, mx, my, e] = u.0;
    let mn = mx * normal[0] + my * normal[1];
    ConsState([rho, mx - 2.0 * mn * normal[0], my - 2.0 * mn * normal[1], e])
}

/// Mirror across an axis-aligned face; exact sign flip, no arithmetic on the
/// tangential component.
#[inline]
pub(crate) fn mirror_axis(u: &ConsState, w: &Prim, axis: Axis) -> (ConsState, Prim) {
    let mut m = *u;
    let mut mw = *w;
    match axis {
        Axis::X => {
            m.0[1] = -m.0[1];
            mw.u = -mw.u;
        }
        Axis::Y => {
            m.0[2] = -m.0[2];
            mw.v = -mw.v;
        }
    }
    (m, mw)
}

/// Numerical flux dotted with the outward normal `sign * e_axis` of the owner.
#[inline]
pub(crate) fn normal_flux(
    config: &SchemeConfig,
    own: (&ConsState, &Prim),
    ext: (&ConsState, &Prim),
    axis: Axis,
    sign: f64,
    gas: &GasModel,
) -> [f64; 4] {
    match config.interface_flux {
        InterfaceFlux::LaxFriedrichs => {
            lax_friedrichs_prim(own.0, own.1, ext.0, ext.1, axis, sign, gas)
        }
        InterfaceFlux::EntropyConservative => {
            two_point_prim(config.volume_flux, own.1, ext.1, axis, gas).map(|f| sign * f)
        }
    }
}

/// Interface flux `f*(own, neighbor) . n` at each face point for an axis-aligned
/// unit normal.
pub fn interface_flux_contribution(
    own: &[ConsState],
    neighbor: &[ConsState],
    normal: [f64; 2],
    config: &SchemeConfig,
    gas: &GasModel,
) -> Result<Vec<[f64; 4]>> {
    let (axis, sign) = if normal[1] == 0.0 {
        (Axis::X, normal[0].signum())
    } else {
        (Axis::Y, normal[1].signum())
    };
    own.iter()
        .zip(neighbor)
        .map(|(a, b)| {
            let wa = Prim::from_cons(a, gas)?;
            let wb = Prim::from_cons(b, gas)?;
            Ok(normal_flux(config, (a, &wa), (b, &wb), axis, sign, gas))
        })
        .collect()
}
