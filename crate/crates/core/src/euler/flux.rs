use super::state::{physical_flux_prim, Axis, ConsState, GasModel, Prim};
use crate::error::Result;

/// Squared relative difference below which the logarithmic mean switches to its
/// series expansion.
const LN_MEAN_SERIES_THRESHOLD: f64 = 1e-4;

/// Symmetric two-point volume fluxes satisfying the entropy conservation condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TwoPointFlux {
    /// Entropy conservative and kinetic energy preserving flux of Ranocha.
    #[default]
    Ranocha,
    Chandrashekar,
}

#[inline]
fn series_denominator(f2: f64) -> f64 {
    2.0 + f2 * (2.0 / 3.0 + f2 * (2.0 / 5.0 + f2 * (2.0 / 7.0)))
}

/// Logarithmic mean `(y - x) / (ln y - ln x)` of two positive numbers.
pub fn ln_mean(x: f64, y: f64) -> f64 {
    ln_mean_logs(x, y, x.ln(), y.ln())
}

/// Reciprocal of [`ln_mean`].
pub fn inv_ln_mean(x: f64, y: f64) -> f64 {
    inv_ln_mean_logs(x, y, x.ln(), y.ln())
}

// Both branches are written so that swapping the arguments gives a bitwise
// identical result.
#[inline]
fn ln_mean_logs(x: f64, y: f64, lx: f64, ly: f64) -> f64 {
    let r = (y - x) / (y + x);
    let f2 = r * r;
    if f2 < LN_MEAN_SERIES_THRESHOLD {
        (x + y) / series_denominator(f2)
    } else {
        (y - x) / (ly - lx)
    }
}

#[inline]
fn inv_ln_mean_logs(x: f64, y: f64, lx: f64, ly: f64) -> f64 {
    let r = (y - x) / (y + x);
    let f2 = r * r;
    if f2 < LN_MEAN_SERIES_THRESHOLD {
        series_denominator(f2) / (x + y)
    } else {
        (ly - lx) / (y - x)
    }
}

#[inline]
fn ranocha(l: &Prim, r: &Prim, axis: Axis, gas: &GasModel) -> [f64; 4] {
    let rho_mean = ln_mean_logs(l.rho, r.rho, l.ln_rho, r.ln_rho);
    // equals inv_ln_mean(rho_l / p_l, rho_r / p_r) without the divisions
    let inv_rho_p_mean = l.p
        * r.p
        * inv_ln_mean_logs(
            l.rho * r.p,
            r.rho * l.p,
            l.ln_rho + r.ln_p,
            r.ln_rho + l.ln_p,
        );
    let u_avg = 0.5 * (l.u + r.u);
    let v_avg = 0.5 * (l.v + r.v);
    let p_avg = 0.5 * (l.p + r.p);
    let vel_sq_avg = 0.5 * (l.u * r.u + l.v * r.v);
    let kin_int = vel_sq_avg + inv_rho_p_mean * gas.inv_gamma_minus_one();
    match axis {
        Axis::X => {
            let f1 = rho_mean * u_avg;
            [
                f1,
                f1 * u_avg + p_avg,
                f1 * v_avg,
                f1 * kin_int + 0.5 * (l.p * r.u + r.p * l.u),
            ]
        }
        Axis::Y => {
            let f1 = rho_mean * v_avg;
            [
                f1,
                f1 * u_avg,
                f1 * v_avg + p_avg,
                f1 * kin_int + 0.5 * (l.p * r.v + r.p * l.v),
            ]
        }
    }
}

#[inline]
fn chandrashekar(l: &Prim, r: &Prim, axis: Axis, gas: &GasModel) -> [f64; 4] {
    // beta = rho / (2 p); the constant ln 2 cancels in the logarithmic mean
    let beta_l = 0.5 * l.rho / l.p;
    let beta_r = 0.5 * r.rho / r.p;
    let beta_mean = ln_mean_logs(beta_l, beta_r, l.ln_rho - l.ln_p, r.ln_rho - r.ln_p);
    let beta_avg = 0.5 * (beta_l + beta_r);
    let rho_avg = 0.5 * (l.rho + r.rho);
    let rho_mean = ln_mean_logs(l.rho, r.rho, l.ln_rho, r.ln_rho);
    let u_avg = 0.5 * (l.u + r.u);
    let v_avg = 0.5 * (l.v + r.v);
    let p_mean = 0.5 * rho_avg / beta_avg;
    let vel_sq_avg = 0.5 * (l.u * l.u + l.v * l.v) + 0.5 * (r.u * r.u + r.v * r.v);
    let (f1, f2, f3) = match axis {
        Axis::X => {
            let f1 = rho_mean * u_avg;
            (f1, f1 * u_avg + p_mean, f1 * v_avg)
        }
        Axis::Y => {
            let f1 = rho_mean * v_avg;
            (f1, f1 * u_avg, f1 * v_avg + p_mean)
        }
    };
    let f4 = f1 * 0.5 * (gas.inv_gamma_minus_one() / beta_mean - vel_sq_avg)
        + f2 * u_avg
        + f3 * v_avg;
    [f1, f2, f3, f4]
}

#[inline]
pub(crate) fn two_point_prim(
    kind: TwoPointFlux,
    l: &Prim,
    r: &Prim,
    axis: Axis,
    gas: &GasModel,
) -> [f64; 4] {
    match kind {
        TwoPointFlux::Ranocha => ranocha(l, r, axis, gas),
        TwoPointFlux::Chandrashekar => chandrashekar(l, r, axis, gas),
    }
}

/// Ranocha's entropy conservative, kinetic energy preserving flux.
pub fn ec_flux(ul: &ConsState, ur: &ConsState, axis: Axis, gas: &GasModel) -> Result<[f64; 4]> {
    let l = Prim::from_cons(ul, gas)?;
    let r = Prim::from_cons(ur, gas)?;
    Ok(ranocha(&l, &r, axis, gas))
}

/// Chandrashekar's entropy conservative, kinetic energy preserving flux.
pub fn ec_flux_chandrashekar(
    ul: &ConsState,
    ur: &ConsState,
    axis: Axis,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let l = Prim::from_cons(ul, gas)?;
    let r = Prim::from_cons(ur, gas)?;
    Ok(chandrashekar(&l, &r, axis, gas))
}

/// Local Lax-Friedrichs flux with the Davis wave speed estimate, for an
/// axis-aligned unit normal `sign * e_axis`.
#[inline]
pub(crate) fn lax_friedrichs_prim(
    ul: &ConsState,
    l: &Prim,
    ur: &ConsState,
    r: &Prim,
    axis: Axis,
    sign: f64,
    gas: &GasModel,
) -> [f64; 4] {
    let fl = physical_flux_prim(ul, l, axis);
    let fr = physical_flux_prim(ur, r, axis);
    let lambda = (l.normal_velocity(axis).abs() + l.sound_speed(gas))
        .max(r.normal_velocity(axis).abs() + r.sound_speed(gas));
    std::array::from_fn(|k| {
        sign * (0.5 * (fl[k] + fr[k])) - 0.5 * lambda * (ur.0[k] - ul.0[k])
    })
}

/// Local Lax-Friedrichs flux `f*(uL, uR) . n` for a general unit normal.
pub fn lax_friedrichs_flux(
    ul: &ConsState,
    ur: &ConsState,
    normal: [f64; 2],
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let l = Prim::from_cons(ul, gas)?;
    let r = Prim::from_cons(ur, gas)?;
    let fxl = physical_flux_prim(ul, &l, Axis::X);
    let fyl = physical_flux_prim(ul, &l, Axis::Y);
    let fxr = physical_flux_prim(ur, &r, Axis::X);
    let fyr = physical_flux_prim(ur, &r, Axis::Y);
    let vnl = l.u * normal[0] + l.v * normal[1];
    let vnr = r.u * normal[0] + r.v * normal[1];
    let lambda = (vnl.abs() + l.sound_speed(gas)).max(vnr.abs() + r.sound_speed(gas));
    Ok(std::array::from_fn(|k| {
        0.5 * ((fxl[k] + fxr[k]) * normal[0] + (fyl[k] + fyr[k]) * normal[1])
            - 0.5 * lambda * (ur.0[k] - ul.0[k])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{entropy_potential, entropy_variables, physical_flux};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const GAS: GasModel = GasModel { gamma: 1.4 };

    fn random_state(rng: &mut impl Rng) -> ConsState {
        GAS.from_primitive(
            rng.gen_range(0.1..10.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.1..10.0),
        )
    }

    #[test]
    fn ln_mean_matches_direct_formula() {
        for (x, y) in [(1.0f64, 2.0f64), (0.3, 7.0), (1.0, 1.0 + 1e-3), (5.0, 5.0)] {
            let direct = if x == y { x } else { (y - x) / (y / x).ln() };
            assert!((ln_mean(x, y) - direct).abs() <= 1e-13 * direct);
            assert!((inv_ln_mean(x, y) * direct - 1.0).abs() <= 1e-13);
            assert_eq!(ln_mean(x, y), ln_mean(y, x));
        }
    }

    #[test]
    fn ln_mean_is_continuous_across_the_switch() {
        // f^2 = 1e-4 corresponds to y/x = (1 + 0.01)/(1 - 0.01)
        let ratio: f64 = 1.01 / 0.99;
        for eps in [-1e-9, 0.0, 1e-9] {
            let y = ratio + eps;
            let reference = (y - 1.0) / y.ln();
            assert!((ln_mean(1.0, y) - reference).abs() < 1e-14);
        }
    }

    #[test]
    fn consistency_with_physical_flux() {
        let u = ConsState::new(1.0, 0.0, 0.0, 2.5);
        let f = ec_flux(&u, &u, Axis::X, &GAS).unwrap();
        for (a, b) in f.iter().zip([0.0, 1.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let f = lax_friedrichs_flux(&u, &u, [0.0, 1.0], &GAS).unwrap();
        for (a, b) in f.iter().zip([0.0, 0.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let u = random_state(&mut rng);
            for axis in [Axis::X, Axis::Y] {
                let exact = physical_flux(&u, axis, &GAS).unwrap();
                let scale = exact.iter().fold(1.0f64, |a, b| a.max(b.abs()));
                for f in [
                    ec_flux(&u, &u, axis, &GAS).unwrap(),
                    ec_flux_chandrashekar(&u, &u, axis, &GAS).unwrap(),
                ] {
                    for k in 0..4 {
                        assert!((f[k] - exact[k]).abs() <= 1e-13 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn lax_friedrichs_is_entropy_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let (ul, ur) = (random_state(&mut rng), random_state(&mut rng));
            let vl = entropy_variables(&ul, &GAS).unwrap();
            let vr = entropy_variables(&ur, &GAS).unwrap();
            let (normal, axis) = if rng.gen_bool(0.5) {
                ([1.0, 0.0], Axis::X)
            } else {
                ([0.0, 1.0], Axis::Y)
            };
            let f = lax_friedrichs_flux(&ul, &ur, normal, &GAS).unwrap();
            let production: f64 = (0..4).map(|k| (vr.0[k] - vl.0[k]) * f[k]).sum::<f64>()
                - (entropy_potential(&ur, axis) - entropy_potential(&ul, axis));
            let scale = entropy_potential(&ul, axis).abs().max(entropy_potential(&ur, axis).abs()).max(1.0);
            assert!(production <= 1e-11 * scale, "entropy production {production}");
        }
    }

    #[test]
    fn axis_lax_friedrichs_matches_general_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let (ul, ur) = (random_state(&mut rng), random_state(&mut rng));
            let l = Prim::from_cons(&ul, &GAS).unwrap();
            let r = Prim::from_cons(&ur, &GAS).unwrap();
            for (axis, sign, n) in [
                (Axis::X, 1.0, [1.0, 0.0]),
                (Axis::X, -1.0, [-1.0, 0.0]),
                (Axis::Y, 1.0, [0.0, 1.0]),
                (Axis::Y, -1.0, [0.0, -1.0]),
            ] {
                let a = lax_friedrichs_prim(&ul, &l, &ur, &r, axis, sign, &GAS);
                let b = lax_friedrichs_flux(&ul, &ur, n, &GAS).unwrap();
                for k in 0..4 {
                    assert!((a[k] - b[k]).abs() <= 1e-13 * b[k].abs().max(1.0));
                }
                // the two owners of a face see exactly opposite fluxes
                let back = lax_friedrichs_prim(&ur, &r, &ul, &l, axis, -sign, &GAS);
                for k in 0..4 {
                    assert_eq!(a[k], -back[k]);
                }
            }
        }
    }
}
