use crate::error::{Error, InadmissibleKind, Result};

/// Coordinate direction of a flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// Ideal gas with constant heat-capacity ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "heat capacity ratio must exceed 1, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma_minus_one(&self) -> f64 {
        self.gamma - 1.0
    }

    #[inline]
    pub fn inv_gamma_minus_one(&self) -> f64 {
        1.0 / (self.gamma - 1.0)
    }

    /// Conservative state from primitive density, velocity and pressure.
    pub fn from_primitive(&self, rho: f64, u: f64, v: f64, p: f64) -> ConsState {
        ConsState::new(
            rho,
            rho * u,
            rho * v,
            p * self.inv_gamma_minus_one() + 0.5 * rho * (u * u + v * v),
        )
    }
}

/// Conserved variables (density, x/y momentum, total energy) at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsState(pub [f64; 4]);

impl ConsState {
    pub const fn new(rho: f64, rho_u: f64, rho_v: f64, energy: f64) -> Self {
        Self([rho, rho_u, rho_v, energy])
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[0]
    }
    #[inline]
    pub fn rho_u(&self) -> f64 {
        self.0[1]
    }
    #[inline]
    pub fn rho_v(&self) -> f64 {
        self.0[2]
    }
    #[inline]
    pub fn energy(&self) -> f64 {
        self.0[3]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }
}

impl From<[f64; 4]> for ConsState {
    fn from(a: [f64; 4]) -> Self {
        Self(a)
    }
}

/// Entropy variables for the entropy `S = -rho s / (gamma - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntropyVars(pub [f64; 4]);

impl EntropyVars {
    pub const fn new(v1: f64, v2: f64, v3: f64, v4: f64) -> Self {
        Self([v1, v2, v3, v4])
    }

    pub fn dot(&self, other: &[f64; 4]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// Primitive variables plus cached logarithms used by the two-point fluxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prim {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
    pub ln_rho: f64,
    pub ln_p: f64,
}

impl Prim {
    /// Checked conversion; fails for non-finite values, rho <= 0 or p <= 0.
    #[inline]
    pub fn from_cons(u: &ConsState, gas: &GasModel) -> Result<Self> {
        let [rho, ru, rv, e] = u.0;
        if !(rho.is_finite() && ru.is_finite() && rv.is_finite() && e.is_finite()) {
            return Err(Error::inadmissible(InadmissibleKind::NonFinite));
        }
        if rho <= 0.0 {
            return Err(Error::inadmissible(InadmissibleKind::NegativeDensity));
        }
        let vx = ru / rho;
        let vy = rv / rho;
        let p = gas.gamma_minus_one() * (e - 0.5 * (ru * vx + rv * vy));
        if !(p > 0.0) {
            return Err(Error::inadmissible(InadmissibleKind::NegativePressure));
        }
        Ok(Self {
            rho,
            u: vx,
            v: vy,
            p,
            ln_rho: rho.ln(),
            ln_p: p.ln(),
        })
    }

    #[inline]
    pub fn normal_velocity(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.u,
            Axis::Y => self.v,
        }
    }

    #[inline]
    pub fn sound_speed(&self, gas: &GasModel) -> f64 {
        (gas.gamma * self.p / self.rho).sqrt()
    }
}

/// Gas pressure. Non-positive values are returned, not raised; only a non-positive
/// or non-finite density is an error.
pub fn pressure(u: &ConsState, gas: &GasModel) -> Result<f64> {
    let rho = u.rho();
    if !rho.is_finite() {
        return Err(Error::inadmissible(InadmissibleKind::NonFinite));
    }
    if rho <= 0.0 {
        return Err(Error::inadmissible(InadmissibleKind::NegativeDensity));
    }
    let kinetic = 0.5 * (u.rho_u() * u.rho_u() + u.rho_v() * u.rho_v()) / rho;
    Ok(gas.gamma_minus_one() * (u.energy() - kinetic))
}

/// Mathematical entropy `S(u) = -rho s / (gamma - 1)` with `s = ln(p / rho^gamma)`.
pub fn entropy(u: &ConsState, gas: &GasModel) -> Result<f64> {
    let w = Prim::from_cons(u, gas)?;
    let s = w.ln_p - gas.gamma * w.ln_rho;
    Ok(-w.rho * s * gas.inv_gamma_minus_one())
}

/// Entropy flux potential for the chosen direction (`rho u` or `rho v`).
pub fn entropy_potential(u: &ConsState, axis: Axis) -> f64 {
    match axis {
        Axis::X => u.rho_u(),
        Axis::Y => u.rho_v(),
    }
}

pub fn entropy_variables(u: &ConsState, gas: &GasModel) -> Result<EntropyVars> {
    let w = Prim::from_cons(u, gas)?;
    Ok(entropy_variables_prim(&w, gas))
}

#[inline]
pub(crate) fn entropy_variables_prim(w: &Prim, gas: &GasModel) -> EntropyVars {
    let s = w.ln_p - gas.gamma * w.ln_rho;
    let rho_p = w.rho / w.p;
    EntropyVars([
        (gas.gamma - s) * gas.inv_gamma_minus_one() - 0.5 * rho_p * (w.u * w.u + w.v * w.v),
        rho_p * w.u,
        rho_p * w.v,
        -rho_p,
    ])
}

/// Inverse of [`entropy_variables`].
pub fn conservative_from_entropy(v: &EntropyVars, gas: &GasModel) -> Result<ConsState> {
    let g1 = gas.gamma_minus_one();
    let [w1, w2, w3, w4] = v.0.map(|x| x * g1);
    if !(w1.is_finite() && w2.is_finite() && w3.is_finite() && w4.is_finite()) || w4 >= 0.0 {
        return Err(Error::InadmissibleEntropy {
            location: Default::default(),
        });
    }
    let kin = (w2 * w2 + w3 * w3) / (2.0 * w4);
    let s = gas.gamma - w1 + kin;
    // rho * internal energy, written in log form to avoid overflow in the powers
    let ln_rho_iota =
        gas.inv_gamma_minus_one() * (g1.ln() - gas.gamma * (-w4).ln() - s);
    let rho_iota = ln_rho_iota.exp();
    let out = ConsState::new(
        -rho_iota * w4,
        rho_iota * w2,
        rho_iota * w3,
        rho_iota * (1.0 - kin),
    );
    if !(out.rho() > 0.0 && out.0.iter().all(|x| x.is_finite())) {
        return Err(Error::InadmissibleEntropy {
            location: Default::default(),
        });
    }
    Ok(out)
}

/// Exact Euler flux in the given direction.
pub fn physical_flux(u: &ConsState, axis: Axis, gas: &GasModel) -> Result<[f64; 4]> {
    let w = Prim::from_cons(u, gas)?;
    Ok(physical_flux_prim(u, &w, axis))
}

#[inline]
pub(crate) fn physical_flux_prim(u: &ConsState, w: &Prim, axis: Axis) -> [f64; 4] {
    let vn = w.normal_velocity(axis);
    let [rho, ru, rv, e] = u.0;
    match axis {
        Axis::X => [rho * vn, ru * vn + w.p, rv * vn, (e + w.p) * vn],
        Axis::Y => [rho * vn, ru * vn, rv * vn + w.p, (e + w.p) * vn],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const GAS: GasModel = GasModel { gamma: 1.4 };

    pub(crate) fn random_state(rng: &mut impl Rng) -> ConsState {
        let rho = rng.gen_range(0.1..10.0);
        let p = rng.gen_range(0.1..10.0);
        GAS.from_primitive(rho, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), p)
    }

    #[test]
    fn pressure_examples() {
        assert_abs_diff_eq!(pressure(&ConsState::new(1.0, 0.0, 0.0, 2.5), &GAS).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pressure(&ConsState::new(2.0, 2.0, 0.0, 3.0), &GAS).unwrap(), 0.8, epsilon = 1e-15);
        assert_eq!(pressure(&ConsState::new(1.0, 0.0, 0.0, 0.0), &GAS).unwrap(), 0.0);
        assert!(matches!(
            pressure(&ConsState::new(-1.0, 0.0, 0.0, 1.0), &GAS),
            Err(Error::Inadmissible { kind: InadmissibleKind::NegativeDensity, .. })
        ));
    }

    #[test]
    fn entropy_variables_examples() {
        let v = entropy_variables(&ConsState::new(1.0, 0.0, 0.0, 2.5), &GAS).unwrap();
        for (a, b) in v.0.iter().zip([3.5, 0.0, 0.0, -1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let u = conservative_from_entropy(&EntropyVars::new(3.5, 0.0, 0.0, -1.0), &GAS).unwrap();
        for (a, b) in u.0.iter().zip([1.0, 0.0, 0.0, 2.5]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let u = ConsState::new(2.0, 1.0, -0.5, 5.0);
        let back = conservative_from_entropy(&entropy_variables(&u, &GAS).unwrap(), &GAS).unwrap();
        for (a, b) in back.0.iter().zip(u.0) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert!(matches!(
            conservative_from_entropy(&EntropyVars::new(3.5, 0.0, 0.0, 0.1), &GAS),
            Err(Error::InadmissibleEntropy { .. })
        ));
    }

    #[test]
    fn entropy_vars_of_inadmissible_state_fail() {
        assert!(entropy_variables(&ConsState::new(1.0, 0.0, 0.0, -1.0), &GAS).is_err());
        assert!(entropy_variables(&ConsState::new(0.0, 0.0, 0.0, 1.0), &GAS).is_err());
        assert!(entropy_variables(&ConsState::new(f64::NAN, 0.0, 0.0, 1.0), &GAS).is_err());
    }

    #[test]
    fn round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let u = random_state(&mut rng);
            let back = conservative_from_entropy(&entropy_variables(&u, &GAS).unwrap(), &GAS).unwrap();
            for (a, b) in back.0.iter().zip(u.0) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn entropy_is_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (a, b) = (random_state(&mut rng), random_state(&mut rng));
            let va = entropy_variables(&a, &GAS).unwrap();
            let vb = entropy_variables(&b, &GAS).unwrap();
            let du: [f64; 4] = std::array::from_fn(|i| a.0[i] - b.0[i]);
            let dv: f64 = (0..4).map(|i| (va.0[i] - vb.0[i]) * du[i]).sum();
            assert!(dv > 0.0);
            let mid = ConsState(std::array::from_fn(|i| 0.5 * (a.0[i] + b.0[i])));
            let s_mid = entropy(&mid, &GAS).unwrap();
            let s_avg = 0.5 * (entropy(&a, &GAS).unwrap() + entropy(&b, &GAS).unwrap());
            assert!(s_mid <= s_avg + 1e-12 * s_avg.abs().max(1.0));
        }
    }

    #[test]
    fn entropy_variables_are_the_entropy_gradient() {
        // central differences of S against v(u)
        let u = ConsState::new(1.3, 0.4, -0.7, 3.1);
        let v = entropy_variables(&u, &GAS).unwrap();
        for k in 0..4 {
            let h = 1e-6;
            let mut up = u;
            let mut dn = u;
            up.0[k] += h;
            dn.0[k] -= h;
            let d = (entropy(&up, &GAS).unwrap() - entropy(&dn, &GAS).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(d, v.0[k], epsilon = 1e-8);
        }
    }

    #[test]
    fn gamma_must_exceed_one() {
        assert!(GasModel::new(1.0).is_err());
        assert!(GasModel::new(1.4).is_ok());
    }
}
