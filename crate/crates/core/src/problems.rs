//! Initial conditions, sources and boundary setups for the test problems.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::euler::{ConsState, GasModel, Prim};
use crate::mesh::{DomainBoundaries, UniformQuadMesh};
use crate::schemes::{SchemeConfig, SemiDiscretization, SolutionField, SourceFn};

pub type InitialState = Arc<dyn Fn(f64, f64) -> ConsState + Send + Sync>;
pub type ExactSolution = Arc<dyn Fn(f64, f64, f64) -> ConsState + Send + Sync>;

/// Stable problem identifiers accepted by [`problem_by_name`].
pub const PROBLEM_NAMES: [&str; 7] =
    ["khi", "khi_atwood", "khi_asym", "rti", "rmi", "freestream", "density_wave"];

/// `d_{a,b}(x) = a + (1 + tanh(s x)) (b - a) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedStep {
    pub a: f64,
    pub b: f64,
    pub s: f64,
}

impl SmoothedStep {
    pub fn new(a: f64, b: f64, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("step slope must be positive, got {s}")));
        }
        Ok(Self { a, b, s })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a + 0.5 * (1.0 + (self.s * x).tanh()) * (self.b - self.a)
    }
}

#[derive(Clone)]
pub struct ProblemSetup {
    pub name: String,
    pub x_bounds: (f64, f64),
    pub y_bounds: (f64, f64),
    pub boundaries: DomainBoundaries,
    pub initial_state: InitialState,
    pub source: Option<SourceFn>,
    pub gas: GasModel,
    pub t_final: f64,
    /// Exact solution, when one is known.
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for ProblemSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSetup")
            .field("name", &self.name)
            .field("x_bounds", &self.x_bounds)
            .field("y_bounds", &self.y_bounds)
            .field("boundaries", &self.boundaries)
            .field("gas", &self.gas)
            .field("t_final", &self.t_final)
            .field("source", &self.source.is_some())
            .finish()
    }
}

impl ProblemSetup {
    /// Elements in y for `nx` elements in x, keeping them as square as the domain allows.
    pub fn cells_y(&self, nx: usize) -> usize {
        let aspect = (self.y_bounds.1 - self.y_bounds.0) / (self.x_bounds.1 - self.x_bounds.0);
        ((nx as f64 * aspect).round() as usize).max(1)
    }

    pub fn mesh(&self, nx: usize, ny: usize) -> Result<UniformQuadMesh> {
        UniformQuadMesh::new(nx, ny, self.x_bounds, self.y_bounds, self.boundaries)
    }

    pub fn semidiscretization(&self, config: SchemeConfig, nx: usize, ny: usize) -> Result<SemiDiscretization> {
        let sd = SemiDiscretization::new(self.mesh(nx, ny)?, config, self.gas)?;
        Ok(match &self.source {
            Some(s) => sd.with_source(s.clone()),
            None => sd,
        })
    }

    /// The initial state interpolated at the solution nodes.
    pub fn initial_field(&self, sd: &SemiDiscretization) -> SolutionField {
        let f = &self.initial_state;
        sd.interpolate(|x, y| f(x, y))
    }

    /// Check admissibility of the initial state on an `n x n` grid spanning the domain.
    pub fn check_admissible(&self, n: usize) -> Result<()> {
        let (x0, x1) = self.x_bounds;
        let (y0, y1) = self.y_bounds;
        let step = |i: usize| i as f64 / (n.max(2) - 1) as f64;
        for j in 0..n {
            for i in 0..n {
                let x = x0 + (x1 - x0) * step(i);
                let y = y0 + (y1 - y0) * step(j);
                Prim::from_cons(&(self.initial_state)(x, y), &self.gas)
                    .map_err(|e| Error::Construction(format!("{}: initial state at ({x}, {y}): {e}", self.name)))?;
            }
        }
        Ok(())
    }
}

/// Look up a problem by its identifier. `atwood` is used by `khi_atwood` only.
pub fn problem_by_name(name: &str, atwood: Option<f64>) -> Result<ProblemSetup> {
    match name {
        "khi" => Ok(khi_2d()),
        "khi_atwood" => khi_atwood(atwood.unwrap_or(0.5)),
        "khi_asym" => Ok(khi_asymmetric()),
        "rti" => Ok(rti()),
        "rmi" => Ok(rmi()),
        "freestream" => Ok(freestream()),
        "density_wave" => Ok(density_wave()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown problem '{name}', expected one of {}",
            PROBLEM_NAMES.join(", ")
        ))),
    }
}

/// Smoothed indicator of the KHI middle band, in `[0, 2]`.
pub fn khi_band(y: f64) -> f64 {
    (15.0 * y + 7.5).tanh() - (15.0 * y - 7.5).tanh()
}

fn khi_setup(name: &str, t_final: f64, state: InitialState) -> ProblemSetup {
    ProblemSetup {
        name: name.into(),
        x_bounds: (-1.0, 1.0),
        y_bounds: (-1.0, 1.0),
        boundaries: DomainBoundaries::periodic(),
        initial_state: state,
        source: None,
        gas: GasModel::default(),
        t_final,
        exact: None,
    }
}

pub fn khi_2d() -> ProblemSetup {
    let gas = GasModel::default();
    khi_setup(
        "khi",
        15.0,
        Arc::new(move |x, y| {
            let b = khi_band(y);
            gas.from_primitive(0.5 + 0.75 * b, 0.5 * (b - 1.0), 0.1 * (2.0 * PI * x).sin(), 1.0)
        }),
    )
}

/// KHI with density contrast set by the Atwood number. The band indicator is
/// normalized to `[0, 1]`, so the extreme densities are `rho1` and `rho2`.
pub fn khi_atwood(atwood: f64) -> Result<ProblemSetup> {
    if !(0.0..1.0).contains(&atwood) {
        return Err(Error::InvalidArgument(format!("Atwood number must lie in [0, 1), got {atwood}")));
    }
    let gas = GasModel::default();
    let rho1 = 1.0;
    let rho2 = rho1 * (1.0 + atwood) / (1.0 - atwood);
    let mut setup = khi_setup(
        "khi_atwood",
        10.0,
        Arc::new(move |x, y| {
            let b = 0.5 * khi_band(y);
            gas.from_primitive(rho1 + b * (rho2 - rho1), b - 0.5, 0.1 * (2.0 * PI * x).sin(), 1.0)
        }),
    );
    setup.name = format!("khi_atwood_{atwood}");
    Ok(setup)
}

pub fn khi_asymmetric() -> ProblemSetup {
    let gas = GasModel::default();
    khi_setup(
        "khi_asym",
        25.0,
        Arc::new(move |x, y| {
            let b = khi_band(y);
            let v = 0.1 * (2.0 * PI * x).sin() * (1.0 + 0.01 * (PI * x).sin() * (PI * y).sin());
            gas.from_primitive(0.5 + 0.75 * b, 0.5 * (b - 1.0), v, 1.0)
        }),
    )
}

/// Gravity strength for the Rayleigh-Taylor setup. The source `(0, 0, g rho, g rho v)`
/// with `g = 1` balances the initial pressure gradient `dp/dy = rho`.
pub const RTI_GRAVITY: f64 = 1.0;
/// Wavenumber multiplier in the RTI velocity perturbation `cos(8 k pi x)`.
pub const RTI_WAVENUMBER: f64 = 1.0;

pub fn rti() -> ProblemSetup {
    let gas = GasModel::default();
    let step = SmoothedStep { a: 2.0, b: 1.0, s: 15.0 };
    let g = RTI_GRAVITY;
    ProblemSetup {
        name: "rti".into(),
        x_bounds: (0.0, 0.25),
        y_bounds: (0.0, 1.0),
        boundaries: DomainBoundaries::walls(),
        initial_state: Arc::new(move |x, y| {
            let rho = step.eval(y - 0.5);
            let p = if y < 0.5 { 2.0 * y + 1.0 } else { y + 1.5 };
            let c = (gas.gamma * p / rho).sqrt();
            let v = -c / 40.0 * (8.0 * RTI_WAVENUMBER * PI * x).cos() * (PI * y).sin().powi(6);
            gas.from_primitive(rho, 0.0, v, p)
        }),
        source: Some(Arc::new(move |u: &ConsState, _x, _y, _t| {
            [0.0, 0.0, g * u.rho(), g * u.rho_v()]
        })),
        gas,
        t_final: 3.0,
        exact: None,
    }
}

/// Period length in the RMI interface perturbation `cos(6 pi x / L)`.
pub const RMI_LENGTH: f64 = 40.0 / 3.0;

pub fn rmi() -> ProblemSetup {
    let gas = GasModel::default();
    let interface = SmoothedStep { a: 1.0, b: 0.25, s: 2.0 };
    let strip_rho = SmoothedStep { a: 3.22, b: 0.0, s: 2.0 };
    let strip_p = SmoothedStep { a: 4.9, b: 1.0, s: 2.0 };
    ProblemSetup {
        name: "rmi".into(),
        x_bounds: (0.0, 40.0 / 3.0),
        y_bounds: (0.0, 40.0),
        boundaries: DomainBoundaries::walls(),
        initial_state: Arc::new(move |x, y| {
            let rho = interface.eval(y - (18.0 + 2.0 * (6.0 * PI * x / RMI_LENGTH).cos()))
                + strip_rho.eval((y - 4.0).abs() - 2.0);
            let p = strip_p.eval((y - 4.0).abs() - 2.0);
            gas.from_primitive(rho, 0.0, 0.0, p)
        }),
        source: None,
        gas,
        t_final: 30.0,
        exact: None,
    }
}

/// Constant state on the periodic unit square.
pub fn freestream() -> ProblemSetup {
    let u0 = ConsState::new(1.0, 0.1, -0.2, 3.0);
    ProblemSetup {
        name: "freestream".into(),
        x_bounds: (0.0, 1.0),
        y_bounds: (0.0, 1.0),
        boundaries: DomainBoundaries::periodic(),
        initial_state: Arc::new(move |_, _| u0),
        source: None,
        gas: GasModel::default(),
        t_final: 1.0,
        exact: Some(Arc::new(move |_, _, _| u0)),
    }
}

/// Density sine wave translating diagonally at unit velocity, exact for all time.
pub fn density_wave() -> ProblemSetup {
    let gas = GasModel::default();
    let exact: ExactSolution = Arc::new(move |x, y, t| {
        gas.from_primitive(2.0 + 0.1 * (2.0 * PI * (x + y - 2.0 * t)).sin(), 1.0, 1.0, 1.0)
    });
    let e0 = exact.clone();
    ProblemSetup {
        name: "density_wave".into(),
        x_bounds: (0.0, 1.0),
        y_bounds: (0.0, 1.0),
        boundaries: DomainBoundaries::periodic(),
        initial_state: Arc::new(move |x, y| e0(x, y, 0.0)),
        source: None,
        gas,
        t_final: 0.5,
        exact: Some(exact),
    }
}

/// One-dimensional state used to illustrate the entropy projection, embedded in 2D
/// with zero y-velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpIllustration1D {
    pub k: f64,
    pub p_min: f64,
    pub gas: GasModel,
}

impl EpIllustration1D {
    /// Density, velocity and pressure at `x`.
    pub fn primitive(&self, x: f64) -> (f64, f64, f64) {
        let phase = 1.0 + self.k * PI * x;
        let rho = 1.0 + (2.0 * phase.sin()).exp();
        let u = 0.1 * phase.cos();
        let p = self.p_min + 0.5 * (1.0 - (self.k * PI * x - 0.25).cos());
        (rho, u, p)
    }

    pub fn state(&self, x: f64) -> ConsState {
        let (rho, u, p) = self.primitive(x);
        self.gas.from_primitive(rho, u, 0.0, p)
    }
}

pub fn ep_illustration_1d(k: f64, p_min: f64) -> Result<EpIllustration1D> {
    if !(p_min > 0.0) || !p_min.is_finite() {
        return Err(Error::InvalidArgument(format!("p_min must be positive, got {p_min}")));
    }
    if !k.is_finite() {
        return Err(Error::InvalidArgument(format!("k must be finite, got {k}")));
    }
    Ok(EpIllustration1D {
        k,
        p_min,
        gas: GasModel::default(),
    })
}
