use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::euler::TwoPointFlux;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// LGL collocation (DGSEM); never uses the entropy projection.
    DgsemLglCollocation,
    /// Gauss collocation with entropy-projected face values.
    GaussEp,
    /// LGL volume nodes with Clenshaw-Curtis points along element edges.
    DgsemCcFaceEp,
    /// LGL nodes with the Gauss-integrated dense mass matrix.
    DgsemVolumeEp,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::DgsemLglCollocation,
        Variant::GaussEp,
        Variant::DgsemCcFaceEp,
        Variant::DgsemVolumeEp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::DgsemLglCollocation => "DGSEM_LGL_collocation",
            Variant::GaussEp => "Gauss_EP",
            Variant::DgsemCcFaceEp => "DGSEM_CCface_EP",
            Variant::DgsemVolumeEp => "DGSEM_volume_EP",
        }
    }

    pub fn uses_entropy_projection(self) -> bool {
        self != Variant::DgsemLglCollocation
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dgsem_lgl_collocation" | "dgsem" | "collocation" => Ok(Variant::DgsemLglCollocation),
            "gauss_ep" | "gauss" => Ok(Variant::GaussEp),
            "dgsem_ccface_ep" | "ccface" | "dgsem_cc" => Ok(Variant::DgsemCcFaceEp),
            "dgsem_volume_ep" | "volume_ep" | "dgsem_vol" => Ok(Variant::DgsemVolumeEp),
            _ => Err(Error::InvalidArgument(format!("unknown scheme variant '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InterfaceFlux {
    /// The volume two-point flux used at interfaces as well (no dissipation).
    EntropyConservative,
    /// Local Lax-Friedrichs with the Davis wave speed estimate.
    #[default]
    LaxFriedrichs,
}

impl InterfaceFlux {
    pub fn name(self) -> &'static str {
        match self {
            InterfaceFlux::EntropyConservative => "entropy_conservative",
            InterfaceFlux::LaxFriedrichs => "lax_friedrichs",
        }
    }
}

impl fmt::Display for InterfaceFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterfaceFlux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "entropy_conservative" | "ec" => Ok(InterfaceFlux::EntropyConservative),
            "lax_friedrichs" | "lf" | "llf" | "rusanov" => Ok(InterfaceFlux::LaxFriedrichs),
            _ => Err(Error::InvalidArgument(format!("unknown interface flux '{s}'"))),
        }
    }
}

impl TwoPointFlux {
    pub fn name(self) -> &'static str {
        match self {
            TwoPointFlux::Ranocha => "ranocha",
            TwoPointFlux::Chandrashekar => "chandrashekar",
        }
    }
}

impl fmt::Display for TwoPointFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwoPointFlux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ranocha" => Ok(TwoPointFlux::Ranocha),
            "chandrashekar" => Ok(TwoPointFlux::Chandrashekar),
            _ => Err(Error::InvalidArgument(format!("unknown volume flux '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeConfig {
    pub variant: Variant,
    pub degree: usize,
    pub interface_flux: InterfaceFlux,
    pub volume_flux: TwoPointFlux,
}

impl SchemeConfig {
    pub fn new(variant: Variant, degree: usize) -> Self {
        Self {
            variant,
            degree,
            interface_flux: InterfaceFlux::LaxFriedrichs,
            volume_flux: TwoPointFlux::Ranocha,
        }
    }

    pub fn with_interface_flux(mut self, flux: InterfaceFlux) -> Self {
        self.interface_flux = flux;
        self
    }

    pub fn with_volume_flux(mut self, flux: TwoPointFlux) -> Self {
        self.volume_flux = flux;
        self
    }
}

/// How the flux-differencing operator is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPath {
    /// Pick per variant: collocation for the LGL-endpoint variants, hybridized otherwise.
    Auto,
    /// Direct LGL collocation form with interface fluxes at the edge nodes.
    Collocation,
    /// Hybridized operator with the volume/face coupling blocks, zero entries skipped.
    Hybridized,
    /// Dense hybridized operator, every entry visited. Reference only.
    DenseReference,
}

/// Which states the spatial operator is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionMode {
    /// Per variant: none for DGSEM, faces for Gauss/CC, full for the volume variant.
    Auto,
    /// Nodal values everywhere.
    None,
    /// Nodal values at volume points (exact when Vq = Pq = I), projected values at faces.
    Faces,
    /// Projected values at volume and face points.
    Full,
}
