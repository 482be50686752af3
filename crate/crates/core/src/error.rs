use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a state failed the admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InadmissibleKind {
    NegativeDensity,
    NegativePressure,
    NonFinite,
}

impl std::fmt::Display for InadmissibleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NegativeDensity => "negative_density",
            Self::NegativePressure => "negative_pressure",
            Self::NonFinite => "non_finite",
        })
    }
}

/// Where an inadmissible state was found. `element`/`point` are `None` when the
/// check happened outside of a mesh context (single-state algebra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub element: Option<usize>,
    pub point: Option<usize>,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.element, self.point) {
            (Some(e), Some(p)) => write!(f, " at element {e}, point {p}"),
            (Some(e), None) => write!(f, " at element {e}"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator construction failed: {0}")]
    Construction(String),

    #[error("inadmissible state ({kind}){location}")]
    Inadmissible {
        kind: InadmissibleKind,
        location: Location,
    },

    #[error("entropy variables outside the image of the entropy map{location}")]
    InadmissibleEntropy { location: Location },
}

impl Error {
    pub(crate) fn inadmissible(kind: InadmissibleKind) -> Self {
        Error::Inadmissible {
            kind,
            location: Location::default(),
        }
    }

    /// Attach a mesh location to an admissibility error; other errors pass through.
    pub fn at(self, element: usize, point: usize) -> Self {
        let location = Location {
            element: Some(element),
            point: Some(point),
        };
        match self {
            Error::Inadmissible { kind, .. } => Error::Inadmissible { kind, location },
            Error::InadmissibleEntropy { .. } => Error::InadmissibleEntropy { location },
            other => other,
        }
    }

    /// Classification used by the crash detector. Entropy-map failures come from
    /// a non-positive pressure-like quantity after projection.
    pub fn inadmissible_kind(&self) -> Option<InadmissibleKind> {
        match self {
            Error::Inadmissible { kind, .. } => Some(*kind),
            Error::InadmissibleEntropy { .. } => Some(InadmissibleKind::NegativePressure),
            _ => None,
        }
    }
}
