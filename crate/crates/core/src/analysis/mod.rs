//! Diagnostics: integrated entropy and its semidiscrete rate, entropy projection
//! gap metrics, sqrt(rho)-weighted kinetic energy spectra, and CSV emitters.

mod entropy;
mod ep_gap;
mod output;
mod spectrum;

pub use entropy::{entropy_rate, entropy_rate_with_scale, integrated_conserved, integrated_entropy, EntropyRate};
pub use ep_gap::{ep_gap_for_state, ep_gap_metrics, EpGapMetrics};
pub use output::{shift_to_positive, write_entropy_csv, write_gap_csv, write_spectrum_csv, GapRow};
pub use spectrum::{power_spectrum, sample_equispaced, SpectrumResult};
