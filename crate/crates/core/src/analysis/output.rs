use std::io::{self, Write};

use super::spectrum::SpectrumResult;

/// Shift that makes every value of `series` at least one.
pub fn shift_to_positive(series: &[(f64, f64)]) -> f64 {
    let min = series.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    if min.is_finite() {
        1.0 - min
    } else {
        0.0
    }
}

/// `t,entropy` rows with the shifted entropy; the shift is stated in a comment
/// header.
pub fn write_entropy_csv<W: Write>(mut w: W, series: &[(f64, f64)]) -> io::Result<f64> {
    let shift = shift_to_positive(series);
    writeln!(w, "# entropy shifted by {shift:.17e}")?;
    writeln!(w, "t,entropy")?;
    for (t, s) in series {
        writeln!(w, "{t:.17e},{:.17e}", s + shift)?;
    }
    Ok(shift)
}

pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &SpectrumResult) -> io::Result<()> {
    writeln!(w, "k,energy")?;
    for (k, e) in spectrum.wavenumbers.iter().zip(&spectrum.energy) {
        writeln!(w, "{k},{e:.17e}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub k: f64,
    pub p_min: f64,
    pub volume_gap: f64,
    pub interface_jump: f64,
}

pub fn write_gap_csv<W: Write>(mut w: W, rows: &[GapRow]) -> io::Result<()> {
    writeln!(w, "k,p_min,volume_gap,interface_jump")?;
    for r in rows {
        writeln!(w, "{},{},{:.17e},{:.17e}", r.k, r.p_min, r.volume_gap, r.interface_jump)?;
    }
    Ok(())
}
