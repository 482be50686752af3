use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::euler::ConsState;
use crate::refops::{equispaced_interior_nodes, LagrangeBasis};
use crate::schemes::{SemiDiscretization, SolutionField};

/// Shell-summed spectrum of `(sqrt(rho) u, sqrt(rho) v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Shell index `n`, counting periods per domain length; shell `n` holds modes
    /// with `|k|` in `[n - 1/2, n + 1/2)`.
    pub wavenumbers: Vec<usize>,
    pub energy: Vec<f64>,
    /// Grid points per direction (x, y).
    pub grid_resolution: (usize, usize),
}

impl SpectrumResult {
    pub fn total(&self) -> f64 {
        self.energy.iter().sum()
    }
}

/// Evaluate the solution polynomial at `N + 1` cell-centred equispaced points per
/// element and direction. Returns the grid size and the states, x fastest.
pub fn sample_equispaced(sd: &SemiDiscretization, u: &SolutionField) -> ((usize, usize), Vec<ConsState>) {
    let ops = sd.ops();
    let n = ops.n;
    let mesh = sd.mesh();
    let pts = equispaced_interior_nodes(n);
    let interp = LagrangeBasis::new(&ops.diff.basis_nodes).interpolation_matrix(&pts);
    let (gx, gy) = (mesh.nx * n, mesh.ny * n);
    let mut grid = vec![ConsState([0.0; 4]); gx * gy];
    for e in 0..mesh.n_elements() {
        let (ex, ey) = (e % mesh.nx, e / mesh.nx);
        let block = u.element_block(e);
        for b in 0..n {
            for a in 0..n {
                let mut acc = [0.0; 4];
                for j in 0..n {
                    for i in 0..n {
                        let w = interp[a][i] * interp[b][j];
                        let o = 4 * (i + n * j);
                        for v in 0..4 {
                            acc[v] += w * block[o + v];
                        }
                    }
                }
                grid[(ex * n + a) + gx * (ey * n + b)] = ConsState(acc);
            }
        }
    }
    ((gx, gy), grid)
}

fn fft_2d(data: &mut [Complex<f64>], nx: usize, ny: usize) {
    let mut planner = FftPlanner::new();
    let fx = planner.plan_fft_forward(nx);
    for row in data.chunks_exact_mut(nx) {
        fx.process(row);
    }
    let fy = planner.plan_fft_forward(ny);
    let mut col = vec![Complex::new(0.0, 0.0); ny];
    for i in 0..nx {
        for j in 0..ny {
            col[j] = data[i + nx * j];
        }
        fy.process(&mut col);
        for j in 0..ny {
            data[i + nx * j] = col[j];
        }
    }
}

fn signed_index(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Angle-averaged (shell-summed) spectrum of the sqrt(rho)-weighted velocity.
/// Coefficients are normalized by the number of grid points, so the shells sum to
/// the grid mean of `rho |velocity|^2`.
pub fn power_spectrum(sd: &SemiDiscretization, u: &SolutionField) -> Result<SpectrumResult> {
    if !sd.mesh().bc.is_fully_periodic() {
        return Err(Error::InvalidArgument("power spectrum requires a fully periodic mesh".into()));
    }
    let ((nx, ny), grid) = sample_equispaced(sd, u);
    let mut a = Vec::with_capacity(nx * ny);
    let mut b = Vec::with_capacity(nx * ny);
    for (p, s) in grid.iter().enumerate() {
        let rho = s.rho();
        if !(rho > 0.0) || !s.0.iter().all(|x| x.is_finite()) {
            return Err(Error::inadmissible(crate::InadmissibleKind::NegativeDensity).at(p / (nx * ny), p));
        }
        let sq = rho.sqrt();
        a.push(Complex::new(s.rho_u() / sq, 0.0));
        b.push(Complex::new(s.rho_v() / sq, 0.0));
    }
    fft_2d(&mut a, nx, ny);
    fft_2d(&mut b, nx, ny);
    let norm = 1.0 / (nx * ny) as f64;
    let kmax = ((nx / 2).pow(2) as f64 + (ny / 2).pow(2) as f64).sqrt();
    let nshell = (kmax + 0.5).floor() as usize + 1;
    let mut energy = vec![0.0; nshell];
    for j in 0..ny {
        for i in 0..nx {
            let k = (signed_index(i, nx).powi(2) + signed_index(j, ny).powi(2)).sqrt();
            let shell = (k + 0.5).floor() as usize;
            let p = i + nx * j;
            energy[shell] += (a[p].norm_sqr() + b[p].norm_sqr()) * norm * norm;
        }
    }
    Ok(SpectrumResult {
        wavenumbers: (0..nshell).collect(),
        energy,
        grid_resolution: (nx, ny),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::GasModel;
    use crate::mesh::{DomainBoundaries, UniformQuadMesh};
    use crate::schemes::{SchemeConfig, Variant};
    use std::f64::consts::PI;

    const GAS: GasModel = GasModel { gamma: 1.4 };

    fn sd(cells: usize, degree: usize) -> SemiDiscretization {
        let mesh = UniformQuadMesh::new(cells, cells, (0.0, 1.0), (0.0, 1.0), DomainBoundaries::periodic()).unwrap();
        SemiDiscretization::new(mesh, SchemeConfig::new(Variant::DgsemLglCollocation, degree), GAS).unwrap()
    }

    #[test]
    fn constant_field_is_all_in_shell_zero() {
        let s = sd(4, 3);
        let u = s.interpolate(|_, _| GAS.from_primitive(2.0, 0.3, -0.1, 1.0));
        let r = power_spectrum(&s, &u).unwrap();
        assert!((r.energy[0] - 2.0 * 0.1).abs() < 1e-13);
        assert!(r.energy[1..].iter().all(|&e| e < 1e-28));
        assert_eq!(r.grid_resolution, (16, 16));
    }

    #[test]
    fn single_mode_and_parseval() {
        let s = sd(8, 7);
        let k0 = 3.0;
        let u = s.interpolate(|x, _| GAS.from_primitive(1.0, (2.0 * PI * k0 * x).sin(), 0.0, 1.0));
        let r = power_spectrum(&s, &u).unwrap();
        let peak = r.energy[3];
        for (n, e) in r.energy.iter().enumerate() {
            if n != 3 {
                assert!(peak >= 1e6 * e, "shell {n}: {e} vs {peak}");
            }
        }
        // Parseval against the grid mean of rho |velocity|^2
        let (_, grid) = sample_equispaced(&s, &u);
        let mean: f64 = grid.iter().map(|g| (g.rho_u().powi(2) + g.rho_v().powi(2)) / g.rho()).sum::<f64>() / grid.len() as f64;
        assert!((r.total() - mean).abs() <= 1e-10 * mean);
    }

    #[test]
    fn walls_are_rejected() {
        let mesh = UniformQuadMesh::new(2, 2, (0.0, 1.0), (0.0, 1.0), DomainBoundaries::walls()).unwrap();
        let s = SemiDiscretization::new(mesh, SchemeConfig::new(Variant::GaussEp, 2), GAS).unwrap();
        let u = s.interpolate(|_, _| GAS.from_primitive(1.0, 0.0, 0.0, 1.0));
        assert!(power_spectrum(&s, &u).is_err());
    }
}
