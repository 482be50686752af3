use crate::error::Result;
use crate::euler::{entropy, ConsState};
use crate::schemes::{SemiDiscretization, SolutionField};

fn quadrature_states(sd: &SemiDiscretization, block: &[f64]) -> Vec<ConsState> {
    let ops = sd.ops();
    let (n, nq) = (ops.n, ops.nq);
    let node = |i: usize| [block[4 * i], block[4 * i + 1], block[4 * i + 2], block[4 * i + 3]];
    if ops.mass_is_collocated() {
        return (0..n * n).map(|i| ConsState(node(i))).collect();
    }
    let mut out = Vec::with_capacity(nq * nq);
    for qj in 0..nq {
        for qi in 0..nq {
            let mut acc = [0.0; 4];
            for j in 0..n {
                for i in 0..n {
                    let w = ops.vq[qi * n + i] * ops.vq[qj * n + j];
                    let x = node(i + n * j);
                    for v in 0..4 {
                        acc[v] += w * x[v];
                    }
                }
            }
            out.push(ConsState(acc));
        }
    }
    out
}

fn quadrature_weights(sd: &SemiDiscretization) -> Vec<f64> {
    let w = &sd.ops().mass.volume_quadrature.weights;
    let mut out = Vec::with_capacity(w.len() * w.len());
    for wj in w {
        for wi in w {
            out.push(wi * wj);
        }
    }
    out
}

/// Quadrature approximation of the integral of `S(u)` over the domain.
pub fn integrated_entropy(sd: &SemiDiscretization, u: &SolutionField) -> Result<f64> {
    let jac = sd.mesh().jacobian();
    let w = quadrature_weights(sd);
    let mut total = 0.0;
    for e in 0..u.n_elements() {
        for (q, s) in quadrature_states(sd, u.element_block(e)).iter().enumerate() {
            total += jac * w[q] * entropy(s, sd.gas()).map_err(|err| err.at(e, q))?;
        }
    }
    Ok(total)
}

/// Integrals of the four conserved variables, `sum_e J 1^T M u_e`.
pub fn integrated_conserved(sd: &SemiDiscretization, u: &SolutionField) -> [f64; 4] {
    let jac = sd.mesh().jacobian();
    let mut tot = [0.0; 4];
    for e in 0..u.n_elements() {
        for m in sd.apply_mass(u.element_block(e)) {
            for v in 0..4 {
                tot[v] += jac * m[v];
            }
        }
    }
    tot
}

/// Semidiscrete entropy production and the sum of magnitudes of its terms, the
/// natural scale for relative comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRate {
    pub rate: f64,
    pub scale: f64,
}

/// `sum_e J v~_e^T M du_e`, with `v~` the projected entropy variables the scheme
/// evaluates its operator with (the nodal entropy variables for collocation).
pub fn entropy_rate_with_scale(
    sd: &SemiDiscretization,
    u: &SolutionField,
    du: &SolutionField,
) -> Result<EntropyRate> {
    let jac = sd.mesh().jacobian();
    let (mut rate, mut scale) = (0.0, 0.0);
    for e in 0..u.n_elements() {
        let vt = sd.entropy_project(e, u)?.entropy_vars;
        for (v, m) in vt.iter().zip(sd.apply_mass(du.element_block(e))) {
            for k in 0..4 {
                let c = jac * v.0[k] * m[k];
                rate += c;
                scale += c.abs();
            }
        }
    }
    Ok(EntropyRate { rate, scale })
}

pub fn entropy_rate(sd: &SemiDiscretization, u: &SolutionField, du: &SolutionField) -> Result<f64> {
    Ok(entropy_rate_with_scale(sd, u, du)?.rate)
}
