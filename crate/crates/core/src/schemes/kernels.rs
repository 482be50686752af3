//! Per-element flux-differencing kernels (phase two of the rhs).

use crate::euler::{two_point_prim, Axis, ConsState, GasModel, Prim, TwoPointFlux};

use super::operators::{SchemeOperators, MAX_FACE, MAX_VOL};

/// A trace value together with its primitive variables.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TracePoint {
    pub u: ConsState,
    pub w: Prim,
}

impl Default for TracePoint {
    fn default() -> Self {
        Self {
            u: ConsState([0.0; 4]),
            w: Prim {
                rho: 0.0,
                u: 0.0,
                v: 0.0,
                p: 0.0,
                ln_rho: 0.0,
                ln_p: 0.0,
            },
        }
    }
}

pub(crate) type Residual = [[f64; 4]; MAX_VOL];
pub(crate) type FaceResidual = [[f64; 4]; MAX_FACE];

#[inline]
fn axpy(acc: &mut [f64; 4], a: f64, x: &[f64; 4]) {
    for v in 0..4 {
        acc[v] += a * x[v];
    }
}

pub(crate) const FACE_AXIS: [Axis; 4] = [Axis::X, Axis::X, Axis::Y, Axis::Y];
pub(crate) const FACE_SIGN: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

/// Two-point flux of each point with itself, per axis. Contributions are formed as
/// `F(a, b) - F(a, a)`, which changes nothing in exact arithmetic (rows of the
/// skew operator sum to zero) but makes constant states produce exact zeros.
pub(crate) fn self_fluxes(
    points: &[TracePoint],
    axis: Axis,
    flux: TwoPointFlux,
    gas: &GasModel,
    out: &mut [[f64; 4]],
) {
    for (p, o) in points.iter().zip(out.iter_mut()) {
        *o = two_point_prim(flux, &p.w, &p.w, axis, gas);
    }
}

/// Volume-volume coupling along all x and y lines, using only the `i < k` pairs.
pub(crate) fn volume_lines(
    ops: &SchemeOperators,
    vol: &[TracePoint],
    fself: [&[[f64; 4]]; 2],
    scale: [f64; 2],
    flux: TwoPointFlux,
    gas: &GasModel,
    r: &mut Residual,
) {
    let n = ops.n;
    let (fx, fy) = (fself[0], fself[1]);
    for j in 0..n {
        let cw = scale[0] * ops.volume_weights[j];
        for &(i, k, s) in &ops.line_pairs {
            let (a, b) = (i + n * j, k + n * j);
            let g = two_point_prim(flux, &vol[a].w, &vol[b].w, Axis::X, gas);
            let c = cw * s;
            for v in 0..4 {
                r[a][v] += c * (g[v] - fx[a][v]);
                r[b][v] -= c * (g[v] - fx[b][v]);
            }
        }
    }
    for i in 0..n {
        let cw = scale[1] * ops.volume_weights[i];
        for &(j, k, s) in &ops.line_pairs {
            let (a, b) = (i + n * j, i + n * k);
            let g = two_point_prim(flux, &vol[a].w, &vol[b].w, Axis::Y, gas);
            let c = cw * s;
            for v in 0..4 {
                r[a][v] += c * (g[v] - fy[a][v]);
                r[b][v] -= c * (g[v] - fy[b][v]);
            }
        }
    }
}

/// Volume-face coupling blocks of the hybridized operator. `fface` holds the
/// self flux of each face point along its face normal axis.
#[allow(clippy::too_many_arguments)]
pub(crate) fn volume_face_coupling(
    ops: &SchemeOperators,
    vol: &[TracePoint],
    face: &[TracePoint],
    fself: [&[[f64; 4]]; 2],
    fface: &[[f64; 4]],
    scale: [f64; 2],
    flux: TwoPointFlux,
    gas: &GasModel,
    r: &mut Residual,
    rf: &mut FaceResidual,
) {
    let nf = ops.nf;
    for f in 0..4 {
        let axis = FACE_AXIS[f];
        let fv = fself[axis.index()];
        let base = scale[axis.index()] * FACE_SIGN[f];
        for k in 0..nf {
            let fp = f * nf + k;
            let cw = base * ops.face_weights[k];
            for c in &ops.face_couplings[fp] {
                let g = two_point_prim(flux, &vol[c.node].w, &face[fp].w, axis, gas);
                let coef = cw * c.weight;
                for v in 0..4 {
                    r[c.node][v] += coef * (g[v] - fv[c.node][v]);
                    rf[fp][v] -= coef * (g[v] - fface[fp][v]);
                }
            }
        }
    }
}

/// Map face residuals back to the solution nodes with the transpose of the face
/// interpolation.
pub(crate) fn lift_faces(ops: &SchemeOperators, rf: &FaceResidual, r: &mut Residual) {
    for (fp, row) in ops.face_couplings.iter().enumerate() {
        for c in row {
            axpy(&mut r[c.node], c.weight, &rf[fp]);
        }
    }
}

/// Dense evaluation of the hybridized operator: every entry of `Qh - Qh^T` per axis
/// is visited, including zeros, and fluxes are summed without differencing. Volume
/// points come first, then face points. Face rows are returned without the
/// `-F(f, f) . n` row-sum term, which the caller's surface term must not subtract.
#[allow(clippy::too_many_arguments)]
pub(crate) fn dense_hybridized(
    ops: &SchemeOperators,
    vol: &[TracePoint],
    face: &[TracePoint],
    scale: [f64; 2],
    flux: TwoPointFlux,
    gas: &GasModel,
    r: &mut Residual,
    rf: &mut FaceResidual,
) {
    let n = ops.n;
    let nv = n * n;
    let nf = ops.nf;
    let nh = nv + 4 * nf;
    // face interpolation as a dense (4 nf) x nv matrix
    let mut ef = vec![0.0; 4 * nf * nv];
    for (fp, row) in ops.face_couplings.iter().enumerate() {
        for c in row {
            ef[fp * nv + c.node] = c.weight;
        }
    }
    for axis in [Axis::X, Axis::Y] {
        let mut a = vec![0.0; nh * nh];
        for p in 0..nv {
            let (pi, pj) = (p % n, p / n);
            for q in 0..nv {
                let (qi, qj) = (q % n, q / n);
                a[p * nh + q] = match axis {
                    Axis::X if pj == qj => scale[0] * ops.volume_weights[pj] * ops.line_skew[pi * n + qi],
                    Axis::Y if pi == qi => scale[1] * ops.volume_weights[pi] * ops.line_skew[pj * n + qj],
                    _ => 0.0,
                };
            }
        }
        for f in 0..4 {
            if FACE_AXIS[f] != axis {
                continue;
            }
            for k in 0..nf {
                let fp = f * nf + k;
                let b = scale[axis.index()] * FACE_SIGN[f] * ops.face_weights[k];
                for p in 0..nv {
                    let e = b * ef[fp * nv + p];
                    a[p * nh + nv + fp] = e;
                    a[(nv + fp) * nh + p] = -e;
                }
            }
        }
        let point = |h: usize| if h < nv { &vol[h].w } else { &face[h - nv].w };
        for p in 0..nh {
            let mut acc = [0.0; 4];
            for q in 0..nh {
                let c = a[p * nh + q];
                if p == q {
                    continue;
                }
                let g = two_point_prim(flux, point(p), point(q), axis, gas);
                axpy(&mut acc, c, &g);
            }
            if p < nv {
                axpy(&mut r[p], 1.0, &acc);
            } else {
                axpy(&mut rf[p - nv], 1.0, &acc);
            }
        }
    }
}
