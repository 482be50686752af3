use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{
    conservative_from_entropy, Axis, entropy_variables_prim, ConsState, EntropyVars, GasModel, Prim,
};
use crate::mesh::{BoundaryCondition, FaceNeighbor, UniformQuadMesh};

use super::boundary::{mirror_axis, normal_flux};
use super::config::{KernelPath, ProjectionMode, SchemeConfig, Variant};
use super::field::SolutionField;
use super::kernels::{
    dense_hybridized, lift_faces, self_fluxes, volume_face_coupling, volume_lines, FaceResidual, Residual,
    TracePoint, FACE_AXIS, FACE_SIGN,
};
use super::operators::{tensor_apply, tensor_apply_shifted, SchemeOperators, MAX_FACE, MAX_VOL};

/// Pointwise source term `s(u, x, y, t)`.
pub type SourceFn = Arc<dyn Fn(&ConsState, f64, f64, f64) -> [f64; 4] + Send + Sync>;

/// States the spatial operator sees for one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedTrace {
    /// Values at the solution nodes, x fastest.
    pub volume: Vec<ConsState>,
    /// Values at face points, face-major (left, right, bottom, top).
    pub face: Vec<ConsState>,
    /// Projected entropy variables at the solution nodes.
    pub entropy_vars: Vec<EntropyVars>,
}

/// A mesh, a scheme variant and a gas model wired into a right-hand side.
#[derive(Clone)]
pub struct SemiDiscretization {
    mesh: UniformQuadMesh,
    ops: SchemeOperators,
    config: SchemeConfig,
    gas: GasModel,
    source: Option<SourceFn>,
    kernel: KernelPath,
    projection: ProjectionMode,
}

impl fmt::Debug for SemiDiscretization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemiDiscretization")
            .field("config", &self.config)
            .field("mesh", &(self.mesh.nx, self.mesh.ny))
            .field("kernel", &self.kernel)
            .field("projection", &self.projection)
            .field("source", &self.source.is_some())
            .finish()
    }
}

fn trace_point(u: ConsState, gas: &GasModel) -> Result<TracePoint> {
    Ok(TracePoint {
        w: Prim::from_cons(&u, gas)?,
        u,
    })
}

fn block_state(block: &[f64], i: usize) -> ConsState {
    ConsState([block[4 * i], block[4 * i + 1], block[4 * i + 2], block[4 * i + 3]])
}

fn first_error(errors: Option<(usize, Error)>) -> Result<()> {
    match errors {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

impl SemiDiscretization {
    pub fn new(mesh: UniformQuadMesh, config: SchemeConfig, gas: GasModel) -> Result<Self> {
        let ops = SchemeOperators::new(config.variant, config.degree)?;
        let mut sd = Self {
            mesh,
            ops,
            config,
            gas,
            source: None,
            kernel: KernelPath::Auto,
            projection: ProjectionMode::Auto,
        };
        sd.set_paths(KernelPath::Auto, ProjectionMode::Auto)?;
        Ok(sd)
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }

    /// Override the kernel and projection choices (testing and cross-checks).
    pub fn with_paths(mut self, kernel: KernelPath, projection: ProjectionMode) -> Result<Self> {
        self.set_paths(kernel, projection)?;
        Ok(self)
    }

    fn set_paths(&mut self, kernel: KernelPath, projection: ProjectionMode) -> Result<()> {
        let variant = self.config.variant;
        let kernel = match kernel {
            KernelPath::Auto => match variant {
                Variant::DgsemLglCollocation | Variant::DgsemVolumeEp => KernelPath::Collocation,
                Variant::GaussEp | Variant::DgsemCcFaceEp => KernelPath::Hybridized,
            },
            k => k,
        };
        if kernel == KernelPath::Collocation && !self.ops.faces_are_edge_nodes() {
            return Err(Error::InvalidArgument(format!(
                "collocation kernel needs face points at the edge nodes, which {variant} N={} lacks",
                self.config.degree
            )));
        }
        let projection = match projection {
            ProjectionMode::Auto => match variant {
                Variant::DgsemLglCollocation => ProjectionMode::None,
                Variant::GaussEp | Variant::DgsemCcFaceEp => ProjectionMode::Faces,
                Variant::DgsemVolumeEp => ProjectionMode::Full,
            },
            p => p,
        };
        self.kernel = kernel;
        self.projection = projection;
        Ok(())
    }

    pub fn mesh(&self) -> &UniformQuadMesh {
        &self.mesh
    }

    pub fn ops(&self) -> &SchemeOperators {
        &self.ops
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn kernel(&self) -> KernelPath {
        self.kernel
    }

    pub fn projection(&self) -> ProjectionMode {
        self.projection
    }

    pub fn nodes_per_element(&self) -> usize {
        self.ops.nodes_per_element()
    }

    pub fn zero_field(&self) -> SolutionField {
        SolutionField::zeros(self.mesh.n_elements(), self.nodes_per_element())
    }

    /// Physical coordinates of the solution nodes of `element`, x fastest.
    pub fn node_coordinates(&self, element: usize) -> Vec<(f64, f64)> {
        let r = &self.ops.diff.basis_nodes;
        self.mesh.element_nodes(element, r, r)
    }

    /// Nodal interpolation of `f` at the solution nodes.
    pub fn interpolate<F>(&self, f: F) -> SolutionField
    where
        F: Fn(f64, f64) -> ConsState,
    {
        let mut field = self.zero_field();
        for e in 0..self.mesh.n_elements() {
            for (i, (x, y)) in self.node_coordinates(e).into_iter().enumerate() {
                field.set_node(e, i, f(x, y));
            }
        }
        field
    }

    /// Largest `|velocity| + c` over all solution nodes.
    pub fn max_wave_speed(&self, u: &SolutionField) -> Result<f64> {
        let mut lam = 0.0f64;
        for e in 0..u.n_elements() {
            for i in 0..u.nodes_per_element() {
                let w = Prim::from_cons(&u.node(e, i), &self.gas).map_err(|err| err.at(e, i))?;
                lam = lam.max((w.u * w.u + w.v * w.v).sqrt() + w.sound_speed(&self.gas));
            }
        }
        Ok(lam)
    }

    /// Phase one for one element: states at volume and face points, and optionally
    /// the projected entropy variables at the solution nodes.
    fn project_element(
        &self,
        element: usize,
        block: &[f64],
        vol: &mut [TracePoint],
        face: &mut [TracePoint],
        mut vtilde_out: Option<&mut [[f64; 4]]>,
    ) -> Result<()> {
        let gas = &self.gas;
        let ops = &self.ops;
        let nv = ops.nodes_per_element();
        let nvol = nv;
        let at = |p: usize| move |err: Error| err.at(element, p);

        if self.projection == ProjectionMode::None {
            for i in 0..nv {
                vol[i] = trace_point(block_state(block, i), gas).map_err(at(i))?;
                if let Some(out) = vtilde_out.as_deref_mut() {
                    out[i] = entropy_variables_prim(&vol[i].w, gas).0;
                }
            }
            for (fp, row) in ops.face_couplings.iter().enumerate() {
                let mut acc = [0.0; 4];
                for c in row {
                    for v in 0..4 {
                        acc[v] += c.weight * vol[c.node].u.0[v];
                    }
                }
                face[fp] = trace_point(ConsState(acc), gas).map_err(at(nvol + fp))?;
            }
            return Ok(());
        }

        // Entropy variables at the nodes and the round-trip defect u - u(v(u)), which
        // is added back to reconstructed states so that constants pass exactly.
        let mut vt = [[0.0; 4]; MAX_VOL];
        let mut defect = [[0.0; 4]; MAX_VOL];
        for i in 0..nv {
            let u = block_state(block, i);
            let w = Prim::from_cons(&u, gas).map_err(at(i))?;
            let v = entropy_variables_prim(&w, gas);
            let back = conservative_from_entropy(&v, gas).map_err(at(i))?;
            defect[i] = std::array::from_fn(|k| u.0[k] - back.0[k]);
            vt[i] = v.0;
            if self.projection == ProjectionMode::Faces {
                vol[i] = TracePoint { u, w };
            }
        }
        let reconstruct = |v: [f64; 4], d: &[f64; 4], p: usize| -> Result<TracePoint> {
            let u = conservative_from_entropy(&EntropyVars(v), gas).map_err(at(p))?;
            trace_point(ConsState(std::array::from_fn(|k| u.0[k] + d[k])), gas).map_err(at(p))
        };
        if self.projection == ProjectionMode::Full {
            if !ops.mass_is_collocated() {
                let (n, nq) = (ops.n, ops.nq);
                let nodal: Vec<[f64; 4]> = (0..nv).map(|i| block_state(block, i).0).collect();
                let mut uq = [[0.0; 4]; MAX_VOL];
                tensor_apply_shifted(&ops.vq, nq, n, &nodal, &mut uq);
                let mut vq = [[0.0; 4]; MAX_VOL];
                for q in 0..nq * nq {
                    let w = Prim::from_cons(&ConsState(uq[q]), gas).map_err(at(q))?;
                    vq[q] = entropy_variables_prim(&w, gas).0;
                }
                tensor_apply_shifted(&ops.pq, n, nq, &vq[..nq * nq], &mut vt);
            }
            for i in 0..nv {
                vol[i] = reconstruct(vt[i], &defect[i], i)?;
            }
        }
        for (fp, row) in ops.face_couplings.iter().enumerate() {
            let r0 = row[0].node;
            let mut acc = vt[r0];
            for c in row {
                for v in 0..4 {
                    acc[v] += c.weight * (vt[c.node][v] - vt[r0][v]);
                }
            }
            face[fp] = reconstruct(acc, &defect[r0], nvol + fp)?;
        }
        if let Some(out) = vtilde_out {
            out[..nv].copy_from_slice(&vt[..nv]);
        }
        Ok(())
    }

    /// The states the spatial operator uses for `element`.
    pub fn entropy_project(&self, element: usize, u: &SolutionField) -> Result<ProjectedTrace> {
        let nv = self.nodes_per_element();
        let nfp = self.ops.face_points_per_element();
        let mut vol = vec![TracePoint::default(); nv];
        let mut face = vec![TracePoint::default(); nfp];
        let mut vt = vec![[0.0; 4]; nv];
        self.project_element(element, u.element_block(element), &mut vol, &mut face, Some(&mut vt))?;
        Ok(ProjectedTrace {
            volume: vol.iter().map(|p| p.u).collect(),
            face: face.iter().map(|p| p.u).collect(),
            entropy_vars: vt.into_iter().map(EntropyVars).collect(),
        })
    }

    /// Reference-element mass matrix applied to one element block (no Jacobian).
    pub fn apply_mass(&self, block: &[f64]) -> Vec<[f64; 4]> {
        let ops = &self.ops;
        let n = ops.n;
        let nv = n * n;
        let x: Vec<[f64; 4]> = (0..nv).map(|i| block_state(block, i).0).collect();
        let mut out = vec![[0.0; 4]; nv];
        match &ops.mass_diagonal {
            Some(d) => {
                for j in 0..n {
                    for i in 0..n {
                        let w = d[i] * d[j];
                        out[i + n * j] = x[i + n * j].map(|v| w * v);
                    }
                }
            }
            None => {
                let m: Vec<f64> = (0..n * n).map(|k| ops.mass.m[(k / n, k % n)]).collect();
                tensor_apply(&m, n, n, &x, &mut out);
            }
        }
        out
    }

    pub fn rhs(&self, u: &SolutionField, t: f64) -> Result<SolutionField> {
        let mut du = self.zero_field();
        self.rhs_into(u, t, &mut du)?;
        Ok(du)
    }

    /// Semidiscrete time derivative. The error of the lowest-numbered failing
    /// element is returned, so results do not depend on thread scheduling.
    pub fn rhs_into(&self, u: &SolutionField, t: f64, du: &mut SolutionField) -> Result<()> {
        if u.n_elements() != self.mesh.n_elements() || u.nodes_per_element() != self.nodes_per_element() {
            return Err(Error::InvalidArgument("solution field does not match the discretization".into()));
        }
        self.rhs_slice(u.as_slice(), t, du.as_mut_slice())
    }

    /// [`Self::rhs_into`] on flat storage in the [`SolutionField`] layout.
    pub fn rhs_slice(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        let nv = self.nodes_per_element();
        let len = self.mesh.n_elements() * nv * 4;
        if u.len() != len || du.len() != len {
            return Err(Error::InvalidArgument(format!(
                "expected {len} values, got {} and {}",
                u.len(),
                du.len()
            )));
        }
        let stride = nv + self.ops.face_points_per_element();
        let mut traces = vec![TracePoint::default(); self.mesh.n_elements() * stride];
        let block = |e: usize| &u[e * 4 * nv..(e + 1) * 4 * nv];

        first_error(
            traces
                .par_chunks_mut(stride)
                .enumerate()
                .filter_map(|(e, chunk)| {
                    let (vol, face) = chunk.split_at_mut(nv);
                    self.project_element(e, block(e), vol, face, None)
                        .err()
                        .map(|err| (e, err))
                })
                .min_by_key(|(e, _)| *e),
        )?;

        first_error(
            du.par_chunks_mut(4 * nv)
                .enumerate()
                .filter_map(|(e, out)| {
                    self.element_update(e, block(e), &traces, stride, t, out)
                        .err()
                        .map(|err| (e, err))
                })
                .min_by_key(|(e, _)| *e),
        )
    }

    /// Advective time step bound `0.5 h / ((N+1)^2 lambda_max)`.
    pub fn cfl_time_step(&self, u: &[f64]) -> Option<f64> {
        let gas = &self.gas;
        let mut lam = 0.0f64;
        for x in u.chunks_exact(4) {
            let w = Prim::from_cons(&ConsState([x[0], x[1], x[2], x[3]]), gas).ok()?;
            lam = lam.max((w.u * w.u + w.v * w.v).sqrt() + w.sound_speed(gas));
        }
        let n1 = (self.config.degree + 1) as f64;
        (lam > 0.0).then(|| 0.5 * self.mesh.hx.min(self.mesh.hy) / (n1 * n1 * lam))
    }

    fn element_update(
        &self,
        e: usize,
        block: &[f64],
        traces: &[TracePoint],
        stride: usize,
        t: f64,
        out: &mut [f64],
    ) -> Result<()> {
        let ops = &self.ops;
        let n = ops.n;
        let nv = n * n;
        let nf = ops.nf;
        let gas = &self.gas;
        let flux = self.config.volume_flux;
        let own = &traces[e * stride..(e + 1) * stride];
        let (vol, face) = own.split_at(nv);
        let scale = [2.0 / self.mesh.hx, 2.0 / self.mesh.hy];

        let mut r: Residual = [[0.0; 4]; MAX_VOL];
        let mut rf: FaceResidual = [[0.0; 4]; MAX_FACE];
        let mut fx = [[0.0; 4]; MAX_VOL];
        let mut fy = [[0.0; 4]; MAX_VOL];
        let mut fface = [[0.0; 4]; MAX_FACE];
        let dense = self.kernel == KernelPath::DenseReference;
        if dense {
            dense_hybridized(ops, vol, face, scale, flux, gas, &mut r, &mut rf);
        } else {
            self_fluxes(vol, Axis::X, flux, gas, &mut fx[..nv]);
            self_fluxes(vol, Axis::Y, flux, gas, &mut fy[..nv]);
            for f in 0..4 {
                let range = f * nf..(f + 1) * nf;
                self_fluxes(&face[range.clone()], FACE_AXIS[f], flux, gas, &mut fface[range]);
            }
            let fself = [&fx[..nv], &fy[..nv]];
            volume_lines(ops, vol, fself, scale, flux, gas, &mut r);
            if self.kernel == KernelPath::Hybridized {
                volume_face_coupling(ops, vol, face, fself, &fface, scale, flux, gas, &mut r, &mut rf);
            }
        }

        for f in 0..4 {
            let axis = FACE_AXIS[f];
            let sign = FACE_SIGN[f];
            let neighbor = self.mesh.neighbor(e, f);
            for k in 0..nf {
                let fp = f * nf + k;
                let p = &face[fp];
                let g = match neighbor {
                    FaceNeighbor::Element { element, face: nface } => {
                        let q = &traces[element * stride + nv + nface * nf + k];
                        normal_flux(&self.config, (&p.u, &p.w), (&q.u, &q.w), axis, sign, gas)
                    }
                    FaceNeighbor::Boundary(BoundaryCondition::ReflectiveWall) => {
                        let (mu, mw) = mirror_axis(&p.u, &p.w, axis);
                        normal_flux(&self.config, (&p.u, &p.w), (&mu, &mw), axis, sign, gas)
                    }
                    FaceNeighbor::Boundary(BoundaryCondition::Periodic) => {
                        unreachable!("periodic faces are resolved to elements by the mesh")
                    }
                };
                let c = scale[axis.index()] * ops.face_weights[k];
                let (target, own_flux) = match self.kernel {
                    KernelPath::Collocation => {
                        let node = ops.edge_node(f, k);
                        let own = if axis == Axis::X { fx[node] } else { fy[node] };
                        (&mut r[node], own)
                    }
                    KernelPath::DenseReference => (&mut rf[fp], [0.0; 4]),
                    _ => (&mut rf[fp], fface[fp]),
                };
                for v in 0..4 {
                    target[v] += c * (g[v] - sign * own_flux[v]);
                }
            }
        }
        if self.kernel != KernelPath::Collocation {
            lift_faces(ops, &rf, &mut r);
        }

        let mut res = [[0.0; 4]; MAX_VOL];
        match &ops.mass_diagonal {
            Some(d) => {
                for j in 0..n {
                    for i in 0..n {
                        let inv = 1.0 / (d[i] * d[j]);
                        res[i + n * j] = r[i + n * j].map(|v| -inv * v);
                    }
                }
            }
            None => {
                tensor_apply(&ops.mass_inv, n, n, &r[..nv], &mut res);
                for x in res[..nv].iter_mut() {
                    *x = x.map(|v| -v);
                }
            }
        }

        if let Some(source) = &self.source {
            if ops.mass_is_collocated() {
                for (i, (x, y)) in self.node_coordinates(e).into_iter().enumerate() {
                    let s = source(&block_state(block, i), x, y, t);
                    for v in 0..4 {
                        res[i][v] += s[v];
                    }
                }
            } else {
                let nq = ops.nq;
                let nodal: Vec<[f64; 4]> = (0..nv).map(|i| block_state(block, i).0).collect();
                let mut uq = [[0.0; 4]; MAX_VOL];
                tensor_apply(&ops.vq, nq, n, &nodal, &mut uq);
                let qn = &ops.mass.volume_quadrature.nodes;
                let points = self.mesh.element_nodes(e, qn, qn);
                let mut sq = [[0.0; 4]; MAX_VOL];
                for (q, (x, y)) in points.into_iter().enumerate() {
                    sq[q] = source(&ConsState(uq[q]), x, y, t);
                }
                let mut s = [[0.0; 4]; MAX_VOL];
                tensor_apply(&ops.pq, n, nq, &sq[..nq * nq], &mut s);
                for i in 0..nv {
                    for v in 0..4 {
                        res[i][v] += s[i][v];
                    }
                }
            }
        }

        for i in 0..nv {
            out[4 * i..4 * i + 4].copy_from_slice(&res[i]);
        }
        Ok(())
    }
}
