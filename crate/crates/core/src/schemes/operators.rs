use crate::error::{Error, Result};
use crate::refops::{
    build_ref_operators, build_ref_operators_with_basis, clenshaw_curtis_quadrature,
    gauss_quadrature, lgl_quadrature, FaceEval, RefOperators1D,
};

use super::config::Variant;

/// Largest supported polynomial degree; sizes the per-element scratch arrays.
pub const MAX_DEGREE: usize = 7;
pub(crate) const MAX_N: usize = MAX_DEGREE + 1;
pub(crate) const MAX_VOL: usize = MAX_N * MAX_N;
pub(crate) const MAX_FACE: usize = 4 * MAX_N;

/// One nonzero entry of the volume-to-face interpolation operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceCoupling {
    pub node: usize,
    pub weight: f64,
}

/// Tensor-product operator data for one variant and degree.
///
/// `diff` is always collocated at the solution nodes and drives the flux
/// differencing; `mass` defines the mass matrix and the L2 projection. They differ
/// only for the volume entropy projection variant, whose mass matrix is integrated
/// with Gauss quadrature.
#[derive(Debug, Clone)]
pub struct SchemeOperators {
    pub variant: Variant,
    pub degree: usize,
    pub diff: RefOperators1D,
    pub mass: RefOperators1D,
    /// Solution nodes per axis.
    pub n: usize,
    /// Face points per element edge.
    pub nf: usize,
    /// Nonzero `(i, k, (Q - Q^T)_ik)` with `i < k`.
    pub line_pairs: Vec<(usize, usize, f64)>,
    /// Dense `Q - Q^T`, row-major.
    pub line_skew: Vec<f64>,
    pub volume_weights: Vec<f64>,
    pub face_weights: Vec<f64>,
    /// Interpolation rows for face point `f * nf + k`.
    pub face_couplings: Vec<Vec<FaceCoupling>>,
    /// Per-axis mass matrix diagonal when the mass matrix is diagonal.
    pub mass_diagonal: Option<Vec<f64>>,
    /// Per-axis inverse mass matrix, row-major.
    pub mass_inv: Vec<f64>,
    /// Mass quadrature points per axis.
    pub nq: usize,
    /// Per-axis basis values at mass quadrature points, `nq x n` row-major.
    pub vq: Vec<f64>,
    /// Per-axis projection `n x nq` row-major.
    pub pq: Vec<f64>,
}

impl SchemeOperators {
    pub fn new(variant: Variant, degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::InvalidArgument(format!(
                "polynomial degree must be in 1..={MAX_DEGREE}, got {degree}"
            )));
        }
        let n = degree + 1;
        let lgl = lgl_quadrature(n)?;
        let (diff, mass) = match variant {
            Variant::DgsemLglCollocation => {
                let ops = build_ref_operators(degree, &lgl, FaceEval::Endpoints)?;
                (ops.clone(), ops)
            }
            Variant::GaussEp => {
                let ops = build_ref_operators(degree, &gauss_quadrature(n)?, FaceEval::Endpoints)?;
                (ops.clone(), ops)
            }
            Variant::DgsemCcFaceEp => {
                let cc = clenshaw_curtis_quadrature(n)?;
                let ops = build_ref_operators(degree, &lgl, FaceEval::Nodes(cc))?;
                (ops.clone(), ops)
            }
            Variant::DgsemVolumeEp => {
                let diff = build_ref_operators(degree, &lgl, FaceEval::Endpoints)?;
                let mass = build_ref_operators_with_basis(
                    degree,
                    &gauss_quadrature(n)?,
                    FaceEval::Endpoints,
                    &lgl.nodes,
                )?;
                (diff, mass)
            }
        };
        debug_assert!(diff.is_collocated());

        let skew = &diff.q - diff.q.transpose();
        let mut line_pairs = Vec::new();
        let mut line_skew = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                line_skew[i * n + k] = skew[(i, k)];
                if i < k && skew[(i, k)] != 0.0 {
                    line_pairs.push((i, k, skew[(i, k)]));
                }
            }
        }

        let nf = diff.face_quadrature.len();
        let mut face_couplings = Vec::with_capacity(4 * nf);
        for f in 0..4 {
            let end = f % 2;
            for k in 0..nf {
                let mut row = Vec::new();
                for a in 0..n {
                    for t in 0..n {
                        let w = diff.vf[(end, a)] * diff.vt[(k, t)];
                        if w != 0.0 {
                            // a runs along the face normal, t along the face
                            let node = if f < 2 { a + n * t } else { t + n * a };
                            row.push(FaceCoupling { node, weight: w });
                        }
                    }
                }
                row.sort_by_key(|c| c.node);
                face_couplings.push(row);
            }
        }

        let is_diag = (0..n).all(|i| (0..n).all(|j| i == j || mass.m[(i, j)] == 0.0));
        let mass_diagonal = is_diag.then(|| (0..n).map(|i| mass.m[(i, i)]).collect());
        let nq = mass.n_volume();
        let mass_inv = row_major(&mass.m_inv);
        let vq = row_major(&mass.vq);
        let pq = row_major(&mass.pq);

        Ok(Self {
            variant,
            degree,
            volume_weights: diff.volume_quadrature.weights.clone(),
            face_weights: diff.face_quadrature.weights.clone(),
            diff,
            mass,
            n,
            nf,
            line_pairs,
            line_skew,
            face_couplings,
            mass_diagonal,
            mass_inv,
            nq,
            vq,
            pq,
        })
    }

    pub fn nodes_per_element(&self) -> usize {
        self.n * self.n
    }

    pub fn face_points_per_element(&self) -> usize {
        4 * self.nf
    }

    /// Whether the mass matrix is diagonal with the solution nodes as its quadrature.
    pub fn mass_is_collocated(&self) -> bool {
        self.mass.is_collocated()
    }

    /// Whether face points coincide with the edge solution nodes (LGL endpoints, same
    /// tangential nodes), so face values are plain extractions.
    pub fn faces_are_edge_nodes(&self) -> bool {
        self.face_couplings
            .iter()
            .all(|row| row.len() == 1 && row[0].weight == 1.0)
    }

    /// Volume node on the edge for face point `k` of face `f` (collocation layout).
    pub fn edge_node(&self, face: usize, k: usize) -> usize {
        let n = self.n;
        match face {
            0 => n * k,
            1 => (n - 1) + n * k,
            2 => k,
            _ => k + n * (n - 1),
        }
    }

    /// Reference coordinates of the solution nodes, x fastest.
    pub fn reference_nodes(&self) -> Vec<(f64, f64)> {
        let r = &self.diff.basis_nodes;
        let mut out = Vec::with_capacity(self.n * self.n);
        for &eta in r {
            for &xi in r {
                out.push((xi, eta));
            }
        }
        out
    }
}

fn row_major(m: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Apply the 1D matrix `a` (`rows x cols`, row-major) along both axes of a
/// `cols x cols` tensor-product block of 4-vectors.
pub(crate) fn tensor_apply(
    a: &[f64],
    rows: usize,
    cols: usize,
    input: &[[f64; 4]],
    out: &mut [[f64; 4]],
) {
    let mut tmp = [[0.0; 4]; MAX_VOL];
    for j in 0..cols {
        for r in 0..rows {
            let mut acc = [0.0; 4];
            for c in 0..cols {
                let w = a[r * cols + c];
                let x = &input[c + cols * j];
                for v in 0..4 {
                    acc[v] += w * x[v];
                }
            }
            tmp[r + rows * j] = acc;
        }
    }
    for s in 0..rows {
        for i in 0..rows {
            let mut acc = [0.0; 4];
            for j in 0..cols {
                let w = a[s * cols + j];
                let x = &tmp[i + rows * j];
                for v in 0..4 {
                    acc[v] += w * x[v];
                }
            }
            out[i + rows * s] = acc;
        }
    }
}

/// [`tensor_apply`] on differences from `input[0]`, which is added back afterwards.
/// Equal in exact arithmetic when the rows of `a` sum to one, and reproduces
/// constant blocks bitwise.
pub(crate) fn tensor_apply_shifted(
    a: &[f64],
    rows: usize,
    cols: usize,
    input: &[[f64; 4]],
    out: &mut [[f64; 4]],
) {
    let base = input[0];
    let mut shifted = [[0.0; 4]; MAX_VOL];
    for (d, x) in shifted.iter_mut().zip(&input[..cols * cols]) {
        *d = std::array::from_fn(|v| x[v] - base[v]);
    }
    tensor_apply(a, rows, cols, &shifted[..cols * cols], out);
    for x in out[..rows * rows].iter_mut() {
        for v in 0..4 {
            x[v] += base[v];
        }
    }
}
