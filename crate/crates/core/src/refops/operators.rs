use nalgebra::DMatrix;

use super::lagrange::LagrangeBasis;
use super::quadrature::{gauss_quadrature, lgl_quadrature, Quadrature1D};
use crate::error::{Error, Result};

/// Where a scheme evaluates traces along an element edge.
///
/// In 1D faces are always the endpoints; the choice matters for the tensor-product
/// assembly, where `Nodes` supplies the tangential quadrature used along each edge
/// (e.g. Clenshaw-Curtis points) instead of the volume rule.
#[derive(Debug, Clone, PartialEq)]
pub enum FaceEval {
    Endpoints,
    Nodes(Quadrature1D),
}

/// Reference-interval operators for one scheme variant.
///
/// The polynomial basis is the Lagrange basis of degree `degree` at `basis_nodes`,
/// so coefficients are nodal values at the scheme's natural nodes.
#[derive(Debug, Clone)]
pub struct RefOperators1D {
    pub degree: usize,
    pub volume_quadrature: Quadrature1D,
    /// Tangential quadrature along element edges (equals the volume rule unless
    /// built with [`FaceEval::Nodes`]).
    pub face_quadrature: Quadrature1D,
    pub basis_nodes: Vec<f64>,
    /// Mass matrix `Vq^T W Vq`, (N+1)x(N+1).
    pub m: DMatrix<f64>,
    /// Exact modal differentiation matrix `int phi_j' phi_i`.
    pub qhat: DMatrix<f64>,
    /// Quadrature-based differentiation matrix `Pq^T Qhat Pq`, n_q x n_q.
    pub q: DMatrix<f64>,
    /// Hybridized SBP operator on volume points followed by the two endpoints.
    pub qh: DMatrix<f64>,
    /// Basis values at volume quadrature points, n_q x (N+1).
    pub vq: DMatrix<f64>,
    /// Basis values at the endpoints -1 and 1, 2 x (N+1).
    pub vf: DMatrix<f64>,
    /// Basis values at the tangential face nodes, n_f x (N+1).
    pub vt: DMatrix<f64>,
    /// Quadrature-based L2 projection `M^-1 Vq^T W`, (N+1) x n_q.
    pub pq: DMatrix<f64>,
    /// Extrapolation from volume points to endpoints `Vf Pq`, 2 x n_q.
    pub e: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// `[Vq; Vf]`.
    pub vh: DMatrix<f64>,
    pub m_inv: DMatrix<f64>,
}

fn to_dmatrix(rows: Vec<Vec<f64>>, ncols: usize) -> DMatrix<f64> {
    let nrows = rows.len();
    DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Build the operator set with the default basis: Lagrange at the volume nodes when
/// the rule has exactly N+1 points, otherwise Lagrange at the (N+1) LGL nodes.
pub fn build_ref_operators(
    degree: usize,
    volume_rule: &Quadrature1D,
    face_eval: FaceEval,
) -> Result<RefOperators1D> {
    let basis_nodes = if volume_rule.len() == degree + 1 {
        volume_rule.nodes.clone()
    } else {
        lgl_quadrature(degree + 1)?.nodes
    };
    build_ref_operators_with_basis(degree, volume_rule, face_eval, &basis_nodes)
}

pub fn build_ref_operators_with_basis(
    degree: usize,
    volume_rule: &Quadrature1D,
    face_eval: FaceEval,
    basis_nodes: &[f64],
) -> Result<RefOperators1D> {
    if degree < 1 {
        return Err(Error::InvalidArgument(format!(
            "polynomial degree must be at least 1, got {degree}"
        )));
    }
    let nb = degree + 1;
    if basis_nodes.len() != nb {
        return Err(Error::InvalidArgument(format!(
            "expected {nb} basis nodes for degree {degree}, got {}",
            basis_nodes.len()
        )));
    }
    let nq = volume_rule.len();
    if nq < nb {
        return Err(Error::Construction(format!(
            "{nq} volume points cannot resolve a degree {degree} basis (Vq rank deficient)"
        )));
    }
    let face_quadrature = match face_eval {
        FaceEval::Endpoints => volume_rule.clone(),
        FaceEval::Nodes(rule) => rule,
    };

    let basis = LagrangeBasis::new(basis_nodes);
    let vq = to_dmatrix(basis.interpolation_matrix(&volume_rule.nodes), nb);
    let vf = to_dmatrix(basis.interpolation_matrix(&[-1.0, 1.0]), nb);
    let vt = to_dmatrix(basis.interpolation_matrix(&face_quadrature.nodes), nb);
    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(volume_rule.weights.clone()));

    let m = vq.transpose() * &w * &vq;
    let m_inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Construction("singular mass matrix".into()))?;
    let collocated = nq == nb && volume_rule.nodes.as_slice() == basis_nodes;
    let pq = if collocated {
        DMatrix::identity(nb, nb)
    } else {
        &m_inv * vq.transpose() * &w
    };

    // Exact modal differentiation: phi_j' is represented by its nodal values, and an
    // (N+1)-point Gauss rule integrates the degree 2N-1 products exactly.
    let exact = gauss_quadrature(nb)?;
    let vg = to_dmatrix(basis.interpolation_matrix(&exact.nodes), nb);
    let wg = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(exact.weights.clone()));
    let d = to_dmatrix(basis.differentiation_matrix(), nb);
    let qhat = vg.transpose() * wg * &vg * d;

    let q = pq.transpose() * &qhat * &pq;
    let e = &vf * &pq;
    let b = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);

    let mut qh = DMatrix::zeros(nq + 2, nq + 2);
    let skew = &q - q.transpose();
    let etb = e.transpose() * &b;
    let be = &b * &e;
    for i in 0..nq {
        for j in 0..nq {
            qh[(i, j)] = 0.5 * skew[(i, j)];
        }
        for f in 0..2 {
            qh[(i, nq + f)] = 0.5 * etb[(i, f)];
            qh[(nq + f, i)] = -0.5 * be[(f, i)];
        }
    }
    qh[(nq, nq)] = -0.5;
    qh[(nq + 1, nq + 1)] = 0.5;

    let mut vh = DMatrix::zeros(nq + 2, nb);
    vh.view_mut((0, 0), (nq, nb)).copy_from(&vq);
    vh.view_mut((nq, 0), (2, nb)).copy_from(&vf);

    Ok(RefOperators1D {
        degree,
        volume_quadrature: volume_rule.clone(),
        face_quadrature,
        basis_nodes: basis_nodes.to_vec(),
        m,
        qhat,
        q,
        qh,
        vq,
        vf,
        vt,
        pq,
        e,
        b,
        vh,
        m_inv,
    })
}

impl RefOperators1D {
    pub fn n_basis(&self) -> usize {
        self.degree + 1
    }

    pub fn n_volume(&self) -> usize {
        self.volume_quadrature.len()
    }

    /// Solution nodes coincide with the volume quadrature (Vq = Pq = I).
    pub fn is_collocated(&self) -> bool {
        self.n_volume() == self.n_basis()
            && self.volume_quadrature.nodes.as_slice() == self.basis_nodes.as_slice()
    }

    /// Edge traces are taken at the volume nodes themselves.
    pub fn faces_match_volume(&self) -> bool {
        self.face_quadrature.nodes == self.volume_quadrature.nodes
    }
}
