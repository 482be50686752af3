/// Lagrange polynomial basis on a set of distinct nodes, evaluated with the
/// barycentric formula.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(nodes: &[f64]) -> Self {
        let bary = (0..nodes.len())
            .map(|j| {
                let prod: f64 = (0..nodes.len())
                    .filter(|&k| k != j)
                    .map(|k| nodes[j] - nodes[k])
                    .product();
                1.0 / prod
            })
            .collect();
        Self {
            nodes: nodes.to_vec(),
            bary,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values of every basis function at `x`. Exactly a unit vector when `x` is a node.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        if let Some(j) = self.nodes.iter().position(|&xj| xj == x) {
            let mut out = vec![0.0; self.len()];
            out[j] = 1.0;
            return out;
        }
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.bary)
            .map(|(&xj, &lj)| lj / (x - xj))
            .collect();
        let denom: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / denom).collect()
    }

    /// Row-per-point interpolation matrix (points x basis functions), row major.
    pub fn interpolation_matrix(&self, points: &[f64]) -> Vec<Vec<f64>> {
        points.iter().map(|&x| self.eval(x)).collect()
    }

    /// Nodal differentiation matrix: `D[i][j] = l_j'(x_i)`.
    pub fn differentiation_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    let v = (self.bary[j] / self.bary[i]) / (self.nodes[i] - self.nodes[j]);
                    d[i][j] = v;
                    diag -= v;
                }
            }
            d[i][i] = diag;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reproduces_polynomials() {
        let basis = LagrangeBasis::new(&[-1.0, -0.3, 0.4, 1.0]);
        let f = |x: f64| 2.0 * x * x * x - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let vals: Vec<f64> = basis.nodes().iter().map(|&x| f(x)).collect();
        for x in [-0.9, 0.0, 0.77] {
            let phi = basis.eval(x);
            let y: f64 = phi.iter().zip(&vals).map(|(a, b)| a * b).sum();
            assert_abs_diff_eq!(y, f(x), epsilon = 1e-13);
        }
        let d = basis.differentiation_matrix();
        for (i, &x) in basis.nodes().iter().enumerate() {
            let y: f64 = d[i].iter().zip(&vals).map(|(a, b)| a * b).sum();
            assert_abs_diff_eq!(y, df(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_unit_vectors_at_nodes() {
        let basis = LagrangeBasis::new(&[-1.0, 0.0, 1.0]);
        assert_eq!(basis.eval(0.0), vec![0.0, 1.0, 0.0]);
    }
}
