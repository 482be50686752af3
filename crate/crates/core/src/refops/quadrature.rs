use crate::error::{Error, Result};

/// A quadrature rule on the reference interval [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Legendre polynomial P_n(x) and its derivative, by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    // P_n' from the standard identity; the endpoint limit is n(n+1)/2 * (+-1)^(n+1).
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * x.powi(n as i32 + 1)
    } else {
        nf * (p_prev - x * p) / (1.0 - x * x)
    };
    (p, dp)
}

/// Mirror the computed nodes so the rule is exactly symmetric about 0.
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Legendre-Gauss rule with `n_points` nodes (exact to degree 2 n_points - 1).
pub fn gauss_quadrature(n_points: usize) -> Result<Quadrature1D> {
    if n_points < 1 {
        return Err(Error::InvalidArgument(format!(
            "Gauss quadrature needs at least 1 point, got {n_points}"
        )));
    }
    let n = n_points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // roots in increasing order; classical asymptotic initial guess
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    symmetrize(&mut nodes, &mut weights);
    Ok(Quadrature1D { nodes, weights })
}

/// Legendre-Gauss-Lobatto rule with `n_points` nodes including both endpoints
/// (exact to degree 2 n_points - 3).
pub fn lgl_quadrature(n_points: usize) -> Result<Quadrature1D> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "LGL quadrature needs at least 2 points, got {n_points}"
        )));
    }
    let n = n_points - 1;
    let nf = n as f64;
    let mut nodes = vec![0.0; n + 1];
    let mut weights = vec![0.0; n + 1];
    for i in 0..=n {
        let mut x = -(std::f64::consts::PI * i as f64 / nf).cos();
        if i > 0 && i < n {
            // interior nodes are the roots of P_n'; Newton on (1-x^2) P_n'
            for _ in 0..NEWTON_MAX_ITER {
                let (p, _) = legendre(n, x);
                let (p_prev, _) = legendre(n - 1, x);
                let dx = (x * p - p_prev) / ((nf + 1.0) * p);
                x -= dx;
                if dx.abs() < NEWTON_TOL {
                    break;
                }
            }
        }
        let (p, _) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / (nf * (nf + 1.0) * p * p);
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    symmetrize(&mut nodes, &mut weights);
    Ok(Quadrature1D { nodes, weights })
}

/// Clenshaw-Curtis rule on the Chebyshev extreme points, ordered increasingly.
pub fn clenshaw_curtis_quadrature(n_points: usize) -> Result<Quadrature1D> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "Clenshaw-Curtis quadrature needs at least 2 points, got {n_points}"
        )));
    }
    let n = n_points - 1;
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for j in 0..=n {
        nodes.push(-(pi * j as f64 / nf).cos());
        let c = if j == 0 || j == n { 1.0 } else { 2.0 };
        let mut s = 0.0;
        for k in 1..=n / 2 {
            let b = if 2 * k == n { 1.0 } else { 2.0 };
            let kf = k as f64;
            s += b / (4.0 * kf * kf - 1.0) * (2.0 * kf * j as f64 * pi / nf).cos();
        }
        weights.push(c / nf * (1.0 - s));
    }
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    symmetrize(&mut nodes, &mut weights);
    Ok(Quadrature1D { nodes, weights })
}

/// `n` equally spaced cell-centred points in (-1, 1); none sits on an endpoint.
pub fn equispaced_interior_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| -1.0 + (2.0 * m as f64 + 1.0) / n as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Exact integral of x^k over [-1, 1].
    fn monomial_integral(k: usize) -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            2.0 / (k as f64 + 1.0)
        }
    }

    fn exact_to(rule: &Quadrature1D, degree: usize) {
        for k in 0..=degree {
            let q = rule.integrate(|x| x.powi(k as i32));
            assert_abs_diff_eq!(q, monomial_integral(k), epsilon = 1e-12);
        }
    }

    fn well_formed(rule: &Quadrature1D) {
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
        assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn lgl_small_rules() {
        let q = lgl_quadrature(2).unwrap();
        assert_eq!(q.nodes, vec![-1.0, 1.0]);
        assert_abs_diff_eq!(q.weights[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[1], 1.0, epsilon = 1e-15);

        let q = lgl_quadrature(3).unwrap();
        for (a, b) in q.nodes.iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        for (a, b) in q.weights.iter().zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }

        let q = lgl_quadrature(4).unwrap();
        let r = 1.0 / 5f64.sqrt();
        for (a, b) in q.nodes.iter().zip([-1.0, -r, r, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        for (a, b) in q.weights.iter().zip([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn gauss_small_rules() {
        let q = gauss_quadrature(1).unwrap();
        assert_eq!(q.nodes, vec![0.0]);
        assert_abs_diff_eq!(q.weights[0], 2.0, epsilon = 1e-15);

        let q = gauss_quadrature(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(q.nodes[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.nodes[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(q.weights[0], 1.0, epsilon = 1e-15);

        let q = gauss_quadrature(3).unwrap();
        let r = (3.0f64 / 5.0).sqrt();
        for (a, b) in q.nodes.iter().zip([-r, 0.0, r]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        for (a, b) in q.weights.iter().zip([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn clenshaw_curtis_small_rules() {
        let q = clenshaw_curtis_quadrature(2).unwrap();
        assert_eq!(q.nodes, vec![-1.0, 1.0]);
        assert_abs_diff_eq!(q.weights[0], 1.0, epsilon = 1e-15);
        let q = clenshaw_curtis_quadrature(3).unwrap();
        for (a, b) in q.weights.iter().zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(q.nodes[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exactness_across_sizes() {
        for n in 2..=12 {
            let q = lgl_quadrature(n).unwrap();
            well_formed(&q);
            exact_to(&q, 2 * n - 3);
            let q = gauss_quadrature(n).unwrap();
            well_formed(&q);
            exact_to(&q, 2 * n - 1);
            let q = clenshaw_curtis_quadrature(n).unwrap();
            well_formed(&q);
            exact_to(&q, n - 1);
        }
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(matches!(lgl_quadrature(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(gauss_quadrature(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            clenshaw_curtis_quadrature(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn interior_equispaced_nodes_avoid_endpoints() {
        let x = equispaced_interior_nodes(4);
        assert_eq!(x, vec![-0.75, -0.25, 0.25, 0.75]);
    }
}
