//! One-dimensional quadrature rules, Lagrange bases and the reference-element
//! operator set from which every scheme variant is assembled by tensor product.

mod lagrange;
mod operators;
mod quadrature;

pub use lagrange::LagrangeBasis;
pub use operators::{build_ref_operators, build_ref_operators_with_basis, FaceEval, RefOperators1D};
pub use quadrature::{
    clenshaw_curtis_quadrature, equispaced_interior_nodes, gauss_quadrature, legendre,
    lgl_quadrature, Quadrature1D,
};
