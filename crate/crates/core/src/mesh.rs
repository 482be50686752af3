//! Uniform Cartesian quadrilateral meshes with face connectivity and boundary tags.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    ReflectiveWall,
}

/// Local face numbering: 0 = left (-x), 1 = right (+x), 2 = bottom (-y), 3 = top (+y).
pub const FACE_LEFT: usize = 0;
pub const FACE_RIGHT: usize = 1;
pub const FACE_BOTTOM: usize = 2;
pub const FACE_TOP: usize = 3;

/// Outward unit normal of each local face.
pub const FACE_NORMALS: [[f64; 2]; 4] = [[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]];

/// The face across from `face` on a neighbouring element.
pub fn opposite_face(face: usize) -> usize {
    face ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceNeighbor {
    Element { element: usize, face: usize },
    Boundary(BoundaryCondition),
}

/// Boundary tags per domain side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainBoundaries {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl DomainBoundaries {
    pub const fn periodic() -> Self {
        Self::uniform(BoundaryCondition::Periodic)
    }

    pub const fn walls() -> Self {
        Self::uniform(BoundaryCondition::ReflectiveWall)
    }

    pub const fn uniform(bc: BoundaryCondition) -> Self {
        Self {
            left: bc,
            right: bc,
            bottom: bc,
            top: bc,
        }
    }

    pub fn is_fully_periodic(&self) -> bool {
        [self.left, self.right, self.bottom, self.top]
            .iter()
            .all(|&b| b == BoundaryCondition::Periodic)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformQuadMesh {
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub bc: DomainBoundaries,
    pub hx: f64,
    pub hy: f64,
    neighbors: Vec<[FaceNeighbor; 4]>,
}

impl UniformQuadMesh {
    /// Elements are numbered row-major: `e = ix + nx * iy`.
    pub fn new(
        nx: usize,
        ny: usize,
        (xmin, xmax): (f64, f64),
        (ymin, ymax): (f64, f64),
        bc: DomainBoundaries,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument(format!(
                "element counts must be positive, got {nx}x{ny}"
            )));
        }
        if !(xmax > xmin) || !(ymax > ymin) || !(xmax - xmin).is_finite() || !(ymax - ymin).is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid bounds [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        let periodic = BoundaryCondition::Periodic;
        if (bc.left == periodic) != (bc.right == periodic)
            || (bc.bottom == periodic) != (bc.top == periodic)
        {
            return Err(Error::InvalidArgument(
                "periodic boundaries must come in opposite pairs".into(),
            ));
        }

        let mut neighbors = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let elem = |ix: usize, iy: usize, face: usize| FaceNeighbor::Element {
                    element: ix + nx * iy,
                    face,
                };
                let left = if ix > 0 {
                    elem(ix - 1, iy, FACE_RIGHT)
                } else if bc.left == periodic {
                    elem(nx - 1, iy, FACE_RIGHT)
                } else {
                    FaceNeighbor::Boundary(bc.left)
                };
                let right = if ix + 1 < nx {
                    elem(ix + 1, iy, FACE_LEFT)
                } else if bc.right == periodic {
                    elem(0, iy, FACE_LEFT)
                } else {
                    FaceNeighbor::Boundary(bc.right)
                };
                let bottom = if iy > 0 {
                    elem(ix, iy - 1, FACE_TOP)
                } else if bc.bottom == periodic {
                    elem(ix, ny - 1, FACE_TOP)
                } else {
                    FaceNeighbor::Boundary(bc.bottom)
                };
                let top = if iy + 1 < ny {
                    elem(ix, iy + 1, FACE_BOTTOM)
                } else if bc.top == periodic {
                    elem(ix, 0, FACE_BOTTOM)
                } else {
                    FaceNeighbor::Boundary(bc.top)
                };
                neighbors.push([left, right, bottom, top]);
            }
        }

        Ok(Self {
            nx,
            ny,
            xmin,
            xmax,
            ymin,
            ymax,
            bc,
            hx: (xmax - xmin) / nx as f64,
            hy: (ymax - ymin) / ny as f64,
            neighbors,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn neighbor(&self, element: usize, face: usize) -> FaceNeighbor {
        self.neighbors[element][face]
    }

    /// Lower-left corner of an element.
    pub fn element_origin(&self, element: usize) -> (f64, f64) {
        let ix = element % self.nx;
        let iy = element / self.nx;
        (
            self.xmin + ix as f64 * self.hx,
            self.ymin + iy as f64 * self.hy,
        )
    }

    /// Affine image of a reference point in [-1, 1]^2.
    pub fn map_point(&self, element: usize, xi: f64, eta: f64) -> (f64, f64) {
        let (x0, y0) = self.element_origin(element);
        (
            x0 + 0.5 * (xi + 1.0) * self.hx,
            y0 + 0.5 * (eta + 1.0) * self.hy,
        )
    }

    /// Physical coordinates of the tensor-product nodes, x index fastest.
    pub fn element_nodes(&self, element: usize, ref_x: &[f64], ref_y: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(ref_x.len() * ref_y.len());
        for &eta in ref_y {
            for &xi in ref_x {
                out.push(self.map_point(element, xi, eta));
            }
        }
        out
    }

    /// Jacobian determinant of the reference-to-physical map.
    pub fn jacobian(&self) -> f64 {
        0.25 * self.hx * self.hy
    }

    pub fn area(&self) -> f64 {
        (self.xmax - self.xmin) * (self.ymax - self.ymin)
    }
}
