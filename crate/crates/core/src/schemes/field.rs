use crate::euler::ConsState;

/// Per-element, per-node conserved-variable storage for a whole mesh.
///
/// Layout: element-major, then node index with x fastest, then the four
/// conserved variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    n_elements: usize,
    nodes_per_element: usize,
    data: Vec<f64>,
}

impl SolutionField {
    pub fn zeros(n_elements: usize, nodes_per_element: usize) -> Self {
        Self {
            n_elements,
            nodes_per_element,
            data: vec![0.0; n_elements * nodes_per_element * 4],
        }
    }

    pub fn from_vec(n_elements: usize, nodes_per_element: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n_elements * nodes_per_element * 4);
        Self {
            n_elements,
            nodes_per_element,
            data,
        }
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn nodes_per_element(&self) -> usize {
        self.nodes_per_element
    }

    #[inline]
    pub fn node(&self, element: usize, node: usize) -> ConsState {
        let o = (element * self.nodes_per_element + node) * 4;
        ConsState([self.data[o], self.data[o + 1], self.data[o + 2], self.data[o + 3]])
    }

    #[inline]
    pub fn set_node(&mut self, element: usize, node: usize, u: ConsState) {
        let o = (element * self.nodes_per_element + node) * 4;
        self.data[o..o + 4].copy_from_slice(&u.0);
    }

    pub fn element_block(&self, element: usize) -> &[f64] {
        let len = self.nodes_per_element * 4;
        &self.data[element * len..(element + 1) * len]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}
