use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strong product of the viewpoint cycle `C_{n_xy}` and the complete zoom
/// graph `K_{n_z}`. Node `z * n_xy + xy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionMatrix {
    pub n_xy: usize,
    pub n_z: usize,
    adjacency: Vec<bool>,
    pub node_values: Vec<f64>,
}

fn cycle_adjacent(a: usize, b: usize, n: usize) -> bool {
    a != b && ((a + 1) % n == b || (b + 1) % n == a)
}

pub fn build_interaction_matrix(n_xy: usize, n_z: usize) -> Result<InteractionMatrix> {
    if n_xy < 3 {
        return Err(Error::InvalidArgument(format!("a cycle needs at least 3 nodes, got {n_xy}")));
    }
    if n_z < 1 {
        return Err(Error::InvalidArgument("at least one zoom level is required".into()));
    }
    let n = n_xy * n_z;
    let mut adjacency = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let (xi, zi) = (i % n_xy, i / n_xy);
            let (xj, zj) = (j % n_xy, j / n_xy);
            let xy_adj = cycle_adjacent(xi, xj, n_xy);
            adjacency[i * n + j] = (xi == xj && zi != zj) || (xy_adj && zi == zj) || (xy_adj && zi != zj);
        }
    }
    Ok(InteractionMatrix { n_xy, n_z, adjacency, node_values: vec![0.0; n] })
}

impl InteractionMatrix {
    pub fn len(&self) -> usize {
        self.n_xy * self.n_z
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.len() + j]
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.adjacent(i, j))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() / 2
    }
}
