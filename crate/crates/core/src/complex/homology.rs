//! Integral homology of the graph with one free orbit of 2-cells attached.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::graph::OrbitGraph;
use super::path::EdgePath;
use crate::linalg::{smith_invariants, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralHomology {
    pub h0_rank: usize,
    pub h0_torsion: Vec<String>,
    pub h1_rank: usize,
    pub h1_torsion: Vec<String>,
    pub h2_rank: usize,
}

impl IntegralHomology {
    /// H₀ = ℤ and H₁ = H₂ = 0.
    pub fn is_acyclic(&self) -> bool {
        self.h0_rank == 1 && self.h0_torsion.is_empty() && self.h1_rank == 0 && self.h1_torsion.is_empty() && self.h2_rank == 0
    }
}

fn torsion(inv: &[BigInt]) -> Vec<String> {
    inv.iter().filter(|d| !d.is_one()).map(|d| d.to_string()).collect()
}

/// ∂₂ with one row per 2-cell g·D, ∂(g·D) = g·ξ.
pub fn attaching_boundary(graph: &OrbitGraph, path: &EdgePath) -> SparseMatrix {
    let g = graph.group.as_ref();
    let mut m = SparseMatrix::new(g.order(), graph.num_edges());
    for x in 0..g.order() {
        for s in &path.steps {
            m.add(x, graph.edge_cell(s.orbit, g.mul(x, s.element)), s.sign as i64);
        }
    }
    m
}

/// Smith forms of ∂₁ and ∂₂.
pub fn attached_complex_homology(graph: &OrbitGraph, path: &EdgePath) -> IntegralHomology {
    let d1 = smith_invariants(&graph.boundary());
    let d2 = smith_invariants(&attaching_boundary(graph, path));
    let (v, e, f) = (graph.num_vertices(), graph.num_edges(), graph.group.order());
    IntegralHomology {
        h0_rank: v - d1.len(),
        h0_torsion: torsion(&d1),
        h1_rank: e - d1.len() - d2.len(),
        h1_torsion: torsion(&d2),
        h2_rank: f - d2.len(),
    }
}
