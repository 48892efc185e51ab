//! Closed edge paths ξ = (a₁e₁^{ε₁}, …, aₙeₙ^{εₙ}) and random walks producing them.

use std::collections::VecDeque;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::OrbitGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub orbit: usize,
    pub element: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePath {
    /// global index of the base vertex cell
    pub base: usize,
    pub steps: Vec<Step>,
}

impl EdgePath {
    /// The empty path at the base vertex v₀.
    pub fn null(graph: &OrbitGraph) -> Self {
        EdgePath { base: base_vertex(graph), steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Follows the path from the base; errors unless consecutive endpoints match
    /// and the path returns to the base.
    pub fn check_closed(&self, graph: &OrbitGraph) -> Result<()> {
        let mut at = self.base;
        for (i, s) in self.steps.iter().enumerate() {
            if s.orbit >= graph.edges.len() || s.element >= graph.group.order() || s.sign.abs() != 1 {
                return Err(Error::Precondition(format!("step {i} out of range")));
            }
            let (src, tgt) = graph.endpoints[graph.edge_cell(s.orbit, s.element)];
            let (from, to) = if s.sign > 0 { (src, tgt) } else { (tgt, src) };
            if from != at {
                return Err(Error::Precondition(format!("step {i} does not start where step {} ended", i.max(1) - 1)));
            }
            at = to;
        }
        if at != self.base {
            return Err(Error::Precondition("path is not closed".into()));
        }
        Ok(())
    }

    /// Which edge orbits the path traverses.
    pub fn orbits_used(&self, graph: &OrbitGraph) -> Vec<bool> {
        let mut used = vec![false; graph.edges.len()];
        for s in &self.steps {
            used[s.orbit] = true;
        }
        used
    }

    /// ξ followed by ξ again.
    pub fn doubled(&self) -> Self {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&self.steps);
        EdgePath { base: self.base, steps }
    }

    /// One `orbit element sign` line per step.
    pub fn write(&self, w: &mut impl Write) -> std::io::Result<()> {
        for s in &self.steps {
            writeln!(w, "{} {} {}", s.orbit, s.element, s.sign)?;
        }
        Ok(())
    }

    pub fn parse(graph: &OrbitGraph, text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("path line {}: {line}", ln + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let orbit = f[0].parse().map_err(|_| bad())?;
            let element = f[1].parse().map_err(|_| bad())?;
            let sign: i8 = f[2].parse().map_err(|_| bad())?;
            steps.push(Step { orbit, element, sign });
        }
        let p = EdgePath { base: base_vertex(graph), steps };
        p.check_closed(graph)?;
        Ok(p)
    }
}

pub fn base_vertex(graph: &OrbitGraph) -> usize {
    graph.vertex_cell(0, graph.group.identity())
}

/// Incidences of the expanded graph, restricted to a set of edge orbits, with
/// a BFS tree rooted at the base vertex.
#[derive(Clone, Debug)]
pub struct Walker {
    /// per vertex cell: (edge cell, sign leaving this vertex, other end)
    adj: Vec<Vec<(usize, i8, usize)>>,
    /// per vertex cell: (edge cell, sign from parent) toward the root
    parent: Vec<Option<(usize, i8, usize)>>,
    base: usize,
}

impl Walker {
    pub fn new(graph: &OrbitGraph, allowed: &[bool]) -> Self {
        let nv = graph.num_vertices();
        let mut adj = vec![Vec::new(); nv];
        for (e, &(s, t)) in graph.endpoints.iter().enumerate() {
            let (orbit, _) = graph.edge_of_cell(e);
            if !allowed[orbit] {
                continue;
            }
            adj[s].push((e, 1, t));
            adj[t].push((e, -1, s));
        }
        let base = base_vertex(graph);
        let mut parent = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &(e, sign, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, sign, v));
                    queue.push_back(w);
                }
            }
        }
        Walker { adj, parent, base }
    }

    /// Edge cells of the BFS spanning tree.
    pub fn tree_edges(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.parent.iter().flatten().map(|p| p.0).collect();
        t.sort_unstable();
        t
    }

    pub fn is_spanning(&self) -> bool {
        self.parent.iter().enumerate().all(|(v, p)| v == self.base || p.is_some())
    }

    /// `len` random steps without immediate backtracking, closed along the tree
    /// and freely reduced. Returns global (edge cell, sign) pairs.
    pub fn closed_walk(&self, len: usize, rng: &mut impl Rng) -> Vec<(usize, i8)> {
        let mut walk: Vec<(usize, i8)> = Vec::with_capacity(len * 2);
        let mut at = self.base;
        let mut last: Option<usize> = None;
        for _ in 0..len {
            let opts = &self.adj[at];
            if opts.is_empty() {
                break;
            }
            let choices: Vec<&(usize, i8, usize)> = opts.iter().filter(|o| Some(o.0) != last || opts.len() == 1).collect();
            let &(e, sign, w) = choices[rng.random_range(0..choices.len())];
            walk.push((e, sign));
            last = Some(e);
            at = w;
        }
        while let Some((e, sign, p)) = self.parent[at] {
            walk.push((e, -sign));
            at = p;
        }
        reduce(walk)
    }
}

/// Cancels adjacent e·e⁻¹ pairs.
fn reduce(walk: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::with_capacity(walk.len());
    for s in walk {
        match out.last() {
            Some(&(e, sg)) if e == s.0 && sg == -s.1 => {
                out.pop();
            }
            _ => out.push(s),
        }
    }
    out
}

/// Converts global (edge cell, sign) steps into a path in orbit notation.
pub fn path_from_cells(graph: &OrbitGraph, cells: &[(usize, i8)]) -> EdgePath {
    let steps = cells
        .iter()
        .map(|&(c, sign)| {
            let (orbit, element) = graph.edge_of_cell(c);
            Step { orbit, element, sign }
        })
        .collect();
    EdgePath { base: base_vertex(graph), steps }
}
