//! Orbit graphs: vertex and edge orbits given by stabilizers, expanded into
//! explicit cells indexed by left cosets.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{CayleyTable, Group};
use crate::error::{Error, Result};
use crate::group::{standard_subgroup, SubgroupHandle, SubgroupName};
use crate::group::{Flavor, GroupTable, Mat2, Sl2};
use crate::linalg::SparseMatrix;

/// The two incidence patterns, by q mod 24.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphFlavor {
    #[serde(rename = "13mod24")]
    Mod13,
    #[serde(rename = "5mod24")]
    Mod5,
}

impl GraphFlavor {
    pub fn for_q(q: u32) -> Result<Self> {
        match q % 24 {
            13 => Ok(GraphFlavor::Mod13),
            5 => Ok(GraphFlavor::Mod5),
            _ => Err(Error::InvalidModulus { q, reason: "q must be 5 or 13 mod 24" }),
        }
    }

    /// Names of the tree edge orbits.
    pub fn tree(&self) -> [&'static str; 3] {
        match self {
            GraphFlavor::Mod13 => ["eta0", "eta1", "eta2"],
            GraphFlavor::Mod5 => ["eta0", "eta2", "eta3"],
        }
    }

    /// The edge orbit outside the tree carrying the twist.
    pub fn non_tree(&self) -> &'static str {
        match self {
            GraphFlavor::Mod13 => "eta3",
            GraphFlavor::Mod5 => "eta1",
        }
    }
}

impl fmt::Display for GraphFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFlavor::Mod13 => "13mod24",
            GraphFlavor::Mod5 => "5mod24",
        })
    }
}

impl FromStr for GraphFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "13mod24" => Ok(GraphFlavor::Mod13),
            "5mod24" => Ok(GraphFlavor::Mod5),
            _ => Err(Error::Parse(format!("unknown flavor {s}"))),
        }
    }
}

/// Left cosets xH of a subgroup, each represented by its least element index.
#[derive(Clone, Debug)]
pub struct Cosets {
    pub reps: Vec<usize>,
    pub of: Vec<u32>,
}

impl Cosets {
    pub fn new(g: &dyn Group, h: &[usize]) -> Self {
        let n = g.order();
        let mut of = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(n / h.len().max(1));
        for x in 0..n {
            if of[x] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &y in h {
                of[g.mul(x, y)] = id;
            }
        }
        Cosets { reps, of }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct VertexOrbit {
    pub name: String,
    pub stabilizer: Vec<usize>,
    pub cosets: Cosets,
}

/// Input description of an edge orbit: x·e runs from x·source to x·twist·target.
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub name: String,
    pub stabilizer: Vec<usize>,
    pub source: usize,
    pub target: usize,
    pub twist: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeOrbit {
    pub name: String,
    pub stabilizer: Vec<usize>,
    pub source: usize,
    pub target: usize,
    pub twist: usize,
    pub cosets: Cosets,
}

/// Central extension Ĝ → G with kernel of order 1 or 2.
#[derive(Clone, Debug)]
pub struct Extension {
    pub group: Arc<dyn Group>,
    pub proj: Vec<usize>,
    pub section: Vec<usize>,
    pub kernel: Vec<usize>,
}

impl Extension {
    /// Ĝ = G with trivial kernel.
    pub fn trivial(g: Arc<dyn Group>) -> Self {
        let n = g.order();
        Extension { kernel: vec![g.identity()], group: g, proj: (0..n).collect(), section: (0..n).collect() }
    }

    /// The generator of the kernel (identity when trivial).
    pub fn z(&self) -> usize {
        *self.kernel.iter().find(|&&k| k != self.group.identity()).unwrap_or(&self.group.identity())
    }

    pub fn preimage(&self, h: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.group.order()).filter(|&x| h.binary_search(&self.proj[x]).is_ok()).collect();
        out.sort_unstable();
        out
    }
}

/// Matrix data retained when the graph comes from SL₂(q).
#[derive(Clone, Debug)]
pub struct MatrixOrigin {
    pub sl: Arc<Sl2>,
    pub psl: Arc<GroupTable>,
    pub flavor: GraphFlavor,
    pub twist_matrix: Mat2,
    pub stabilizer_generators: Vec<(String, Vec<Mat2>)>,
}

#[derive(Clone, Debug)]
pub struct OrbitGraph {
    pub group: Arc<dyn Group>,
    pub k: usize,
    pub vertices: Vec<VertexOrbit>,
    pub edges: Vec<EdgeOrbit>,
    pub vertex_offset: Vec<usize>,
    pub edge_offset: Vec<usize>,
    /// global edge cell → (source cell, target cell)
    pub endpoints: Vec<(usize, usize)>,
    pub origin: Option<MatrixOrigin>,
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl OrbitGraph {
    /// Expands orbit data into cells; checks that every edge stabilizer lies in
    /// its source stabilizer and in the twisted target stabilizer.
    pub fn from_spec(group: Arc<dyn Group>, vertices: Vec<(String, Vec<usize>)>, edges: Vec<EdgeSpec>) -> Result<Self> {
        let g: &dyn Group = group.as_ref();
        let vertices: Vec<VertexOrbit> = vertices
            .into_iter()
            .map(|(name, stab)| {
                let stabilizer = sorted(stab);
                let cosets = Cosets::new(g, &stabilizer);
                VertexOrbit { name, stabilizer, cosets }
            })
            .collect();
        let mut vertex_offset = vec![0];
        for v in &vertices {
            vertex_offset.push(vertex_offset.last().unwrap() + v.cosets.len());
        }
        let mut out_edges = Vec::with_capacity(edges.len());
        let mut edge_offset = vec![0];
        let mut endpoints = Vec::new();
        for e in edges {
            let stabilizer = sorted(e.stabilizer);
            if e.source >= vertices.len() || e.target >= vertices.len() {
                return Err(Error::Precondition(format!("{}: endpoint out of range", e.name)));
            }
            let src = &vertices[e.source];
            let tgt = &vertices[e.target];
            let tinv = g.inv(e.twist);
            for &h in &stabilizer {
                if src.stabilizer.binary_search(&h).is_err() {
                    return Err(Error::Precondition(format!("{} stabilizer not in {}", e.name, src.name)));
                }
                if tgt.stabilizer.binary_search(&g.mul(g.mul(tinv, h), e.twist)).is_err() {
                    return Err(Error::Precondition(format!("{} stabilizer not in twisted {}", e.name, tgt.name)));
                }
            }
            let cosets = Cosets::new(g, &stabilizer);
            for &x in &cosets.reps {
                let s = vertex_offset[e.source] + src.cosets.of[x] as usize;
                let t = vertex_offset[e.target] + tgt.cosets.of[g.mul(x, e.twist)] as usize;
                endpoints.push((s, t));
            }
            edge_offset.push(edge_offset.last().unwrap() + cosets.len());
            out_edges.push(EdgeOrbit { name: e.name, stabilizer, source: e.source, target: e.target, twist: e.twist, cosets });
        }
        Ok(OrbitGraph { group, k: 0, vertices, edges: out_edges, vertex_offset, edge_offset, endpoints, origin: None })
    }

    pub fn num_vertices(&self) -> usize {
        *self.vertex_offset.last().unwrap()
    }

    pub fn num_edges(&self) -> usize {
        *self.edge_offset.last().unwrap()
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.cosets.len()).collect()
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.cosets.len()).collect()
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Global index of the edge cell x·e.
    #[inline]
    pub fn edge_cell(&self, orbit: usize, x: usize) -> usize {
        self.edge_offset[orbit] + self.edges[orbit].cosets.of[x] as usize
    }

    /// Global index of the vertex cell x·v.
    #[inline]
    pub fn vertex_cell(&self, orbit: usize, x: usize) -> usize {
        self.vertex_offset[orbit] + self.vertices[orbit].cosets.of[x] as usize
    }

    /// (orbit, coset representative) of a global edge cell.
    pub fn edge_of_cell(&self, cell: usize) -> (usize, usize) {
        let orbit = self.edge_offset.partition_point(|&o| o <= cell) - 1;
        (orbit, self.edges[orbit].cosets.reps[cell - self.edge_offset[orbit]])
    }

    pub fn vertex_of_cell(&self, cell: usize) -> (usize, usize) {
        let orbit = self.vertex_offset.partition_point(|&o| o <= cell) - 1;
        (orbit, self.vertices[orbit].cosets.reps[cell - self.vertex_offset[orbit]])
    }

    /// Boundary map C₁ → C₀ with rows indexed by edges.
    pub fn boundary(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.num_edges(), self.num_vertices());
        for (e, &(s, t)) in self.endpoints.iter().enumerate() {
            m.add(e, t, 1);
            m.add(e, s, -1);
        }
        m
    }

    /// Rational Betti numbers (b₀, b₁) from the rank of the boundary matrix.
    pub fn homology_ranks(&self) -> (usize, usize) {
        let r = self.boundary().rank_mod_p(crate::linalg::primes_30bit(1, |_| false)[0]);
        (self.num_vertices() - r, self.num_edges() - r)
    }

    /// Number of connected components by union–find, as an independent count.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.num_vertices()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.num_vertices();
        for &(s, t) in &self.endpoints {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// `V orbit_id coset_rep` and `E orbit_id coset_rep src tgt twist` lines.
    pub fn write_dump(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            for &x in &v.cosets.reps {
                writeln!(w, "V {i} {x}")?;
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            for (c, &x) in e.cosets.reps.iter().enumerate() {
                let (s, t) = self.endpoints[self.edge_offset[i] + c];
                writeln!(w, "E {i} {x} {s} {t} {}", e.twist)?;
            }
        }
        Ok(())
    }
}

/// Tables for PSL₂(q) and SL₂(q) together with the projection between them.
#[derive(Clone, Debug)]
pub struct GroupPair {
    pub sl: Arc<Sl2>,
    pub psl: Arc<GroupTable>,
    pub psl_table: Arc<dyn Group>,
    pub sl_elements: Arc<GroupTable>,
}

impl GroupPair {
    pub fn new(psl: Arc<GroupTable>, sl_elements: Arc<GroupTable>) -> Self {
        let sl = psl.sl().clone();
        let psl_table = dense_if_small(psl.clone());
        GroupPair { sl, psl, psl_table, sl_elements }
    }

    pub fn build(q: u32, cache: Option<&std::path::Path>) -> Result<Self> {
        let psl = Arc::new(GroupTable::load_or_build(q, Flavor::Psl, cache)?);
        let sl_elements = Arc::new(GroupTable::load_or_build(q, Flavor::Sl, cache)?);
        Ok(Self::new(psl, sl_elements))
    }

    /// SL₂(q) → PSL₂(q) as a central extension with kernel {1, z}.
    pub fn extension(&self) -> Extension {
        let t = &self.sl_elements;
        let group = dense_if_small(t.clone());
        let proj = (0..t.len()).map(|i| self.psl.index_of(&t.element(i)).expect("projects")).collect();
        let section = (0..self.psl.len()).map(|i| t.index_of(&self.psl.element(i)).expect("lifts")).collect();
        let z = t.index_of(&self.sl.z()).expect("z");
        Extension { kernel: sorted(vec![group.identity(), z]), group, proj, section }
    }
}

/// Groups up to this order get a dense multiplication table.
pub const DENSE_TABLE_LIMIT: usize = 4096;

fn dense_if_small(t: Arc<GroupTable>) -> Arc<dyn Group> {
    if t.len() <= DENSE_TABLE_LIMIT {
        Arc::new(CayleyTable::from_group(t.as_ref()))
    } else {
        t
    }
}

/// Builds the orbit graph for SL₂(q) acting through PSL₂(q), with `k` free
/// loop orbits at v₀.
pub fn build_graph(pair: &GroupPair, flavor: GraphFlavor, k: usize) -> Result<OrbitGraph> {
    let sl = pair.sl.as_ref();
    let q = sl.q();
    if GraphFlavor::for_q(q)? != flavor {
        return Err(Error::Precondition(format!("flavor {flavor} does not match q = {q}")));
    }
    let psl = pair.psl.as_ref();
    let idx = |h: &SubgroupHandle| h.indices(psl);
    let borel = standard_subgroup(SubgroupName::B, sl)?;
    let d_minus = standard_subgroup(SubgroupName::TwoDqMinus1, sl)?;
    let d_plus = standard_subgroup(SubgroupName::TwoDqPlus1, sl)?;
    let sl23 = standard_subgroup(SubgroupName::Sl23, sl)?;
    let c_minus = standard_subgroup(SubgroupName::CqMinus1, sl)?;
    let q8 = standard_subgroup(SubgroupName::Q8, sl)?;
    let c6_gen = *sl23
        .elements()
        .iter()
        .find(|m| sl.element_order(m) == 6)
        .ok_or_else(|| Error::SearchFailed("order-6 element of SL_2(3)".into()))?;
    let c6 = SubgroupHandle::generated(sl, SubgroupName::C6, vec![c6_gen]);

    let (v2, c4, eta_twisted, twist) = match flavor {
        GraphFlavor::Mod13 => {
            let c4 = standard_subgroup(SubgroupName::C4, sl)?;
            let v2 = conjugate_containing(sl, &d_plus, &c4)?;
            let g = twist_into(sl, &c6, &borel)?;
            (v2, c4, "eta3", g)
        }
        GraphFlavor::Mod5 => {
            let v2 = conjugate_containing(sl, &d_plus, &c6)?;
            let gen = *v2
                .elements()
                .iter()
                .find(|m| sl.element_order(m) == 4)
                .ok_or_else(|| Error::SearchFailed("order-4 element of the v2 stabilizer".into()))?;
            let c4 = SubgroupHandle::generated(sl, SubgroupName::C4, vec![gen]);
            let g = twist_into(sl, &c4, &borel)?;
            (v2, c4, "eta1", g)
        }
    };
    let twist = psl.index_of(&twist).expect("twist in PSL");
    let id = psl.index_of(&sl.identity()).expect("identity");

    let vertices = vec![
        ("v0".to_string(), idx(&borel)),
        ("v1".to_string(), idx(&d_minus)),
        ("v2".to_string(), idx(&v2)),
        ("v3".to_string(), idx(&sl23)),
    ];
    let spec = |name: &str, h: &SubgroupHandle, s: usize, t: usize| EdgeSpec {
        name: name.into(),
        stabilizer: idx(h),
        source: s,
        target: t,
        twist: if name == eta_twisted { twist } else { id },
    };
    let mut edges = vec![spec("eta0", &c_minus, 0, 1)];
    match flavor {
        GraphFlavor::Mod13 => {
            edges.push(spec("eta1", &c4, 1, 2));
            edges.push(spec("eta2", &q8, 1, 3));
            edges.push(spec("eta3", &c6, 3, 0));
        }
        GraphFlavor::Mod5 => {
            edges.push(spec("eta1", &c4, 2, 0));
            edges.push(spec("eta2", &q8, 1, 3));
            edges.push(spec("eta3", &c6, 3, 2));
        }
    }
    for i in 1..=k {
        edges.push(EdgeSpec { name: format!("eta'{i}"), stabilizer: vec![id], source: 0, target: 0, twist: id });
    }
    let mut graph = OrbitGraph::from_spec(pair.psl_table.clone(), vertices, edges)?;
    graph.k = k;
    let gens = |name: &str, h: &SubgroupHandle| (name.to_string(), h.generators().to_vec());
    graph.origin = Some(MatrixOrigin {
        sl: pair.sl.clone(),
        psl: pair.psl.clone(),
        flavor,
        twist_matrix: psl.element(twist),
        stabilizer_generators: vec![
            gens("v0", &borel),
            gens("v1", &d_minus),
            gens("v2", &v2),
            gens("v3", &sl23),
            gens("eta0", &c_minus),
            gens("eta1", &c4),
            gens("eta2", &q8),
            gens("eta3", &c6),
        ],
    });
    Ok(graph)
}

/// First c in encoding order with c⁻¹ h c ∈ H for every generator h of `inner`;
/// returns cHc⁻¹.
fn conjugate_containing(sl: &Sl2, h: &SubgroupHandle, inner: &SubgroupHandle) -> Result<SubgroupHandle> {
    let c = sl
        .elements_in_order()
        .find(|c| {
            let ci = sl.inv(c);
            inner.generators().iter().all(|g| h.contains(sl, &sl.conj(&ci, g)))
        })
        .ok_or_else(|| Error::SearchFailed(format!("conjugate of {} containing {}", h.name, inner.name)))?;
    Ok(h.conjugate(sl, &c))
}

/// First g in encoding order with g⁻¹ h g ∈ `target` for every generator h of `inner`.
fn twist_into(sl: &Sl2, inner: &SubgroupHandle, target: &SubgroupHandle) -> Result<Mat2> {
    sl.elements_in_order()
        .find(|g| {
            let gi = sl.inv(g);
            inner.generators().iter().all(|h| target.contains(sl, &sl.conj(&gi, h)))
        })
        .ok_or_else(|| Error::SearchFailed(format!("twist element for {}", inner.name)))
}
