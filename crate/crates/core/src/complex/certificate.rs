//! The pairing matrix of an attaching path against a cycle basis of H₁, its
//! exact determinant, and the randomized search for unimodular paths.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::graph::OrbitGraph;
use super::path::{path_from_cells, EdgePath, Walker};
use crate::error::{Error, Result};
use crate::linalg::{det_exact, det_mod_p, primes_30bit, rank_gf2, rank_small_prime, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// det = ±1
    AcyclicOverZ,
    /// det ≠ 0, ±1: acyclic over ℚ, finite H₁
    AcyclicOverQ,
    /// det = 0
    NotAcyclic,
}

/// A spanning tree of the expanded graph and the column index of every non-tree edge.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub tree: Vec<usize>,
    /// edge cell → column, usize::MAX on tree edges
    pub column: Vec<usize>,
    pub rank: usize,
}

impl CycleBasis {
    pub fn new(graph: &OrbitGraph) -> Result<Self> {
        let walker = Walker::new(graph, &vec![true; graph.edges.len()]);
        if !walker.is_spanning() {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        let tree = walker.tree_edges();
        let mut column = vec![usize::MAX; graph.num_edges()];
        let mut next = 0;
        for (e, c) in column.iter_mut().enumerate() {
            if tree.binary_search(&e).is_err() {
                *c = next;
                next += 1;
            }
        }
        Ok(CycleBasis { tree, column, rank: next })
    }
}

/// M[g][f] = coefficient of the non-tree edge f in g·ξ: the matrix of
/// ℤ[G] → H₁(X), 1 ↦ [ξ], in the fundamental-cycle basis.
pub fn pairing_matrix(graph: &OrbitGraph, basis: &CycleBasis, path: &EdgePath) -> IntMatrix {
    let g = graph.group.as_ref();
    let n = g.order();
    let mut m = IntMatrix::zeros(n, basis.rank);
    for x in 0..n {
        for s in &path.steps {
            let cell = graph.edge_cell(s.orbit, g.mul(x, s.element));
            let col = basis.column[cell];
            if col != usize::MAX {
                m.add(x, col, s.sign as i64);
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct AcyclicityCertificate {
    pub path: EdgePath,
    pub betti: (usize, usize),
    pub matrix: IntMatrix,
    pub determinant: BigInt,
    pub primes: Vec<u64>,
    pub hadamard_log2: f64,
    pub verdict: Verdict,
}

impl AcyclicityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "determinant": self.determinant.to_string(),
            "primes": self.primes,
            "hadamard_log2": (self.hadamard_log2 * 1000.0).round() / 1000.0,
            "verdict": self.verdict,
            "path_length": self.path.len(),
            "betti": [self.betti.0, self.betti.1],
        })
    }
}

/// Exact determinant of the pairing matrix and the resulting verdict.
pub fn certify_acyclicity(graph: &OrbitGraph, path: &EdgePath) -> Result<AcyclicityCertificate> {
    path.check_closed(graph)?;
    let betti = graph.homology_ranks();
    if betti.0 != 1 || betti.1 != graph.group.order() {
        return Err(Error::Precondition(format!("need b0 = 1 and b1 = |G|, got {betti:?}")));
    }
    let basis = CycleBasis::new(graph)?;
    let matrix = pairing_matrix(graph, &basis, path);
    let d = det_exact(&matrix);
    let verdict = if d.det.is_zero() {
        Verdict::NotAcyclic
    } else if d.det.abs().is_one() {
        Verdict::AcyclicOverZ
    } else {
        Verdict::AcyclicOverQ
    };
    Ok(AcyclicityCertificate { path: path.clone(), betti, matrix, determinant: d.det, primes: d.primes, hadamard_log2: d.hadamard_log2, verdict })
}

pub const PREFILTER_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Per-candidate outcome of the prefilter: how many leading small primes keep
/// full rank, and the determinant modulo one 30-bit prime.
#[derive(Clone, Debug)]
struct Screen {
    small_passed: usize,
    large_residue: Option<u64>,
}

fn screen(m: &IntMatrix, large: u64) -> Screen {
    let n = m.rows;
    let mut small_passed = 0;
    let ranks: [&dyn Fn(&IntMatrix) -> usize; 4] =
        [&rank_gf2, &rank_small_prime::<3>, &rank_small_prime::<5>, &rank_small_prime::<7>];
    for r in ranks {
        if r(m) != n {
            break;
        }
        small_passed += 1;
    }
    let large_residue = (small_passed == ranks.len()).then(|| det_mod_p(m, large));
    Screen { small_passed, large_residue }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchDiagnostics {
    pub budget: usize,
    pub candidates: usize,
    pub missing_orbit: usize,
    /// candidates whose pairing matrix has full rank modulo each prefilter prime in turn
    pub full_rank_mod: Vec<(u64, usize)>,
    /// candidates with nonzero determinant modulo the 30-bit check prime
    pub nonsingular: usize,
    pub best_length: Option<usize>,
    pub best_small_primes: usize,
    #[serde(skip)]
    pub best: Option<EdgePath>,
    /// first candidate whose determinant is certainly nonzero
    #[serde(skip)]
    pub first_nonsingular: Option<EdgePath>,
}

impl fmt::Display for SearchDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} of {} candidates screened ({} missed an edge orbit); full rank mod", self.candidates, self.budget, self.missing_orbit)?;
        for (p, c) in &self.full_rank_mod {
            write!(f, " {p}:{c}")?;
        }
        write!(f, "; nonsingular {}; best candidate passes {} small primes", self.nonsingular, self.best_small_primes)
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    pub budget: usize,
    pub min_len: usize,
    pub max_len: usize,
}

impl SearchConfig {
    pub fn new(seed: u64, budget: usize) -> Self {
        SearchConfig { seed, budget, min_len: 4, max_len: 24 }
    }
}

/// Randomized closed walks through every edge orbit, screened mod 2, 3, 5, 7
/// and one 30-bit prime before the exact determinant.
pub fn search_attaching_path(graph: &OrbitGraph, cfg: &SearchConfig) -> Result<AcyclicityCertificate> {
    let basis = CycleBasis::new(graph)?;
    if basis.rank != graph.group.order() {
        return Err(Error::Precondition(format!("b1 = {} differs from |G| = {}", basis.rank, graph.group.order())));
    }
    let walker = Walker::new(graph, &vec![true; graph.edges.len()]);
    let large = primes_30bit(1, |_| false)[0];
    let mut diag = SearchDiagnostics {
        budget: cfg.budget,
        full_rank_mod: PREFILTER_PRIMES.iter().map(|&p| (p, 0)).collect(),
        ..Default::default()
    };
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut next = 0;
    while next < cfg.budget {
        let ids: Vec<usize> = (next..(next + batch).min(cfg.budget)).collect();
        next += ids.len();
        let results: Vec<(EdgePath, Option<Screen>)> = ids
            .par_iter()
            .map(|&i| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i as u64);
                let len = rng.random_range(cfg.min_len..=cfg.max_len);
                let path = path_from_cells(graph, &walker.closed_walk(len, &mut rng));
                if path.orbits_used(graph).iter().any(|u| !u) {
                    return (path, None);
                }
                let m = pairing_matrix(graph, &basis, &path);
                let s = screen(&m, large);
                (path, Some(s))
            })
            .collect();
        for (path, s) in results {
            diag.candidates += 1;
            let Some(s) = s else {
                diag.missing_orbit += 1;
                continue;
            };
            for entry in diag.full_rank_mod.iter_mut().take(s.small_passed) {
                entry.1 += 1;
            }
            let better = s.small_passed > diag.best_small_primes
                || (s.small_passed == diag.best_small_primes && diag.best_length.is_none_or(|l| path.len() < l));
            if better {
                diag.best_small_primes = s.small_passed;
                diag.best_length = Some(path.len());
                diag.best = Some(path.clone());
            }
            let Some(r) = s.large_residue else { continue };
            if r != 0 {
                diag.nonsingular += 1;
                if diag.first_nonsingular.is_none() {
                    diag.first_nonsingular = Some(path.clone());
                }
            }
            if r == 1 || r == large - 1 {
                let cert = certify_acyclicity(graph, &path)?;
                if cert.verdict == Verdict::AcyclicOverZ {
                    return Ok(cert);
                }
            }
        }
    }
    Err(Error::NoPathFound(Box::new(diag)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CayleyTable;
    use crate::complex::graph::EdgeSpec;
    use std::sync::Arc;

    fn c2_loops() -> OrbitGraph {
        let g = Arc::new(CayleyTable::cyclic(2));
        let e = EdgeSpec { name: "e".into(), stabilizer: vec![0], source: 0, target: 0, twist: 0 };
        OrbitGraph::from_spec(g, vec![("v".into(), vec![0, 1])], vec![e]).unwrap()
    }

    #[test]
    fn toy_certificates() {
        let graph = c2_loops();
        let single = EdgePath::parse(&graph, "0 0 1").unwrap();
        assert_eq!(certify_acyclicity(&graph, &single).unwrap().verdict, Verdict::AcyclicOverZ);
        let both = EdgePath::parse(&graph, "0 0 1\n0 1 1").unwrap();
        let c = certify_acyclicity(&graph, &both).unwrap();
        assert_eq!(c.verdict, Verdict::NotAcyclic);
        let twice = certify_acyclicity(&graph, &single.doubled()).unwrap();
        assert_eq!(twice.determinant, BigInt::from(4));
        assert_eq!(certify_acyclicity(&graph, &EdgePath::null(&graph)).unwrap().determinant, BigInt::zero());
    }

    #[test]
    fn zero_budget() {
        let graph = c2_loops();
        assert!(matches!(search_attaching_path(&graph, &SearchConfig::new(1, 0)), Err(Error::NoPathFound(_))));
    }
}
