//! Partitions of unity 1 = Σ_e s_e N(G_e) x̃_e over ℚ[G] and their lift to ℚ[Ĝ].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::certificate::{AcyclicityCertificate, CycleBasis, Verdict};
use super::graph::{Extension, OrbitGraph};
use super::path::EdgePath;
use crate::algebra::{Group, GroupAlgElt};
use crate::error::{Error, Result};
use crate::linalg::{solve_unit_exact, ExactDet, IntMatrix};

fn int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// s_e = Σ_{i: e_i = e} ε_i a_i for each edge orbit.
pub fn signed_sums(graph: &OrbitGraph, path: &EdgePath) -> Vec<GroupAlgElt> {
    let mut s = vec![GroupAlgElt::zero(); graph.edges.len()];
    for st in &path.steps {
        s[st.orbit].add_term(st.element, BigRational::from_integer(st.sign.into()));
    }
    s
}

#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    /// common denominator D = det of the pairing matrix
    pub denominator: BigInt,
    /// D·x̃_e, integral
    pub scaled: Vec<GroupAlgElt>,
    pub s: Vec<GroupAlgElt>,
    /// Σ_e s_e N(G_e) (D·x̃_e), which must equal D·1
    pub check: GroupAlgElt,
}

impl PartitionOfUnity {
    pub fn x(&self, e: usize) -> GroupAlgElt {
        self.scaled[e].scale(&BigRational::new(BigInt::one(), self.denominator.clone()))
    }

    pub fn verified(&self, g: &dyn Group) -> bool {
        self.check == GroupAlgElt::term(g.identity(), int(&self.denominator))
    }
}

/// Solves 1 = Σ_e s_e N(G_e) x̃_e exactly.
///
/// Writing N(G_e) x̃_e = Σ_f μ_f N(G_e) k_f over right cosets G_e k_f, the
/// coefficient matrix is the pairing matrix with rows reindexed by g ↦ g⁻¹;
/// unknowns on tree edges are set to zero.
pub fn solve_partition_of_unity(graph: &OrbitGraph, cert: &AcyclicityCertificate) -> Result<PartitionOfUnity> {
    let g = graph.group.as_ref();
    let n = g.order();
    if cert.verdict == Verdict::NotAcyclic {
        return Err(Error::Inconsistent("attaching map is singular; the norm elements do not generate".into()));
    }
    let basis = CycleBasis::new(graph)?;
    let mut xi = IntMatrix::zeros(n, n);
    for h in 0..n {
        let src = g.inv(h);
        xi.data[h * n..(h + 1) * n].copy_from_slice(&cert.matrix.data[src * n..(src + 1) * n]);
    }
    // row reindexing changes the sign of the determinant at most
    let det = ExactDet { det: cert.determinant.clone(), primes: cert.primes.clone(), hadamard_log2: cert.hadamard_log2 };
    let perm_sign = permutation_sign(&(0..n).map(|h| g.inv(h)).collect::<Vec<_>>());
    let det = ExactDet { det: &det.det * perm_sign, ..det };
    let mu = solve_unit_exact(&xi, g.identity(), &det).ok_or_else(|| Error::Inconsistent("singular system".into()))?;
    let mut scaled = vec![GroupAlgElt::zero(); graph.edges.len()];
    for (cell, &col) in basis.column.iter().enumerate() {
        if col == usize::MAX || mu[col].is_zero() {
            continue;
        }
        let (orbit, rep) = graph.edge_of_cell(cell);
        scaled[orbit].add_term(g.inv(rep), int(&mu[col]));
    }
    let s = signed_sums(graph, &cert.path);
    let check = combine(graph, &s, &scaled, g, &|e| graph.edges[e].stabilizer.clone());
    let out = PartitionOfUnity { denominator: det.det, scaled, s, check };
    if !out.verified(g) {
        return Err(Error::Inconsistent("substitution does not reproduce 1".into()));
    }
    Ok(out)
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Σ_e s_e N(H_e) y_e.
fn combine(graph: &OrbitGraph, s: &[GroupAlgElt], y: &[GroupAlgElt], g: &dyn Group, stab: &dyn Fn(usize) -> Vec<usize>) -> GroupAlgElt {
    let mut total = GroupAlgElt::zero();
    for e in 0..graph.edges.len() {
        if s[e].is_zero() || y[e].is_zero() {
            continue;
        }
        let sn = s[e].mul(&GroupAlgElt::norm_element(&stab(e)), g);
        total = total.add(&sn.mul(&y[e], g));
    }
    total
}

#[derive(Clone, Debug)]
pub struct LiftedPartition {
    /// x_e over ℚ[Ĝ]
    pub x: Vec<GroupAlgElt>,
    pub r: GroupAlgElt,
    pub delta: GroupAlgElt,
    /// z·r = −r
    pub r_in_kernel: bool,
    /// 1 = (1 − z)δ + Σ ε_i â_i N(Ĝ_{e_i}) x_{e_i}
    pub identity_holds: bool,
    /// π(N(Ĝ_e)) = |ker π|·N(G_e) for every edge orbit
    pub norms_project: bool,
    /// π of the Ĝ-level sum reproduces the G-level identity
    pub projection_matches: bool,
}

impl LiftedPartition {
    pub fn passed(&self) -> bool {
        self.r_in_kernel && self.identity_holds && self.norms_project && self.projection_matches
    }
}

/// x_e = section(x̃_e)/|ker π|, r = 1 − Σ ε_i â_i N(Ĝ_{e_i}) x_{e_i}, δ = r/2.
///
/// Arithmetic runs on the integral multiples by κD, κ = |ker π|.
pub fn lift_partition(graph: &OrbitGraph, path: &EdgePath, sol: &PartitionOfUnity, ext: &Extension) -> Result<LiftedPartition> {
    let gh = ext.group.as_ref();
    let kappa = ext.kernel.len() as i64;
    let z = ext.z();
    let one = gh.identity();
    let s_hat: Vec<GroupAlgElt> = signed_sums(graph, path).iter().map(|s| s.push_forward(|x| ext.section[x])).collect();
    let y_hat: Vec<GroupAlgElt> = sol.scaled.iter().map(|y| y.push_forward(|x| ext.section[x])).collect();
    let stab_hat: Vec<Vec<usize>> = graph.edges.iter().map(|e| ext.preimage(&e.stabilizer)).collect();

    let norms_project = graph.edges.iter().zip(&stab_hat).all(|(e, h)| {
        GroupAlgElt::norm_element(h).push_forward(|x| ext.proj[x]) == GroupAlgElt::norm_element(&e.stabilizer).scale(&BigRational::from_integer(kappa.into()))
    });
    let kd = &sol.denominator * kappa;
    // Σ ŝ_e N(Ĝ_e) Ŷ_e = κD · Σ ε_i â_i N(Ĝ_{e_i}) x_{e_i}
    let sum = combine(graph, &s_hat, &y_hat, gh, &|e| stab_hat[e].clone());
    let projection_matches = sum.push_forward(|x| ext.proj[x]) == sol.check.scale(&BigRational::from_integer(kappa.into()));
    // R = κD·r
    let big_r = GroupAlgElt::term(one, int(&kd)).sub(&sum);
    let z_r = big_r.left_translate(z, gh);
    let r_in_kernel = z_r == big_r.scale(&-BigRational::one());
    // (1 − z)R + 2Σ = 2κD
    let lhs = big_r.sub(&z_r).add(&sum.scale(&BigRational::from_integer(2.into())));
    let identity_holds = lhs == GroupAlgElt::term(one, int(&(&kd * 2)));
    if !r_in_kernel {
        return Err(Error::Inconsistent("z·r differs from −r".into()));
    }
    let inv_kd = BigRational::new(BigInt::one(), kd.clone());
    let x = y_hat.iter().map(|y| y.scale(&inv_kd)).collect();
    let r = big_r.scale(&inv_kd);
    let delta = r.scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    Ok(LiftedPartition { x, r, delta, r_in_kernel, identity_holds, norms_project, projection_matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CayleyTable;
    use crate::complex::certificate::certify_acyclicity;
    use crate::complex::graph::EdgeSpec;
    use std::sync::Arc;

    fn loops(n: usize) -> OrbitGraph {
        let g = Arc::new(CayleyTable::cyclic(n));
        let e = EdgeSpec { name: "e".into(), stabilizer: vec![0], source: 0, target: 0, twist: 0 };
        OrbitGraph::from_spec(g, vec![("v".into(), (0..n).collect())], vec![e]).unwrap()
    }

    #[test]
    fn trivial_group_single_loop() {
        let graph = loops(1);
        let path = EdgePath::parse(&graph, "0 0 1").unwrap();
        let cert = certify_acyclicity(&graph, &path).unwrap();
        let sol = solve_partition_of_unity(&graph, &cert).unwrap();
        assert!(sol.x(0).is_one(graph.group.as_ref()));
        let lift = lift_partition(&graph, &path, &sol, &Extension::trivial(graph.group.clone())).unwrap();
        assert!(lift.passed());
        assert!(lift.delta.is_zero());
    }

    #[test]
    fn c2_solvable_iff_invertible() {
        let graph = loops(2);
        let both = EdgePath::parse(&graph, "0 0 1\n0 1 1").unwrap();
        let cert = certify_acyclicity(&graph, &both).unwrap();
        assert!(matches!(solve_partition_of_unity(&graph, &cert), Err(Error::Inconsistent(_))));
        // 1 + g + g: s = 1 + 2g is invertible, (1 + 2g)(−1 + 2g)/3 = 1
        let three = EdgePath::parse(&graph, "0 0 1\n0 1 1\n0 1 1").unwrap();
        let cert = certify_acyclicity(&graph, &three).unwrap();
        let sol = solve_partition_of_unity(&graph, &cert).unwrap();
        let x = sol.x(0);
        assert_eq!(x.coeff(0), BigRational::new((-1).into(), 3.into()));
        assert_eq!(x.coeff(1), BigRational::new(2.into(), 3.into()));
    }
}
