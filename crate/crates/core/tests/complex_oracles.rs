use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sl2v_core::algebra::{CayleyTable, Group, GroupAlgElt};
use sl2v_core::complex::{
    attached_complex_homology, build_graph, certify_acyclicity, lift_partition, path_from_cells, solve_partition_of_unity, y0_word, EdgePath,
    EdgeSpec, Extension, GraphFlavor, GroupPair, OrbitGraph, Verdict, Walker,
};

/// |PSL₂(q)| / |H| for the four vertex and four edge stabilizers.
fn index_counts(q: u64) -> (Vec<usize>, BTreeMap<String, usize>) {
    let n = q * (q * q - 1) / 2;
    let v = [q + 1, n / (q - 1), n / (q + 1), n / 12].map(|x| x as usize).to_vec();
    let e = [("eta0", n / ((q - 1) / 2)), ("eta1", n / 2), ("eta2", n / 4), ("eta3", n / 3)];
    (v, e.into_iter().map(|(k, c)| (k.to_string(), c as usize)).collect())
}

fn edge_counts(g: &OrbitGraph) -> BTreeMap<String, usize> {
    g.edges.iter().map(|e| (e.name.clone(), e.cosets.len())).collect()
}

#[test]
fn q13_graph_with_free_loops() {
    let pair = GroupPair::build(13, None).unwrap();
    let g = build_graph(&pair, GraphFlavor::Mod13, 2).unwrap();
    let (v, mut e) = index_counts(13);
    assert_eq!(v, vec![14, 91, 78, 91]);
    e.insert("eta'1".into(), 1092);
    e.insert("eta'2".into(), 1092);
    assert_eq!(g.vertex_counts(), v);
    assert_eq!(edge_counts(&g), e);
    assert_eq!(g.homology_ranks(), (1, 3 * 1092));
    let w = y0_word(&g, None).unwrap();
    assert_eq!(w.x_labels.len(), 3);
    assert_eq!(w.render(), "tau_eta0^-1 tau_eta2^-1 tau_eta3^-1 rho0(g_eta3)");
}

#[test]
fn q29_graph_counts_and_first_betti_number() {
    let pair = GroupPair::build(29, None).unwrap();
    let g = build_graph(&pair, GraphFlavor::Mod5, 0).unwrap();
    let (v, e) = index_counts(29);
    assert_eq!(g.vertex_counts(), v);
    assert_eq!(edge_counts(&g), e);
    assert_eq!((g.num_vertices(), g.num_edges()), (1886, 14065));
    assert_eq!(g.homology_ranks(), (1, 12180));
    assert_eq!(y0_word(&g, None).unwrap().length(), 4);
}

#[test]
fn flavor_must_match_q() {
    let pair = GroupPair::build(13, None).unwrap();
    assert!(build_graph(&pair, GraphFlavor::Mod5, 0).is_err());
}

#[test]
fn eta0_only_path_is_not_acyclic() {
    let pair = GroupPair::build(13, None).unwrap();
    let g = build_graph(&pair, GraphFlavor::Mod13, 0).unwrap();
    let eta0 = g.edge_index("eta0").unwrap();
    let allowed: Vec<bool> = (0..g.edges.len()).map(|i| i == eta0).collect();
    let walker = Walker::new(&g, &allowed);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let path = path_from_cells(&g, &walker.closed_walk(16, &mut rng));
    assert!(path.steps.iter().all(|s| s.orbit == eta0));
    path.check_closed(&g).unwrap();
    let cert = certify_acyclicity(&g, &path).unwrap();
    assert_eq!(cert.verdict, Verdict::NotAcyclic);
    assert_eq!(cert.determinant, BigInt::from(0));
    assert_eq!(certify_acyclicity(&g, &EdgePath::null(&g)).unwrap().verdict, Verdict::NotAcyclic);
}

#[test]
fn dump_and_path_formats() {
    let pair = GroupPair::build(13, None).unwrap();
    let g = build_graph(&pair, GraphFlavor::Mod13, 0).unwrap();
    let mut buf = Vec::new();
    g.write_dump(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("V ")).count(), 274);
    let edges: Vec<&str> = text.lines().filter(|l| l.starts_with("E ")).collect();
    assert_eq!(edges.len(), 1365);
    assert!(edges.iter().all(|l| l.split_whitespace().count() == 6));

    let walker = Walker::new(&g, &[true; 4]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let path = path_from_cells(&g, &walker.closed_walk(12, &mut rng));
    let mut out = Vec::new();
    path.write(&mut out).unwrap();
    let back = EdgePath::parse(&g, std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(back, path);
    assert!(EdgePath::parse(&g, "0 0").is_err());
    assert!(EdgePath::parse(&g, "0 0 1").is_err());
}

fn loops(group: Arc<dyn Group>, stabilizer: Vec<usize>) -> OrbitGraph {
    let n = group.order();
    let e = EdgeSpec { name: "e".into(), stabilizer, source: 0, target: 0, twist: 0 };
    OrbitGraph::from_spec(group, vec![("v".into(), (0..n).collect())], vec![e]).unwrap()
}

#[test]
fn certificate_and_smith_oracle_agree_on_cyclic_groups() {
    // one free edge orbit over C_n: H₁ ≅ ℤ[C_n], ξ = Σ cᵢ gⁱ gives a circulant
    for n in 2..7usize {
        let g = loops(Arc::new(CayleyTable::cyclic(n)), vec![0]);
        for text in ["0 0 1", "0 0 1\n0 1 1", "0 0 1\n0 1 1\n0 1 1", "0 0 1\n0 0 1"] {
            let path = EdgePath::parse(&g, text).unwrap();
            let cert = certify_acyclicity(&g, &path).unwrap();
            let h = attached_complex_homology(&g, &path);
            assert_eq!(h.h0_rank, 1);
            let torsion: BigInt = h.h1_torsion.iter().map(|t| t.parse::<BigInt>().unwrap()).product();
            if cert.determinant == BigInt::from(0) {
                assert!(h.h1_rank > 0, "n = {n}, {text:?}");
            } else {
                assert_eq!(h.h1_rank, 0);
                assert_eq!(torsion, num_traits::Signed::abs(&cert.determinant), "n = {n}, {text:?}");
            }
            assert_eq!(h.is_acyclic(), cert.verdict == Verdict::AcyclicOverZ);
        }
    }
}

#[test]
fn certificate_json_fields() {
    let g = loops(Arc::new(CayleyTable::cyclic(3)), vec![0]);
    let path = EdgePath::parse(&g, "0 0 1\n0 1 1").unwrap();
    let cert = certify_acyclicity(&g, &path).unwrap();
    let v = cert.to_json();
    // det of the circulant of 1 + g over C₃ is 1 + 1 = 2
    assert_eq!(v["determinant"], "2");
    assert_eq!(v["verdict"], "acyclic-over-q");
    assert!(v["primes"].as_array().is_some_and(|p| !p.is_empty()));
    assert!(v["hadamard_log2"].as_f64().is_some());
}

#[test]
fn lift_through_c4_onto_c2() {
    let c2: Arc<dyn Group> = Arc::new(CayleyTable::cyclic(2));
    let g = loops(c2, vec![0]);
    let path = EdgePath::parse(&g, "0 0 1").unwrap();
    let cert = certify_acyclicity(&g, &path).unwrap();
    let sol = solve_partition_of_unity(&g, &cert).unwrap();
    let c4 = Arc::new(CayleyTable::cyclic(4));
    let ext = Extension { group: c4.clone(), proj: vec![0, 1, 0, 1], section: vec![0, 1], kernel: vec![0, 2] };
    let lift = lift_partition(&g, &path, &sol, &ext).unwrap();
    assert!(lift.passed());
    let half = BigRational::new(1.into(), 2.into());
    // r = (1 − z)/2, δ = (1 − z)/4
    assert_eq!(lift.r.coeff(0), half);
    assert_eq!(lift.r.coeff(2), -half.clone());
    assert_eq!(lift.delta.coeff(0), BigRational::new(1.into(), 4.into()));
    let one = GroupAlgElt::term(0, BigRational::from_integer(1.into()));
    let z_minus = one.sub(&GroupAlgElt::term(2, BigRational::from_integer(1.into())));
    let n_hat = GroupAlgElt::norm_element(&[0, 2]);
    let total = z_minus.mul(&lift.delta, c4.as_ref()).add(&n_hat.mul(&lift.x[0], c4.as_ref()));
    assert!(total.is_one(c4.as_ref()));
}
