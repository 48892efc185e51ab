use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2v_core::unitary::{
    commutant_basis, commutant_dim, eigenprojectors, lemma21_construct, orthonormal_basis, random_mixing, unitarity_residual, BlockRep,
    TestGroup, UMatrix, C64,
};

fn root(n: u64, k: u64) -> C64 {
    let t = std::f64::consts::TAU * k as f64 / n as f64;
    Complex::new(t.cos(), t.sin())
}

/// Multiplicity of λ as m − rank(U − λI), rank by singular values.
fn svd_multiplicity(u: &UMatrix, lambda: C64) -> usize {
    let m = u.nrows();
    let shifted = u - UMatrix::identity(m, m) * lambda;
    let sv = shifted.svd(false, false).singular_values;
    sv.iter().filter(|s| **s < 1e-7).count()
}

#[test]
fn projectors_of_small_examples() {
    let id = UMatrix::identity(3, 3);
    let p = eigenprojectors(&id, 1).unwrap();
    assert_eq!(p.len(), 1);
    assert!((&p[0] - &id).norm() < 1e-12);

    let i = Complex::new(0.0, 1.0);
    let d = UMatrix::from_diagonal(&DVector::from_vec(vec![i, -i]));
    let p = eigenprojectors(&d, 4).unwrap();
    // exponents 0..4 ↔ 1, i, −1, −i
    let e00 = UMatrix::from_diagonal(&DVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]));
    let e11 = UMatrix::from_diagonal(&DVector::from_vec(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]));
    assert!((&p[1] - e00).norm() < 1e-12);
    assert!((&p[3] - e11).norm() < 1e-12);
    assert!(p[0].norm() < 1e-12 && p[2].norm() < 1e-12);
}

#[test]
fn random_order_six_unitaries_match_svd_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..12 {
        let m = rng.random_range(2..10);
        let exps: Vec<u64> = (0..m).map(|_| rng.random_range(0..6)).collect();
        let q = random_mixing(m, &mut rng).qr().q();
        assert!(unitarity_residual(&q) < 1e-10);
        let diag = UMatrix::from_diagonal(&DVector::from_vec(exps.iter().map(|&k| root(6, k)).collect()));
        let u = &q * diag * q.adjoint();
        let projectors = eigenprojectors(&u, 6).unwrap();
        assert_eq!(projectors.len(), 6);
        let ranks: Vec<usize> = projectors.iter().map(|p| orthonormal_basis(p).ncols()).collect();
        let oracle: Vec<usize> = (0..6).map(|k| svd_multiplicity(&u, root(6, k))).collect();
        assert_eq!(ranks, oracle, "trial {trial}");
        assert_eq!(ranks.iter().sum::<usize>(), m);
    }
}

#[test]
fn commutant_of_identity_and_of_irreducible() {
    for m in [1, 3, 5] {
        assert_eq!(commutant_dim(&[UMatrix::identity(m, m)]), m * m);
    }
    let g = Arc::new(TestGroup::q8().unwrap());
    let two = g.irreps.iter().position(|r| r.dim == 2).unwrap();
    let rep = BlockRep::new(g, vec![two]).unwrap();
    assert_eq!(commutant_dim(rep.images()), 1);
}

#[test]
fn regular_representation_of_q8_at_z() {
    let g = Arc::new(TestGroup::q8().unwrap());
    // regular representation: every irreducible with multiplicity equal to its degree
    let blocks: Vec<usize> = g.irreps.iter().enumerate().flat_map(|(i, r)| std::iter::repeat_n(i, r.dim)).collect();
    let rep = BlockRep::new(g.clone(), blocks).unwrap();
    assert_eq!(rep.dim, 8);
    let z = (0..8).find(|&x| g.element_order(x) == 2).unwrap();
    let comm = commutant_basis(rep.images());
    let o = lemma21_construct(&rep, z, z, &comm, Some(11)).unwrap();
    assert_eq!((o.k1, o.k2), (2, 2));
    assert_eq!(o.bound(), 16);
    // ρ(z) = diag(1,1,1,1,−1,−1,−1,−1): centralizer M₄ ⊕ M₄
    assert_eq!(o.intersection_dim, 32);
    assert!(o.holds());
}

#[test]
fn intersection_dim_is_stable_under_reseeding() {
    for g in [TestGroup::q8().unwrap(), TestGroup::sl2_3().unwrap()] {
        let g = Arc::new(g);
        let rep = BlockRep::standard(g.clone()).unwrap();
        let comm = commutant_basis(rep.images());
        let n = g.order();
        let pairs = [(1, 2), (n - 1, 3 % n), (5 % n, 5 % n)];
        for (g1, g2) in pairs {
            let base = lemma21_construct(&rep, g1, g2, &comm, None).unwrap().intersection_dim;
            for seed in 0..20 {
                let o = lemma21_construct(&rep, g1, g2, &comm, Some(seed)).unwrap();
                assert_eq!(o.intersection_dim, base, "{} ({g1},{g2}) seed {seed}", g.name);
                assert!(o.holds());
            }
        }
    }
}
