use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use sl2v_core::algebra::{CayleyTable, Group, GroupAlgElt};
use sl2v_core::cyclotomic::{cyclo, CycloNum};
use sl2v_core::group::{Mat2, Sl2};
use sl2v_core::unitary::TestGroup;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn cyclo_elt() -> impl Strategy<Value = CycloNum> {
    let conductor = prop::sample::select(vec![1u32, 3, 4, 5, 8, 12, 13]);
    (conductor, prop::collection::vec((0i64..24, small_rational()), 0..5)).prop_map(|(n, terms)| {
        terms.into_iter().fold(CycloNum::zero(), |acc, (k, c)| &acc + &cyclo(n, k).scale(&c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_axioms(x in cyclo_elt(), y in cyclo_elt(), w in cyclo_elt()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        prop_assert_eq!(&(&x - &x), &CycloNum::zero());
        prop_assert_eq!(&x * &CycloNum::one(), x.clone());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        // |x|² is real and matches the float image
        let (re, im) = (&x * &x.conj()).to_complex();
        let (xr, xi) = x.to_complex();
        prop_assert!(im.abs() < 1e-9);
        prop_assert!((re - (xr * xr + xi * xi)).abs() < 1e-6 * (1.0 + re.abs()));
    }

    #[test]
    fn text_form_roundtrips(x in cyclo_elt()) {
        let back: CycloNum = x.to_text().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

fn word(sl: &Sl2, letters: &[u8]) -> Mat2 {
    let gens = [sl.a(), sl.b(), sl.alpha(), sl.beta()];
    letters.iter().fold(sl.identity(), |acc, &l| sl.mul(&acc, &gens[l as usize % 4]))
}

fn q_and_words() -> impl Strategy<Value = (u32, Vec<u8>, Vec<u8>)> {
    (
        prop::sample::select(vec![13u32, 29, 37, 53]),
        prop::collection::vec(0u8..4, 0..16),
        prop::collection::vec(0u8..4, 1..16),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn class_label_is_a_conjugacy_invariant((q, xw, yw) in q_and_words()) {
        let sl = Sl2::new(q).unwrap();
        let x = word(&sl, &xw);
        let y = word(&sl, &yw);
        let label = sl.classify(&x);
        prop_assert_eq!(sl.classify(&sl.conj(&y, &x)), label);
        prop_assert_eq!(sl.classify(&sl.inv(&x)), label);
        prop_assert_eq!(sl.classify(&sl.neg(&sl.neg(&x))), label);
    }

    /// Σ n² · k₁k₂ ≥ (Σ n)² for any nonnegative integer table n(λ₁, λ₂).
    #[test]
    fn pair_count_inequality(k1 in 1usize..7, k2 in 1usize..7, seed in prop::collection::vec(0u64..12, 36)) {
        let n: Vec<u64> = seed.into_iter().take(k1 * k2).collect();
        let total: u64 = n.iter().sum();
        let squares: u64 = n.iter().map(|v| v * v).sum();
        let lhs = BigRational::from_integer(BigInt::from(squares));
        let rhs = BigRational::new(BigInt::from(total * total), BigInt::from((k1 * k2) as u64));
        prop_assert!(lhs >= rhs);
    }
}

fn subgroup_generated(g: &dyn Group, gens: &[usize]) -> Vec<usize> {
    let mut h = vec![g.identity()];
    let mut i = 0;
    while i < h.len() {
        for &s in gens {
            let y = g.mul(h[i], s);
            if !h.contains(&y) {
                h.push(y);
            }
        }
        i += 1;
    }
    h.sort_unstable();
    h
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn random_element(n: usize, coeffs: &[(usize, i64)]) -> GroupAlgElt {
    let mut e = GroupAlgElt::zero();
    for &(g, c) in coeffs {
        e.add_term(g % n, rat(c));
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_element_squares_to_order_times_itself(gens in prop::collection::vec(0usize..24, 1..3)) {
        let g = TestGroup::sl2_3().unwrap();
        let t: &CayleyTable = &g.table;
        let h = subgroup_generated(t, &gens);
        let nh = GroupAlgElt::norm_element(&h);
        prop_assert_eq!(nh.mul(&nh, t), nh.scale(&rat(h.len() as i64)));
        for &x in &h {
            prop_assert_eq!(nh.left_translate(x, t), nh.clone());
        }
    }

    /// In ℚ[Q₈], π(r) = 0 for Q₈ → Q₈/⟨z⟩ exactly when z·r = −r.
    #[test]
    fn kernel_membership_via_central_involution(
        s in prop::collection::vec((0usize..8, -5i64..=5), 0..8),
        other in prop::collection::vec((0usize..8, -5i64..=5), 1..8),
    ) {
        let g = TestGroup::q8().unwrap();
        let t: &CayleyTable = &g.table;
        let z = (0..8).find(|&x| g.element_order(x) == 2).unwrap();
        // quotient map: x ↦ min(x, zx)
        let proj = |x: usize| x.min(t.mul(z, x));
        let one_minus_z = GroupAlgElt::term(t.identity(), rat(1)).sub(&GroupAlgElt::term(z, rat(1)));
        let r = one_minus_z.mul(&random_element(8, &s), t);
        prop_assert_eq!(r.left_translate(z, t), r.scale(&rat(-1)));
        prop_assert!(r.push_forward(proj).is_zero());
        let x = random_element(8, &other);
        let member = x.push_forward(proj).is_zero();
        prop_assert_eq!(x.left_translate(z, t) == x.scale(&rat(-1)), member);
    }
}
