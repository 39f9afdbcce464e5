use nijenhuis_core::algebra::{check_n_algebra, check_prelie2, suspend_to_dgla, susy_transform, OpKind};
use nijenhuis_core::geometry::{Coordinates, Var, VectorField};
use nijenhuis_core::infinity::{
    assemble, check_lift, check_maurer_cartan, disassemble, psi_lift, quadratic_relations_check, random_collection,
};
use nijenhuis_core::operad::{cobar_d_sum, CobarVariant, Corolla};
use nijenhuis_core::sign::{koszul_sign, permutation_parity, sort_with_parity};
use nijenhuis_core::{samples, FormalSum, Scalar};
use proptest::prelude::*;

fn degrees(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..=max_len)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn degrees_and_perm() -> impl Strategy<Value = (Vec<i64>, Vec<usize>)> {
    degrees(6).prop_flat_map(|d| {
        let n = d.len();
        (Just(d), permutation(n))
    })
}

fn random_field(co: &std::sync::Arc<Coordinates>, seed: u64, degree: i64) -> VectorField {
    use rand::Rng;
    let mut r = samples::rng(seed);
    let mut terms = FormalSum::zero();
    for m in co.monomials(0, 2) {
        for v in (0..co.dim()).flat_map(|i| [Var::T(i), Var::Theta(i)]) {
            let f = VectorField::term(co, m.clone(), v, Scalar::one());
            if f.degree() == Some(degree) && r.gen_bool(0.4) {
                terms.add_term((m.clone(), v), Scalar::from_int(r.gen_range(-2..=2)));
            }
        }
    }
    VectorField::from_terms(co, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sorting_sign_matches_koszul_sign((d, perm) in degrees_and_perm()) {
        let word: Vec<(usize, i64)> = perm.iter().map(|&i| (i, d[i])).collect();
        let mut sorted = word.clone();
        let odd = sort_with_parity(&mut sorted, |x| x.1);
        let placed: Vec<i64> = word.iter().map(|x| x.1).collect();
        let back = koszul_sign(&placed, &inverse(&perm)).unwrap();
        prop_assert_eq!(back == -Scalar::one(), odd);
    }

    #[test]
    fn koszul_sign_is_multiplicative((d, p) in degrees_and_perm(), seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        let mut q: Vec<usize> = (0..d.len()).collect();
        q.shuffle(&mut samples::rng(seed));
        let once = koszul_sign(&d, &p).unwrap();
        let moved: Vec<i64> = p.iter().map(|&i| d[i]).collect();
        let twice = koszul_sign(&moved, &q).unwrap();
        let pq: Vec<usize> = q.iter().map(|&j| p[j]).collect();
        prop_assert_eq!(once * twice, koszul_sign(&d, &pq).unwrap());
    }

    #[test]
    fn even_degrees_give_plain_permutation_sign(perm in permutation(5)) {
        let sign = koszul_sign(&[1, 3, 5, -1, 1], &perm).unwrap();
        prop_assert_eq!(sign == -Scalar::one(), permutation_parity(&perm));
        prop_assert_eq!(koszul_sign(&[0, 2, -2, 4, 0], &perm).unwrap(), Scalar::one());
    }

    #[test]
    fn axiom_identities_match_suspended_jacobi(seed in 0u64..10_000, density in 0.1f64..0.6) {
        let s = samples::random_structure(seed, &[0, 1, 1], &[OpKind::Circ, OpKind::Bullet], density);
        let axioms = check_prelie2(&s).unwrap().is_empty();
        let jacobi = suspend_to_dgla(&s).unwrap().check().is_empty();
        prop_assert_eq!(axioms, jacobi);
    }

    #[test]
    fn supersymmetry_preserves_n_algebras(seed in 0u64..10_000) {
        let s = samples::with_star(samples::image_of_q(&[0, 1], 2).unwrap());
        let f = samples::random_degree_lowering(&s, seed);
        let t = susy_transform(&s, &f).unwrap();
        prop_assert!(check_n_algebra(&t).unwrap().is_empty());
    }

    #[test]
    fn cobar_differential_squares_to_zero(k in 0usize..3, p in 0usize..3, unary: bool, ninf: bool) {
        let variant = if ninf { CobarVariant::NInfinity } else { CobarVariant::PInfinity };
        prop_assume!(k + p >= 2 && k >= variant.min_symmetric());
        let once = cobar_d_sum(&FormalSum::basis(Corolla::standard(k, p).tree()), variant, unary).unwrap();
        prop_assert!(cobar_d_sum(&once, variant, unary).unwrap().is_zero());
    }

    #[test]
    fn commutator_is_graded_antisymmetric(seed in 0u64..10_000, da in -1i64..=1, db in -1i64..=1) {
        let co = Coordinates::new(vec![0, 1], 3);
        let x = random_field(&co, seed, da);
        let y = random_field(&co, seed + 1, db);
        let xy = x.commutator(&y).unwrap();
        let yx = y.commutator(&x).unwrap();
        prop_assert_eq!(xy, yx.scale(&-Scalar::sign(da * db)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn assembly_round_trips(seed in 0u64..10_000, which in 0usize..4, ninf: bool) {
        let degrees: [&[i64]; 4] = [&[0], &[0, 1], &[1, -1], &[2, 1]];
        let variant = if ninf { CobarVariant::NInfinity } else { CobarVariant::PInfinity };
        let mu = random_collection(seed, degrees[which], variant, 3, 0.5);
        let pair = assemble(&mu, 3).unwrap();
        prop_assert_eq!(disassemble(&pair, mu.basis.clone(), variant).unwrap(), mu);
    }

    #[test]
    fn three_verdicts_agree(seed in 0u64..10_000, which in 0usize..4, ninf: bool, density in 0.05f64..0.5) {
        let degrees: [&[i64]; 4] = [&[1], &[0, 0], &[0, 1], &[-1, 0]];
        let variant = if ninf { CobarVariant::NInfinity } else { CobarVariant::PInfinity };
        let mu = random_collection(seed, degrees[which], variant, 3, density);
        let pair = assemble(&mu, 3).unwrap();
        let mc = check_maurer_cartan(&pair).unwrap();
        let q = quadratic_relations_check(&mu, 3).unwrap();
        prop_assert_eq!(mc.failing_arities(), q.failing_arities());
        prop_assert_eq!(mc.passed(), check_lift(&psi_lift(&pair).unwrap()).unwrap().passed());
    }
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}
