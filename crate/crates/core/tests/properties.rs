use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::RngAlgorithm;

use qorient::lambda::{adams, lambda_t, newton_adams_from_lambda, witt_add, QExpandable};
use qorient::mobius::Mobius;
use qorient::qcomb::{euler_phi, pentagonal_support, q_binom, q_expand};
use qorient::scalar::{is_cromulent, Scalar};
use qorient::series::Series;
use qorient::varieties::{
    cg_tensor, character, decompose_character, euler_specialize, hodge, yz_to_q, SL2Rep, Variety,
};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        rng_algorithm: RngAlgorithm::ChaCha,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn q_poly() -> impl Strategy<Value = Scalar> {
    proptest::collection::vec(-4i64..5, 1..5).prop_map(|c| Scalar::q_poly(&c))
}

fn nonzero_q_poly() -> impl Strategy<Value = Scalar> {
    q_poly().prop_filter("nonzero", |p| !p.is_zero())
}

/// Rational functions in `s`, including odd powers.
fn scalar() -> impl Strategy<Value = Scalar> {
    (q_poly(), nonzero_q_poly(), -3i64..4).prop_map(|(n, d, k)| (&n * &Scalar::s_pow(k)).checked_div(&d).unwrap())
}

/// Rational functions in `q`.
fn q_scalar() -> impl Strategy<Value = Scalar> {
    (q_poly(), nonzero_q_poly(), -2i64..3).prop_map(|(n, d, k)| (&n * &Scalar::q_pow(k)).checked_div(&d).unwrap())
}

/// Rational functions in `q` with no pole at `q = 0`.
fn q_regular() -> impl Strategy<Value = Scalar> {
    (q_poly(), nonzero_q_poly(), 0i64..3)
        .prop_filter("no pole at 0", |(_, d, _)| d.eval_q0().unwrap() != rat(0))
        .prop_map(|(n, d, k)| (&n * &Scalar::q_pow(k)).checked_div(&d).unwrap())
}

fn series(order: usize) -> impl Strategy<Value = Series<Scalar>> {
    proptest::collection::vec(q_poly(), order + 1).prop_map(move |c| Series::new('T', order, c))
}

fn virtual_rep() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..4, 1..6)
}

fn sl2() -> impl Strategy<Value = SL2Rep> {
    proptest::collection::btree_map(0u32..5, 0i64..3, 0..4).prop_map(SL2Rep::from_multiplicities)
}

fn variety() -> impl Strategy<Value = Variety> {
    proptest::collection::vec(0u32..4, 0..3).prop_map(|f| Variety::product(&f))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form_ignores_common_factors(a in scalar(), g in nonzero_q_poly()) {
        let scaled = (&a * &g).checked_div(&g).unwrap();
        prop_assert_eq!(scaled.numerator(), a.numerator());
        prop_assert_eq!(scaled.denominator(), a.denominator());
        prop_assert!(a.denominator().leading_coeff().unwrap() == &rat(1));
    }

    #[test]
    fn integer_polynomials_are_cromulent(a in q_poly(), b in q_poly(), k in 1u64..8) {
        prop_assert!(a.in_z_q());
        prop_assert!(is_cromulent(&a).unwrap());
        let qk = Scalar::q_poly(&vec![1; k as usize]);
        let x = a.checked_div(&qk).unwrap();
        let y = (&b * &Scalar::q()).checked_div(&qk).unwrap();
        prop_assert!(is_cromulent(&(&x + &y)).unwrap());
        prop_assert!(is_cromulent(&(&x * &y)).unwrap());
    }

    #[test]
    fn q_expansion_is_a_ring_map(a in q_regular(), b in q_regular()) {
        let n = 12;
        prop_assert_eq!(q_expand(&(&a + &b), n).unwrap(), &q_expand(&a, n).unwrap() + &q_expand(&b, n).unwrap());
        prop_assert_eq!(q_expand(&(&a * &b), n).unwrap(), &q_expand(&a, n).unwrap() * &q_expand(&b, n).unwrap());
    }

    #[test]
    fn series_ring_axioms(a in series(6), b in series(6), c in series(6)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn reversion_round_trips(mut f in series(6), k in -2i64..3, neg in any::<bool>()) {
        let mut c = f.coeffs().to_vec();
        c.resize(7, Scalar::zero());
        c[0] = Scalar::zero();
        c[1] = if neg { -Scalar::q_pow(k) } else { Scalar::q_pow(k) };
        f = Series::new('T', 6, c);
        let g = f.reverse().unwrap();
        let t = Series::variable('T', 6);
        prop_assert_eq!(f.compose(&g).unwrap(), t.clone());
        prop_assert_eq!(g.compose(&f).unwrap(), t);
    }

    #[test]
    fn mobius_action_is_multiplicative(
        x in proptest::array::uniform4(-3i64..4),
        y in proptest::array::uniform4(-3i64..4),
        f in series(5),
    ) {
        let (Ok(a), Ok(b)) = (Mobius::from_ints(x[0], x[1], x[2], x[3]), Mobius::from_ints(y[0], y[1], y[2], y[3])) else {
            return Ok(());
        };
        let f = f.shift_up(1).truncate(5);
        if let (Ok(inner), Ok(direct)) = (b.apply(&f), a.mul(&b).apply(&f)) {
            if let Ok(outer) = a.apply(&inner) {
                prop_assert_eq!(outer, direct);
            }
        }
    }

    #[test]
    fn adams_is_a_ring_map(a in q_scalar(), b in q_scalar(), j in 1u32..5, k in 1u32..5) {
        prop_assert_eq!(adams(&(&a + &b), k).unwrap(), &adams(&a, k).unwrap() + &adams(&b, k).unwrap());
        prop_assert_eq!(adams(&(&a * &b), k).unwrap(), &adams(&a, k).unwrap() * &adams(&b, k).unwrap());
        prop_assert_eq!(adams(&adams(&a, k).unwrap(), j).unwrap(), adams(&a, j * k).unwrap());
    }

    #[test]
    fn lambda_t_is_additive(a in virtual_rep(), b in virtual_rep()) {
        let len = a.len().max(b.len());
        let sum: Vec<i64> = (0..len).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect();
        let l = |v: &[i64]| lambda_t(&QExpandable::from_multiplicities(v, 12), 5, 12).unwrap();
        let (lhs, rhs) = (witt_add(&l(&a), &l(&b)), l(&sum));
        prop_assert_eq!(lhs.body(), rhs.body());
    }

    #[test]
    fn newton_recovers_adams(a in virtual_rep()) {
        let w = lambda_t(&QExpandable::from_multiplicities(&a, 12), 5, 12).unwrap();
        for (i, psi) in newton_adams_from_lambda(&w, 5).iter().enumerate() {
            let want = q_expand(&adams(&Scalar::q_poly(&a), i as u32 + 1).unwrap(), 12).unwrap();
            prop_assert_eq!(psi, &want);
        }
    }

    #[test]
    fn clebsch_gordan_dimensions_and_characters(a in sl2(), b in sl2()) {
        let t = cg_tensor(&a, &b);
        prop_assert_eq!(t.dim(), a.dim() * b.dim());
        prop_assert_eq!(character(&t), &character(&a) * &character(&b));
        prop_assert_eq!(decompose_character(&character(&a)).unwrap(), a);
    }

    #[test]
    fn hodge_is_multiplicative(x in variety(), y in variety()) {
        prop_assert_eq!(hodge(&x.times(&y)), hodge(&x).mul(&hodge(&y)));
        prop_assert!(hodge(&x).is_symmetric());
    }

    #[test]
    fn euler_routes_agree(x in variety()) {
        let h = hodge(&x);
        let e = euler_specialize(&h, x.dim());
        prop_assert!(e.ok);
        prop_assert_eq!(yz_to_q(&h).unwrap().eval_q1().unwrap(), rat(e.chi));
    }

    #[test]
    fn gaussian_pascal_rule(n in 1u64..9, k in 1u64..9) {
        prop_assume!(k < n);
        let lhs = q_binom(n, k).unwrap();
        let rhs = &q_binom(n - 1, k - 1).unwrap() + &(&Scalar::q_pow(k as i64) * &q_binom(n - 1, k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_function_is_pentagonal(n in 0usize..60) {
        let phi = euler_phi(n);
        let support = pentagonal_support(n);
        for d in 0..=n {
            let want = support.iter().find(|(p, _)| *p == d).map_or(0, |(_, s)| *s);
            prop_assert_eq!(phi.coeff(d).clone(), rat(want));
        }
    }
}
