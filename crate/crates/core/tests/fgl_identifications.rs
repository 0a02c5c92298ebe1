use hkrlab::exactalg::{int, BaseRing};
use hkrlab::fgl::{distributions, interpolation_fgl, intvalued_structure, DividedPowerAlgebra};
use hkrlab::report::all_pass;
use proptest::prelude::*;

#[test]
fn multiplicative_distributions_are_integer_valued_polynomials() {
    for n in 1..=8u32 {
        let law = interpolation_fgl(BaseRing::Integers, &int(1), n.max(2)).unwrap();
        let d = distributions(&law, n).unwrap();
        let r = intvalued_structure(n).unwrap();
        assert!(all_pass(&d.axiom_checks()));
        assert!(all_pass(&r.axiom_checks()));
        for i in 0..=n as usize {
            for j in 0..=n as usize {
                assert_eq!(d.product(i, j).unwrap(), r.product(i, j), "N={n} δ_{i} δ_{j}");
            }
            assert_eq!(d.coproduct(i), r.coproduct(i));
            assert_eq!(d.antipode(i), r.antipode(i), "N={n} S δ_{i}");
        }
    }
}

#[test]
fn additive_distributions_are_divided_powers() {
    let law = interpolation_fgl(BaseRing::Rationals, &int(0), 8).unwrap();
    let d = distributions(&law, 8).unwrap();
    let g = DividedPowerAlgebra::new(8);
    for i in 0..=8 {
        for j in 0..=8 {
            assert_eq!(d.product(i, j).unwrap(), &g.product(i, j)[..]);
        }
    }
}

#[test]
fn associated_graded_is_divided_powers_through_twelve() {
    for n in 0..=12 {
        let r = intvalued_structure(n).unwrap();
        assert!(all_pass(&r.graded().checks), "N={n}");
        assert_eq!(r.graded().fiber_at_one, n as usize + 1);
    }
    assert!(intvalued_structure(13).is_err());
}

fn lambda_and_ring() -> impl Strategy<Value = (i64, BaseRing)> {
    let rings = prop_oneof![
        Just(BaseRing::Integers),
        Just(BaseRing::Rationals),
        Just(BaseRing::prime_field(2).unwrap()),
        Just(BaseRing::prime_field(3).unwrap()),
        Just(BaseRing::prime_field(5).unwrap()),
    ];
    (prop_oneof![Just(0i64), Just(1), Just(2), Just(-1), -20i64..20], rings)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_laws_are_formal_group_laws((lambda, ring) in lambda_and_ring(), order in 2u32..7) {
        let f = interpolation_fgl(ring, &int(lambda), order).unwrap();
        prop_assert!(f.is_valid());
        prop_assert!(f.is_polynomial());
        // F(T, ι(T)) = 0 means ι(T) = -T (1 + λT)^{-1}
        let iota = f.inverse_series();
        let lam = ring.normalize(int(lambda)).unwrap();
        for (k, c) in iota.iter().enumerate().skip(1) {
            let expect = ring.neg(&ring.pow(&ring.neg(&lam), k as u64 - 1));
            prop_assert_eq!(c, &expect);
        }
    }

    #[test]
    fn distributions_satisfy_the_axioms(lambda in -4i64..5, n in 1u32..7) {
        let law = interpolation_fgl(BaseRing::Integers, &int(lambda), n.max(2)).unwrap();
        let d = distributions(&law, n).unwrap();
        prop_assert!(all_pass(&d.axiom_checks()));
    }

    #[test]
    fn integer_valued_products_commute(n in 0u32..9, i in 0usize..9, j in 0usize..9) {
        let r = intvalued_structure(n).unwrap();
        let (i, j) = (i % (n as usize + 1), j % (n as usize + 1));
        prop_assert_eq!(r.product(i, j), r.product(j, i));
    }
}
