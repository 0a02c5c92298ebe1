use hkrlab::circlehopf::{
    additive_truncation, cartier_dual_check, exterior, ext_colimit_tower, ext_dims_by_bar, ext_self, function_algebra,
    group_algebra, witt_kernel, AugmentedAlgebra, GradedHopfAlgebra,
};
use hkrlab::exactalg::BaseRing;
use hkrlab::report::all_pass;

fn fp(p: u64) -> BaseRing {
    BaseRing::prime_field(p).unwrap()
}

fn instances() -> Vec<GradedHopfAlgebra> {
    let mut out = Vec::new();
    for ring in [BaseRing::Rationals, fp(2), fp(3), BaseRing::Integers] {
        out.push(exterior(ring, 1, 1).unwrap());
        out.push(exterior(ring, -1, 0).unwrap());
        for n in [1, 2, 3, 4, 6] {
            out.push(group_algebra(ring, n).unwrap());
            out.push(function_algebra(ring, n).unwrap());
        }
    }
    for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2)] {
        out.push(additive_truncation(fp(p), (p as u32).pow(k)).unwrap());
    }
    for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1)] {
        out.push(witt_kernel(p, m).unwrap());
    }
    out
}

#[test]
fn every_instance_satisfies_the_axioms() {
    for h in instances() {
        assert!(all_pass(&h.axiom_checks()), "{h}");
    }
}

#[test]
fn duality_is_involutive_up_to_rank_sixteen() {
    for h in instances().into_iter().filter(|h| h.rank() <= 16) {
        let dd = h.dual().unwrap().dual().unwrap();
        assert!(dd.same_constants(&h), "{h}");
        assert_eq!(dd.basis().iter().map(|b| (b.degree, b.weight)).collect::<Vec<_>>(),
                   h.basis().iter().map(|b| (b.degree, b.weight)).collect::<Vec<_>>());
    }
}

#[test]
fn ext_tables_do_not_depend_on_the_resolution() {
    let mut algs = vec![AugmentedAlgebra::from_hopf(&exterior(BaseRing::Rationals, 1, 1).unwrap()).unwrap()];
    for (p, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 5)] {
        algs.push(AugmentedAlgebra::truncated_polynomial(fp(p), n).unwrap());
    }
    algs.push(AugmentedAlgebra::from_hopf(&witt_kernel(2, 2).unwrap()).unwrap());
    algs.push(AugmentedAlgebra::from_hopf(&additive_truncation(fp(2), 4).unwrap().dual().unwrap()).unwrap());
    for a in &algs {
        assert_eq!(ext_dims_by_bar(a, 3).unwrap(), ext_self(a, 3).unwrap().rows, "{}", a.name());
    }
}

#[test]
fn rank_four_kernel_has_two_exterior_like_generators() {
    // F_2[λ0, λ1]/(λ0², λ1²) as an algebra: Ext = F_2[v0, v1], dims 1, 2, 3, 4
    let a = AugmentedAlgebra::from_hopf(&witt_kernel(2, 2).unwrap()).unwrap();
    assert_eq!(ext_self(&a, 3).unwrap().dims(), vec![1, 2, 3, 4]);
}

#[test]
fn longest_towers() {
    for p in [2, 3] {
        let r = ext_colimit_tower(p, 3).unwrap();
        assert!(all_pass(&r.checks), "{:?}", r.checks);
        assert_eq!(r.dims, vec![vec![1; 4]; 3]);
    }
}

#[test]
fn cartier_matches_are_reported() {
    let r = cartier_dual_check(3, 2).unwrap();
    assert!(all_pass(&r.checks));
    assert_eq!(r.search.matched_basis.len(), 9);
    assert_eq!(r.search.matched_basis[1], ("lambda0".to_string(), "T*".to_string()));
}
