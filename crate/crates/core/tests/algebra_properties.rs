use std::collections::BTreeMap;
use std::sync::Arc;

use hkrlab::complexes::{ChainComplex, Degreewise};
use hkrlab::exactalg::{int, BaseRing, ExactMatrix, MultiPoly, Scalar};
use hkrlab::witt::{ScalarCarrier, Witt, WittVector};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

const Z: BaseRing = BaseRing::Integers;
const Q: BaseRing = BaseRing::Rationals;

fn matrix(ring: BaseRing, rows: usize, cols: usize, entries: &[i64]) -> ExactMatrix {
    ExactMatrix::from_fn(ring, rows, cols, |i, j| int(entries[(i * cols + j) % entries.len()])).unwrap()
}

/// Integer kernel vectors of `m`, found over Q and cleared of denominators.
fn integral_kernel(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    m.change_ring(Q)
        .unwrap()
        .kernel_basis()
        .unwrap()
        .into_iter()
        .map(|v| {
            let l = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.into_iter().map(|x| x * Scalar::from_integer(l.clone())).collect()
        })
        .collect()
}

/// `C_2 -> C_1 -> C_0` with `d_1` arbitrary and `d_2` a random combination of
/// kernel vectors of `d_1`.
fn three_term(ring: BaseRing, r: [usize; 3], entries: &[i64]) -> ChainComplex {
    let d1 = matrix(ring, r[0], r[1], entries);
    let ker = integral_kernel(&d1);
    let d2 = ExactMatrix::from_fn(ring, r[1], r[2], |i, j| {
        let mut x = Scalar::zero();
        for (k, v) in ker.iter().enumerate() {
            x += &v[i] * int(entries[(j + 3 * k) % entries.len()]);
        }
        x
    })
    .unwrap();
    let ranks = BTreeMap::from([(0, r[0]), (1, r[1]), (2, r[2])]);
    ChainComplex::new(ring, ranks, Degreewise::from([(1, d1), (2, d2)])).unwrap()
}

fn small_entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..4, 1..30)
}

fn ranks() -> impl Strategy<Value = [usize; 3]> {
    (1usize..4, 1usize..5, 1usize..4).prop_map(|(a, b, c)| [a, b, c])
}

fn poly(ring: BaseRing, vars: &Arc<[String]>, terms: &[(u32, u32, u32, i64)]) -> MultiPoly {
    MultiPoly::from_terms(ring, vars.clone(), terms.iter().map(|&(a, b, c, k)| (vec![a, b, c], int(k)))).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(u32, u32, u32, i64)>> {
    prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -5i64..6), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_factorization(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-9i64..10, 1..25)) {
        let m = matrix(Z, rows, cols, &entries);
        let s = m.smith_normal_form().unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), ExactMatrix::identity(Z, rows));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), ExactMatrix::identity(Z, cols));
        let diag: Vec<Scalar> = (0..rows.min(cols)).map(|i| s.d.get(i, i).clone()).collect();
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((w[1].to_integer() % w[0].to_integer()).is_zero());
            }
        }
        prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), m.change_ring(Q).unwrap().rank().unwrap());
    }

    #[test]
    fn polynomial_ring_axioms(a in terms(), b in terms(), c in terms(), p in prop_oneof![Just(0u64), Just(2), Just(3)]) {
        let ring = if p == 0 { Z } else { BaseRing::prime_field(p).unwrap() };
        let v: Arc<[String]> = vec!["x".into(), "y".into(), "z".into()].into();
        let (a, b, c) = (poly(ring, &v, &a), poly(ring, &v, &b), poly(ring, &v, &c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn random_complexes_square_to_zero(r in ranks(), entries in small_entries()) {
        let c = three_term(Z, r, &entries);
        prop_assert!(c.differential(1).mul(&c.differential(2)).unwrap().is_zero());
        // rational ranks satisfy the Euler characteristic identity
        let cq = three_term(Q, r, &entries);
        let chi: i64 = cq.homology_all().unwrap().iter().map(|(n, g)| if n % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        prop_assert_eq!(chi, cq.euler_characteristic());
        // integral free ranks agree with rational ranks
        let hz: Vec<usize> = (0..3).map(|n| c.homology(n).unwrap().free_rank).collect();
        let hq: Vec<usize> = (0..3).map(|n| cq.homology(n).unwrap().free_rank).collect();
        prop_assert_eq!(hz, hq);
    }

    #[test]
    fn broken_differential_is_rejected(entries in prop::collection::vec(1i64..4, 4)) {
        // d_1 = (a b), d_2 = (c d)^T with ac + bd > 0
        let d1 = matrix(Z, 1, 2, &entries[..2]);
        let d2 = matrix(Z, 2, 1, &entries[2..]);
        let ranks = BTreeMap::from([(0, 1), (1, 2), (2, 1)]);
        prop_assert!(ChainComplex::new(Z, ranks, Degreewise::from([(1, d1), (2, d2)])).is_err());
    }

    #[test]
    fn kunneth_over_a_field(r1 in ranks(), r2 in ranks(), e1 in small_entries(), e2 in small_entries(), p in prop_oneof![Just(0u64), Just(2), Just(3)]) {
        let ring = if p == 0 { Q } else { BaseRing::prime_field(p).unwrap() };
        let c = three_term(ring, r1, &e1);
        let d = three_term(ring, r2, &e2);
        let t = c.tensor(&d).unwrap();
        let hc: Vec<usize> = (0..3).map(|n| c.homology(n).unwrap().free_rank).collect();
        let hd: Vec<usize> = (0..3).map(|n| d.homology(n).unwrap().free_rank).collect();
        for n in 0..5i64 {
            let expect: usize = (0..3).filter(|&i| (0..3).contains(&(n - i))).map(|i| hc[i as usize] * hd[(n - i) as usize]).sum();
            prop_assert_eq!(t.homology(n).unwrap().free_rank, expect, "degree {}", n);
        }
    }

    #[test]
    fn ghost_map_is_a_ring_map(p in prop_oneof![Just(2u64), Just(3)], m in 1usize..4, xs in prop::collection::vec(-6i64..7, 6)) {
        let carrier = ScalarCarrier(Z);
        let w = Witt::new(&carrier, p, m).unwrap();
        let a = WittVector::new(xs[..m].iter().map(|&x| int(x)).collect());
        let b = WittVector::new(xs[3..3 + m].iter().map(|&x| int(x)).collect());
        let (ga, gb) = (w.ghost(&a), w.ghost(&b));
        let sum: Vec<Scalar> = ga.iter().zip(&gb).map(|(x, y)| x + y).collect();
        let prod: Vec<Scalar> = ga.iter().zip(&gb).map(|(x, y)| x * y).collect();
        prop_assert_eq!(w.ghost(&w.add(&a, &b).unwrap()), sum);
        prop_assert_eq!(w.ghost(&w.mul(&a, &b).unwrap()), prod);
        if m >= 2 {
            // F shifts ghost coordinates
            let fa = w.frobenius(&a).unwrap();
            let shorter = Witt::new(&carrier, p, m - 1).unwrap();
            prop_assert_eq!(shorter.ghost(&fa), ga[1..].to_vec());
        }
    }
}
