use num_traits::{One, Zero};
use serde::Serialize;

use super::hopf::{
    additive_truncation, exponent_index, exponent_vectors, function_algebra, group_algebra, truncated_hopf_algebra,
    GradedHopfAlgebra, TruncatedPresentation,
};
use crate::error::{Error, Result};
use crate::exactalg::{int, var_names, BaseRing, ExactMatrix, Scalar};
use crate::report::{all_pass, Check};
use crate::witt::build_witt_law;

/// `O(Ker^(m)) = F_p[λ_0..λ_{m-1}]/(λ_i^p)`, comultiplication from the Witt
/// sum polynomials and antipode from Witt negation, reduced mod `p`.
/// `λ_i` has weight `-p^i`.
pub fn witt_kernel(p: u64, m: usize) -> Result<GradedHopfAlgebra> {
    let ring = BaseRing::prime_field(p)?;
    let law = build_witt_law(p, m)?;
    let names = var_names("lambda", m);
    let bounds = vec![p as u32; m];
    let weights: Vec<i64> = (0..m).map(|i| -(p.pow(i as u32) as i64)).collect();
    let pres = TruncatedPresentation {
        names: &names,
        bounds: &bounds,
        weights: &weights,
        coproducts: &law.sum,
        antipodes: &law.negation,
    };
    truncated_hopf_algebra(&format!("O(Ker^({m}))"), ring, &pres)
}

/// Basis of the subspace of `target` in the given bidegree that is killed
/// by the counit, and is primitive when asked.
fn candidate_space(target: &GradedHopfAlgebra, bideg: (i64, i64), primitive: bool) -> Result<Vec<Vec<Scalar>>> {
    let ring = target.ring();
    let n = target.rank();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| (target.basis()[i].degree, target.basis()[i].weight) == bideg)
        .collect();
    if idx.is_empty() {
        return Ok(Vec::new());
    }
    // linear conditions on the coefficients over idx
    let mut rows: Vec<Vec<Scalar>> = vec![idx.iter().map(|&i| target.data().counit[i].clone()).collect()];
    if primitive {
        let unit = target.unit();
        for ab in 0..n * n {
            let (a, b) = (ab / n, ab % n);
            let row = idx
                .iter()
                .map(|&i| {
                    let want = (if a == i { unit[b].clone() } else { Scalar::zero() })
                        + (if b == i { unit[a].clone() } else { Scalar::zero() });
                    &target.data().comul[i][ab] - want
                })
                .collect();
            rows.push(row);
        }
    }
    let m = ExactMatrix::new(ring, rows.len(), idx.len(), rows.into_iter().flatten().collect())?;
    Ok(m.kernel_basis()?
        .into_iter()
        .map(|k| {
            let mut v = vec![Scalar::zero(); n];
            for (c, &i) in k.into_iter().zip(&idx) {
                v[i] = c;
            }
            v
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoSearch {
    pub candidates_tried: usize,
    /// Images of the source basis, as `name -> expression`.
    pub matched_basis: Vec<(String, String)>,
    #[serde(skip)]
    pub matrix: Option<ExactMatrix>,
}

fn expression(target: &GradedHopfAlgebra, v: &[Scalar]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let name = &target.basis()[i].name;
            if c.is_one() {
                name.clone()
            } else {
                format!("{c}*{name}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

const SEARCH_BUDGET: usize = 100_000;

/// Exhaustive search for a grading-preserving Hopf isomorphism from a
/// truncated polynomial Hopf algebra (basis = exponent vectors for
/// `bounds`) to `target`. Generators go to counit-free elements of the same
/// bidegree, primitive generators to primitives; every structure constant
/// of each candidate is then verified.
pub fn search_isomorphism(source: &GradedHopfAlgebra, bounds: &[u32], target: &GradedHopfAlgebra) -> Result<IsoSearch> {
    let ring = target.ring();
    let p = ring.characteristic();
    if p == 0 || !ring.is_field() {
        return Err(Error::Unsupported("isomorphism search needs a finite prime field".into()));
    }
    if source.rank() != target.rank() {
        return Ok(IsoSearch {
            candidates_tried: 0,
            matched_basis: Vec::new(),
            matrix: None,
        });
    }
    let exps = exponent_vectors(bounds);
    let g = bounds.len();
    let mut spaces = Vec::new();
    for i in 0..g {
        let mut e = vec![0; g];
        e[i] = 1;
        let k = exponent_index(bounds, &e).unwrap();
        let b = &source.basis()[k];
        let prim = source.is_primitive(&source.basis_vector(k));
        spaces.push(candidate_space(target, (b.degree, b.weight), prim)?);
    }
    let counts: Vec<usize> = spaces.iter().map(|s| (p as usize).pow(s.len() as u32) - 1).collect();
    let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    if total > SEARCH_BUDGET {
        return Err(Error::Budget {
            what: "Hopf isomorphism search".into(),
            dimension: total,
            budget: SEARCH_BUDGET,
        });
    }
    let n = target.rank();
    let vector = |space: &[Vec<Scalar>], mut code: usize| -> Vec<Scalar> {
        // code + 1 in base p gives a nonzero coefficient vector
        code += 1;
        let mut v = vec![Scalar::zero(); n];
        for b in space {
            let c = int((code % p as usize) as i64);
            code /= p as usize;
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        v.into_iter().map(|x| ring.reduce(x)).collect()
    };
    let mut tried = 0;
    for flat in 0..total {
        tried += 1;
        let mut rest = flat;
        let gens: Vec<Vec<Scalar>> = spaces
            .iter()
            .zip(&counts)
            .map(|(s, &c)| {
                let v = vector(s, rest % c);
                rest /= c;
                v
            })
            .collect();
        let mut columns = Vec::with_capacity(n);
        for e in &exps {
            let mut acc = target.unit().to_vec();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    acc = target.product(&acc, &gens[i]);
                }
            }
            columns.push(acc);
        }
        let phi = ExactMatrix::from_columns(ring, n, &columns)?;
        if all_pass(&source.morphism_checks(&phi, target)) {
            let matched_basis = (0..n)
                .map(|k| (source.basis()[k].name.clone(), expression(target, &columns[k])))
                .collect();
            return Ok(IsoSearch {
                candidates_tried: tried,
                matched_basis,
                matrix: Some(phi),
            });
        }
    }
    Ok(IsoSearch {
        candidates_tried: tried,
        matched_basis: Vec::new(),
        matrix: None,
    })
}

/// Checks that `pairing[a][b] = ⟨h_a, k_b⟩` is a nondegenerate Hopf pairing
/// between two Hopf algebras concentrated in degree 0.
pub fn hopf_pairing_checks(h: &GradedHopfAlgebra, k: &GradedHopfAlgebra, pairing: &ExactMatrix) -> Vec<Check> {
    let name = |s: &str| format!("{s} (⟨{}, {}⟩)", h.name(), k.name());
    let (nh, nk) = (h.rank(), k.rank());
    let ring = h.ring();
    let pair = |x: &[Scalar], f: &[Scalar]| -> Scalar {
        let mut s = Scalar::zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, fb) in f.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                s += xa * fb * pairing.get(a, b);
            }
        }
        ring.reduce(s)
    };
    // ⟨x ⊗ y, F⟩ for F in K ⊗ K
    let pair2 = |x: &[Scalar], y: &[Scalar], big: &[Scalar], n_big: usize| -> Scalar {
        let mut s = Scalar::zero();
        for (ij, c) in big.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (i, j) = (ij / n_big, ij % n_big);
            let mut ei = vec![Scalar::zero(); n_big];
            let mut ej = vec![Scalar::zero(); n_big];
            ei[i] = Scalar::one();
            ej[j] = Scalar::one();
            s += c * pair(x, &ei) * pair(y, &ej);
        }
        ring.reduce(s)
    };
    let graded = h.basis().iter().chain(k.basis()).any(|b| b.degree != 0);
    if graded || pairing.rows() != nh || pairing.cols() != nk {
        return vec![Check::fail(name("pairing shape"), "pairing needs ungraded algebras and an nh x nk matrix")];
    }
    let mut out = Vec::new();
    let mut bad = None;
    'm: for a in 0..nh {
        for b in 0..nh {
            let xy = h.product(&h.basis_vector(a), &h.basis_vector(b));
            for c in 0..nk {
                let f = k.basis_vector(c);
                if pair(&xy, &f) != pair2(&h.basis_vector(a), &h.basis_vector(b), &k.coproduct(&f), nk) {
                    bad = Some(format!("⟨h_{a} h_{b}, k_{c}⟩ != ⟨h_{a} ⊗ h_{b}, Δ k_{c}⟩"));
                    break 'm;
                }
            }
        }
    }
    out.push(Check::from_bool(name("product dual to coproduct"), bad.is_none(), || bad.clone().unwrap()));
    let mut bad = None;
    'c: for c in 0..nh {
        let x = h.basis_vector(c);
        let dx = h.coproduct(&x);
        for a in 0..nk {
            for b in 0..nk {
                let fg = k.product(&k.basis_vector(a), &k.basis_vector(b));
                // ⟨Δx, f ⊗ g⟩ with the roles of the two sides swapped
                let mut s = Scalar::zero();
                for (ij, cf) in dx.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (i, j) = (ij / nh, ij % nh);
                    s += cf * pairing.get(i, a) * pairing.get(j, b);
                }
                if pair(&x, &fg) != ring.reduce(s) {
                    bad = Some(format!("⟨h_{c}, k_{a} k_{b}⟩ != ⟨Δ h_{c}, k_{a} ⊗ k_{b}⟩"));
                    break 'c;
                }
            }
        }
    }
    out.push(Check::from_bool(name("coproduct dual to product"), bad.is_none(), || bad.clone().unwrap()));
    let units = (0..nk).all(|b| pair(h.unit(), &k.basis_vector(b)) == k.counit_of(&k.basis_vector(b)))
        && (0..nh).all(|a| pair(&h.basis_vector(a), k.unit()) == h.counit_of(&h.basis_vector(a)));
    out.push(Check::from_bool(name("units dual to counits"), units, || "unit/counit mismatch".into()));
    let nondeg = pairing.is_invertible().unwrap_or(false);
    out.push(Check::from_bool(name("nondegenerate"), nondeg, || "pairing matrix is singular".into()));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CartierReport {
    pub p: u64,
    pub m: usize,
    pub rank: usize,
    pub search: IsoSearch,
    pub checks: Vec<Check>,
}

/// `(α_{p^m})^∨ ≅ O(Ker^(m))` by exhaustive structure-constant matching,
/// plus the `μ_{p^m}` / `Z/p^m` pairings over `F_p` and `Q`.
pub fn cartier_dual_check(p: u64, m: usize) -> Result<CartierReport> {
    if !matches!(p, 2 | 3) || !(1..=2).contains(&m) {
        return Err(Error::OutOfRange(format!("Cartier check needs p in {{2, 3}}, m in {{1, 2}} (got p={p}, m={m})")));
    }
    let ring = BaseRing::prime_field(p)?;
    let order = p.pow(m as u32);
    let alpha = additive_truncation(ring, order as u32)?;
    let dual = alpha.dual()?;
    let ker = witt_kernel(p, m)?;
    let mut checks = Vec::new();
    checks.push(Check::from_bool(
        format!("dual of O(alpha_{order}) is involutive"),
        dual.dual()?.same_constants(&alpha),
        || "double dual differs from the original".into(),
    ));
    let search = search_isomorphism(&ker, &vec![p as u32; m], &dual)?;
    let name = format!("O(Ker^({m})) ≅ O(alpha_{order})^dual over F_{p}");
    checks.push(match &search.matrix {
        Some(_) => Check::pass(name),
        None => Check::not_verified(
            name,
            format!("no Hopf isomorphism among {} graded candidates", search.candidates_tried),
        ),
    });

    for base in [ring, BaseRing::Rationals] {
        let mu = group_algebra(base, order as usize)?;
        let z = function_algebra(base, order as usize)?;
        checks.push(Check::from_bool(
            format!("O(mu_{order})^dual = O(Z/{order}) over {base}"),
            mu.dual()?.same_constants(&z),
            || "structure constants differ in the dual basis".into(),
        ));
        let id = ExactMatrix::identity(base, order as usize);
        checks.extend(hopf_pairing_checks(&mu, &z, &id));
    }
    if order == 2 {
        // Z/2 is self-dual over Q through the character ⟨U^a, U^b⟩ = (-1)^{ab}
        let g = group_algebra(BaseRing::Rationals, 2)?;
        let chi = ExactMatrix::from_i64(BaseRing::Rationals, &[&[1, 1], &[1, -1]])?;
        checks.extend(hopf_pairing_checks(&g, &g, &chi));
    }
    Ok(CartierReport {
        p,
        m,
        rank: ker.rank(),
        search,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_frobenius_mod_two() {
        let k = witt_kernel(2, 2).unwrap();
        assert_eq!(k.rank(), 4);
        // λ_0 primitive, λ_1 not: Δλ_1 = λ_1⊗1 + 1⊗λ_1 + λ_0⊗λ_0
        assert!(k.is_primitive(&k.basis_vector(1)));
        assert!(!k.is_primitive(&k.basis_vector(2)));
        let d = k.coproduct(&k.basis_vector(2));
        let nz: Vec<usize> = (0..16).filter(|&i| !d[i].is_zero()).collect();
        assert_eq!(nz, vec![2, 5, 8]);
    }

    #[test]
    fn all_cartier_instances_match() {
        for p in [2, 3] {
            for m in [1, 2] {
                let r = cartier_dual_check(p, m).unwrap();
                assert!(all_pass(&r.checks), "p={p} m={m}: {:?}", r.checks);
                assert_eq!(r.rank, p.pow(m as u32) as usize);
            }
        }
    }

    #[test]
    fn rank_two_match_is_the_identity() {
        let r = cartier_dual_check(2, 1).unwrap();
        assert_eq!(r.search.matched_basis, vec![("1".into(), "1*".into()), ("lambda0".into(), "T*".into())]);
    }

    #[test]
    fn group_algebra_is_not_the_additive_dual() {
        // k[Z/4] and (α_4)^∨ have the same rank but no graded isomorphism
        let ring = BaseRing::prime_field(2).unwrap();
        let g = group_algebra(ring, 4).unwrap();
        let d = additive_truncation(ring, 4).unwrap().dual().unwrap();
        let phi = ExactMatrix::identity(ring, 4);
        assert!(!all_pass(&g.morphism_checks(&phi, &d)));
    }

    #[test]
    fn degenerate_pairing_fails() {
        let g = group_algebra(BaseRing::Rationals, 2).unwrap();
        let bad = ExactMatrix::from_i64(BaseRing::Rationals, &[&[1, 1], &[1, 1]]).unwrap();
        assert!(!all_pass(&hopf_pairing_checks(&g, &g, &bad)));
    }
}
