use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use super::truncated::TruncatedHopf;
use crate::complexes::{ChainComplex, FilteredComplex};
use crate::env_budget;
use crate::error::{Error, Result};
use crate::exactalg::{big, int, BaseRing, MultiPoly, Scalar};
use crate::rees::{rees_of, FilteredAlgebraData};
use crate::report::Check;

const Q: BaseRing = BaseRing::Rationals;

/// `C(x_i, n) = x_i (x_i - 1) ... (x_i - n + 1) / n!` over Q.
fn binomial_poly(vars: &Arc<[String]>, i: usize, n: u32) -> MultiPoly {
    let x = MultiPoly::var(Q, vars.clone(), i);
    let mut p = MultiPoly::one(Q, vars.clone());
    let mut fact = Scalar::one();
    for k in 0..n {
        p = p.mul(&x.sub(&MultiPoly::constant(Q, vars.clone(), int(k as i64))));
        fact *= int(k as i64 + 1);
    }
    p.scale(&fact.recip())
}

/// Coordinates of a rational polynomial in the basis `Π_i C(x_i, e_i)`,
/// found by clearing the lexicographically largest monomial.
pub fn binomial_coordinates(p: &MultiPoly) -> Result<BTreeMap<Vec<u32>, Scalar>> {
    let vars = p.vars().clone();
    let mut rest = p.change_ring(Q)?;
    let mut out = BTreeMap::new();
    while let Some((m, c)) = rest.terms().max_by(|a, b| a.0 .0.cmp(&b.0 .0)) {
        let exps = m.0.clone();
        let mut lead = c.clone();
        let mut basis = MultiPoly::one(Q, vars.clone());
        for (i, &e) in exps.iter().enumerate() {
            lead *= big(&(1..=e).map(BigInt::from).product::<BigInt>());
            basis = basis.mul(&binomial_poly(&vars, i, e));
        }
        rest = rest.sub(&basis.scale(&lead));
        out.insert(exps, lead);
    }
    Ok(out)
}

fn integral(x: Scalar, what: impl FnOnce() -> String) -> Result<Scalar> {
    if x.is_integer() {
        Ok(x)
    } else {
        Err(Error::Integrality {
            what: what(),
            detail: format!("coefficient {x}"),
        })
    }
}

/// Divided powers `γ_0..γ_N` with `γ_i γ_j = C(i+j, i) γ_{i+j}`, zero past
/// `γ_N`.
#[derive(Clone, Debug, Serialize)]
pub struct DividedPowerAlgebra {
    order: u32,
    #[serde(serialize_with = "super::rows_str")]
    coefficients: Vec<Vec<Scalar>>,
}

impl DividedPowerAlgebra {
    pub fn new(order: u32) -> Self {
        let n = order as usize;
        let coefficients = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| if i + j <= n { big(&binomial(BigInt::from(i + j), BigInt::from(i))) } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        DividedPowerAlgebra { order, coefficients }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The scalar `c` in `γ_i γ_j = c γ_{i+j}`.
    pub fn coefficient(&self, i: usize, j: usize) -> &Scalar {
        &self.coefficients[i][j]
    }

    pub fn product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.order as usize + 1];
        if let Some(slot) = v.get_mut(i + j) {
            *slot = self.coefficients[i][j].clone();
        }
        v
    }
}

/// The degree filtration through the Rees construction, and its associated
/// graded against divided powers.
#[derive(Clone, Debug, Serialize)]
pub struct GradedComparison {
    /// `(weight, rank)` of the fiber at `t = 0`.
    pub fiber_at_zero: Vec<(i64, usize)>,
    pub fiber_at_one: usize,
    pub multiplicativity_failures: Vec<(i64, i64)>,
    /// `[i][j]`: coefficient of `γ_{i+j}` in the product of the classes of
    /// `c_i` and `c_j`.
    #[serde(serialize_with = "super::rows_str")]
    pub gr_products: Vec<Vec<Scalar>>,
    pub checks: Vec<Check>,
}

/// Integer-valued polynomials modulo the ideal spanned by `c_n, n > N`,
/// `c_n = C(X, n)`, with the Vandermonde coproduct and the degree filtration
/// (`c_n` has label `-n`).
#[derive(Clone, Debug, Serialize)]
pub struct IntValuedPolyAlgebra {
    order: u32,
    #[serde(flatten)]
    h: TruncatedHopf,
    labels: Vec<i64>,
    graded: GradedComparison,
}

impl IntValuedPolyAlgebra {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.h.rank()
    }

    /// `c_i c_j` in the `c` basis.
    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        self.h.product(i, j).expect("every product is recorded")
    }

    /// `Δc_n` indexed by `a * (N + 1) + b`.
    pub fn coproduct(&self, n: usize) -> &[Scalar] {
        &self.h.comul[n]
    }

    pub fn antipode(&self, n: usize) -> &[Scalar] {
        &self.h.antipode[n]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn graded(&self) -> &GradedComparison {
        &self.graded
    }

    pub fn axiom_checks(&self) -> Vec<Check> {
        self.h.axiom_checks()
    }

    /// `c_0..c_{r-1}` reduced into `ring`, when closed.
    pub fn restrict(&self, ring: BaseRing, r: usize) -> Result<crate::circlehopf::GradedHopfAlgebra> {
        self.h.restrict(&format!("R_{r}"), ring, r, &vec![0; r])
    }
}

pub fn intvalued_structure(order: u32) -> Result<IntValuedPolyAlgebra> {
    let budget = env_budget(12);
    if order as usize > budget {
        return Err(Error::Budget {
            what: "integer-valued polynomials".into(),
            dimension: order as usize,
            budget,
        });
    }
    let n = order as usize;
    let r = n + 1;
    let vx: Arc<[String]> = vec!["X".to_string()].into();
    let vxy: Arc<[String]> = vec!["X".to_string(), "Y".to_string()].into();
    let c: Vec<MultiPoly> = (0..=order).map(|k| binomial_poly(&vx, 0, k)).collect();

    let mut mul = vec![vec![None; r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut v = vec![Scalar::zero(); r];
            for (e, x) in binomial_coordinates(&c[i].mul(&c[j]))? {
                let x = integral(x, || format!("c_{i} c_{j}"))?;
                if let Some(slot) = v.get_mut(e[0] as usize) {
                    *slot = x;
                }
            }
            mul[i][j] = Some(v);
        }
    }
    let x_plus_y = MultiPoly::var(Q, vxy.clone(), 0).add(&MultiPoly::var(Q, vxy.clone(), 1));
    let minus_x = MultiPoly::var(Q, vx.clone(), 0).neg();
    let mut comul = vec![vec![Scalar::zero(); r * r]; r];
    let mut antipode = vec![vec![Scalar::zero(); r]; r];
    for k in 0..r {
        let sum = c[k].embed(vxy.clone(), &[0]).substitute(0, &x_plus_y);
        for (e, x) in binomial_coordinates(&sum)? {
            comul[k][e[0] as usize * r + e[1] as usize] = integral(x, || format!("Δc_{k}"))?;
        }
        for (e, x) in binomial_coordinates(&c[k].substitute(0, &minus_x))? {
            antipode[k][e[0] as usize] = integral(x, || format!("S c_{k}"))?;
        }
    }
    let h = TruncatedHopf {
        ring: BaseRing::Integers,
        symbol: "c",
        mul,
        comul,
        antipode,
        all_products: true,
    };
    let labels: Vec<i64> = (0..r as i64).map(|k| -k).collect();
    let graded = degree_filtration(&h, &labels)?;
    Ok(IntValuedPolyAlgebra { order, h, labels, graded })
}

fn degree_filtration(h: &TruncatedHopf, labels: &[i64]) -> Result<GradedComparison> {
    let z = BaseRing::Integers;
    let r = h.rank();
    let n = r - 1;
    let c = ChainComplex::concentrated(z, 0, r);
    let f = FilteredComplex::by_labels(&c, &BTreeMap::from([(0, labels.to_vec())]))?;
    let rees = rees_of(&f)?;
    let gr = rees.fiber_at_zero()?;
    let fiber_at_zero: Vec<(i64, usize)> =
        gr.pieces.iter().map(|(&w, p)| (w, p.rank(0))).filter(|&(_, k)| k > 0).collect();
    let fiber_at_one = rees.fiber_at_one().rank(0);
    let product = (0..r).map(|i| (0..r).map(|j| h.product(i, j).unwrap().to_vec()).collect()).collect();
    let multiplicativity_failures = FilteredAlgebraData::new(f, product)?.multiplicativity_failures()?;
    let gr_products: Vec<Vec<Scalar>> = (0..r)
        .map(|i| (0..r).map(|j| if i + j <= n { h.product(i, j).unwrap()[i + j].clone() } else { Scalar::zero() }).collect())
        .collect();
    let gamma = DividedPowerAlgebra::new(n as u32);
    let bad = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).find(|&(i, j)| gr_products[i][j] != *gamma.coefficient(i, j));
    let one_per_weight = fiber_at_zero == labels.iter().rev().map(|&w| (w, 1)).collect::<Vec<_>>();
    let checks = vec![
        Check::from_bool("c_0 = 1", h.product(0, 0).unwrap() == h.basis(0), || "c_0 c_0 != c_0".into()),
        Check::from_bool("degree filtration is multiplicative", multiplicativity_failures.is_empty(), || {
            format!("F^i F^j not in F^(i+j) for {multiplicativity_failures:?}")
        }),
        Check::from_bool("Rees fiber at 1 has full rank", fiber_at_one == r, || format!("rank {fiber_at_one}")),
        Check::from_bool("Rees fiber at 0 has rank 1 in each weight -n", one_per_weight, || {
            format!("{fiber_at_zero:?}")
        }),
        Check::from_bool("gr is divided powers", bad.is_none(), || {
            let (i, j) = bad.unwrap();
            format!("gr(c_{i}) gr(c_{j}) = {} γ_{} but C({},{i}) = {}", gr_products[i][j], i + j, i + j, gamma.coefficient(i, j))
        }),
    ];
    Ok(GradedComparison {
        fiber_at_zero,
        fiber_at_one,
        multiplicativity_failures,
        gr_products,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_pass;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_products_and_coproducts() {
        let r = intvalued_structure(4).unwrap();
        // X^2 = X + 2 C(X, 2)
        assert_eq!(r.product(1, 1), &v(&[0, 1, 2, 0, 0])[..]);
        // C(X,2) C(X,2) = C(X,2) + 3·2 C(X,3)... = c_2 + 6c_3 + 6c_4
        assert_eq!(r.product(2, 2), &v(&[0, 0, 1, 6, 6])[..]);
        // Δc_2 = c_2 ⊗ 1 + c_1 ⊗ c_1 + 1 ⊗ c_2
        let mut d2 = vec![int(0); 25];
        for (a, b) in [(2, 0), (1, 1), (0, 2)] {
            d2[a * 5 + b] = int(1);
        }
        assert_eq!(r.coproduct(2), &d2[..]);
        // C(-X, 2) = C(X+1, 2) = c_2 + c_1
        assert_eq!(r.antipode(2), &v(&[0, 1, 1, 0, 0])[..]);
        assert!(all_pass(&r.axiom_checks()));
        assert!(all_pass(&r.graded().checks));
    }

    #[test]
    fn products_match_finite_differences() {
        // coefficient of c_k in f is Σ_l (-1)^{k-l} C(k,l) f(l)
        let n = 7usize;
        let r = intvalued_structure(n as u32).unwrap();
        let b = |a: usize, k: usize| -> i64 { binomial(a as i64, k as i64) };
        for i in 0..=n {
            for j in 0..=n {
                let expect: Vec<Scalar> = (0..=n)
                    .map(|k| {
                        let s: i64 = (0..=k).map(|l| (-1i64).pow((k - l) as u32) * b(k, l) * b(l, i) * b(l, j)).sum();
                        int(s)
                    })
                    .collect();
                assert_eq!(r.product(i, j), &expect[..], "c_{i} c_{j}");
            }
        }
    }

    #[test]
    fn non_integral_coordinates_are_detected() {
        let vx: Arc<[String]> = vec!["X".to_string()].into();
        // X/2 = (1/2) c_1
        let p = MultiPoly::var(Q, vx, 0).scale(&Scalar::new(1.into(), 2.into()));
        let coords = binomial_coordinates(&p).unwrap();
        assert!(integral(coords[&vec![1]].clone(), || "X/2".into()).is_err());
    }

    #[test]
    fn divided_powers_table() {
        let g = DividedPowerAlgebra::new(4);
        assert_eq!(g.coefficient(1, 3), &int(4));
        assert_eq!(g.coefficient(2, 2), &int(6));
        assert_eq!(g.coefficient(3, 2), &int(0));
        assert_eq!(g.product(1, 1), v(&[0, 0, 2, 0, 0]));
    }

    #[test]
    fn gr_up_to_twelve() {
        let r = intvalued_structure(12).unwrap();
        assert!(all_pass(&r.graded().checks), "{:?}", r.graded().checks);
        assert_eq!(r.graded().fiber_at_zero.len(), 13);
    }
}
