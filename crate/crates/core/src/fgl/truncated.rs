use num_traits::{One, Zero};
use serde::Serialize;

use crate::circlehopf::{BasisElement, GradedHopfAlgebra, HopfData};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, Scalar};
use crate::report::Check;

fn opt_table<S: serde::Serializer>(t: &[Vec<Option<Vec<Scalar>>>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<Option<Vec<String>>>> = t
        .iter()
        .map(|row| row.iter().map(|v| v.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect())).collect())
        .collect();
    serde::Serialize::serialize(&strs, s)
}

/// Structure constants on `e_0..e_N` of a commutative Hopf algebra with an
/// increasing filtration `deg e_n = n`, known only up to filtration degree
/// `N`. `e_0` is the unit and the counit is dual to it. `comul[n]` is
/// `Δe_n` indexed by `a * (N + 1) + b`.
#[derive(Clone, Debug, Serialize)]
pub(crate) struct TruncatedHopf {
    #[serde(skip)]
    pub ring: BaseRing,
    #[serde(skip)]
    pub symbol: &'static str,
    #[serde(rename = "products", serialize_with = "opt_table")]
    pub mul: Vec<Vec<Option<Vec<Scalar>>>>,
    #[serde(rename = "coproducts", serialize_with = "super::rows_str")]
    pub comul: Vec<Vec<Scalar>>,
    #[serde(serialize_with = "super::rows_str")]
    pub antipode: Vec<Vec<Scalar>>,
    /// Every pair has a recorded product, taken modulo the ideal spanned
    /// by `e_n, n > N`.
    pub all_products: bool,
}

impl TruncatedHopf {
    pub fn rank(&self) -> usize {
        self.mul.len()
    }

    fn top(&self) -> usize {
        self.rank() - 1
    }

    pub fn product(&self, i: usize, j: usize) -> Option<&[Scalar]> {
        self.mul.get(i)?.get(j)?.as_deref()
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rank()];
        v[i] = Scalar::one();
        v
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Option<Vec<Scalar>> {
        let ring = self.ring;
        let mut out = vec![Scalar::zero(); self.rank()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = ring.mul(a, b);
                for (o, c) in out.iter_mut().zip(self.product(i, j)?) {
                    *o = ring.add(o, &ring.mul(&ab, c));
                }
            }
        }
        Some(out)
    }

    fn tensor_coproduct(&self, x: &[Scalar]) -> Vec<Scalar> {
        let r = self.rank();
        let mut out = vec![Scalar::zero(); r * r];
        for (n, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, d) in out.iter_mut().zip(&self.comul[n]) {
                *o = self.ring.add(o, &self.ring.mul(c, d));
            }
        }
        out
    }

    fn tensor_multiply(&self, x: &[Scalar], y: &[Scalar]) -> Option<Vec<Scalar>> {
        let r = self.rank();
        let mut out = vec![Scalar::zero(); r * r];
        for (ab, u) in x.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
            for (cd, v) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let left = self.product(ab / r, cd / r)?;
                let right = self.product(ab % r, cd % r)?;
                for (p, l) in left.iter().enumerate().filter(|(_, l)| !l.is_zero()) {
                    for (q, w) in right.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                        let t = self.ring.mul(&self.ring.mul(u, v), &self.ring.mul(l, w));
                        out[p * r + q] = self.ring.add(&out[p * r + q], &t);
                    }
                }
            }
        }
        Some(out)
    }

    /// `(Δ ⊗ 1)Δ` or `(1 ⊗ Δ)Δ` of `e_n`, as a dense `r^3` vector.
    fn double_coproduct(&self, n: usize, left: bool) -> Vec<Scalar> {
        let r = self.rank();
        let mut out = vec![Scalar::zero(); r * r * r];
        for (ab, c) in self.comul[n].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (a, b) = (ab / r, ab % r);
            let split = if left { a } else { b };
            for (xy, d) in self.comul[split].iter().enumerate().filter(|(_, d)| !d.is_zero()) {
                let idx = if left { xy * r + b } else { a * r * r + xy };
                out[idx] = self.ring.add(&out[idx], &self.ring.mul(c, d));
            }
        }
        out
    }

    /// Hopf axioms on every instance the truncation determines: products of
    /// total filtration degree at most `N`, or all products when every pair
    /// is recorded (bialgebra compatibility stays within degree `N`).
    pub fn axiom_checks(&self) -> Vec<Check> {
        let r = self.rank();
        let n = self.top();
        let e = self.symbol;
        let mut unit_bad = None;
        let mut comm_bad = None;
        for i in 0..r {
            if self.product(0, i).is_some_and(|p| p != self.basis(i)) {
                unit_bad.get_or_insert(i);
            }
            for j in 0..r {
                if self.product(i, j) != self.product(j, i) {
                    comm_bad.get_or_insert((i, j));
                }
            }
        }
        let mut assoc_bad = None;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if !(self.all_products || i + j + k <= n) {
                        continue;
                    }
                    let l = self.product(i, j).and_then(|p| self.multiply(p, &self.basis(k)));
                    let w = self.product(j, k).and_then(|p| self.multiply(&self.basis(i), p));
                    if l.is_none() || l != w {
                        assoc_bad.get_or_insert((i, j, k));
                    }
                }
            }
        }
        let mut coassoc_bad = None;
        let mut counit_bad = None;
        for k in 0..r {
            if self.double_coproduct(k, true) != self.double_coproduct(k, false) {
                coassoc_bad.get_or_insert(k);
            }
            // (ε ⊗ 1)Δ and (1 ⊗ ε)Δ
            let first: Vec<Scalar> = (0..r).map(|b| self.comul[k][b].clone()).collect();
            let second: Vec<Scalar> = (0..r).map(|a| self.comul[k][a * r].clone()).collect();
            if first != self.basis(k) || second != self.basis(k) {
                counit_bad.get_or_insert(k);
            }
        }
        let mut bialg_bad = None;
        for i in 0..r {
            for j in 0..r - i {
                let l = self.product(i, j).map(|p| self.tensor_coproduct(p));
                let w = self.tensor_multiply(&self.tensor_coproduct(&self.basis(i)), &self.tensor_coproduct(&self.basis(j)));
                if l.is_none() || l != w {
                    bialg_bad.get_or_insert((i, j));
                }
            }
        }
        let mut s_bad = None;
        for k in 0..r {
            let mut left = Some(vec![Scalar::zero(); r]);
            let mut right = Some(vec![Scalar::zero(); r]);
            for (ab, c) in self.comul[k].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (a, b) = (ab / r, ab % r);
                let add = |acc: Option<Vec<Scalar>>, t: Option<Vec<Scalar>>| -> Option<Vec<Scalar>> {
                    let (mut acc, t) = (acc?, t?);
                    for (o, x) in acc.iter_mut().zip(t) {
                        *o = self.ring.add(o, &self.ring.mul(c, &x));
                    }
                    Some(acc)
                };
                left = add(left, self.multiply(&self.antipode[a], &self.basis(b)));
                right = add(right, self.multiply(&self.basis(a), &self.antipode[b]));
            }
            let eps = Some(if k == 0 { self.basis(0) } else { vec![Scalar::zero(); r] });
            if left != eps || right != eps {
                s_bad.get_or_insert(k);
            }
        }
        let scope = if self.all_products { "all products" } else { "filtration degree <= N" };
        vec![
            Check::from_bool("unit", unit_bad.is_none(), || format!("{e}_0 {e}_{i} != {e}_{i}", i = unit_bad.unwrap())),
            Check::from_bool("commutativity", comm_bad.is_none(), || {
                let (i, j) = comm_bad.unwrap();
                format!("{e}_{i} {e}_{j} != {e}_{j} {e}_{i}")
            }),
            Check::from_bool("associativity", assoc_bad.is_none(), || format!("fails at {:?}", assoc_bad.unwrap()))
                .with_note(scope),
            Check::from_bool("coassociativity", coassoc_bad.is_none(), || format!("fails on {e}_{}", coassoc_bad.unwrap())),
            Check::from_bool("counit", counit_bad.is_none(), || format!("fails on {e}_{}", counit_bad.unwrap())),
            Check::from_bool("bialgebra compatibility", bialg_bad.is_none(), || {
                let (i, j) = bialg_bad.unwrap();
                format!("Δ({e}_{i} {e}_{j}) != Δ{e}_{i} Δ{e}_{j}")
            })
            .with_note("filtration degree <= N"),
            Check::from_bool("antipode", s_bad.is_none(), || format!("m(S ⊗ 1)Δ {e}_{} != ε", s_bad.unwrap())),
        ]
    }

    /// `e_0..e_{r-1}` as a Hopf algebra over `ring`, when that span is closed
    /// under products and coproducts once the constants are reduced.
    pub fn restrict(&self, name: &str, ring: BaseRing, r: usize, weights: &[i64]) -> Result<GradedHopfAlgebra> {
        if r == 0 || r > self.rank() {
            return Err(Error::OutOfRange(format!("rank {r} outside 1..={}", self.rank())));
        }
        let e = self.symbol;
        let red = |x: &Scalar| ring.normalize(x.clone());
        let not_closed = |detail: String| Error::HopfAxiom {
            axiom: "closure".into(),
            detail,
        };
        let basis = (0..r).map(|k| BasisElement::new(format!("{e}{k}"), 0, weights[k])).collect();
        let mut mul = vec![vec![Scalar::zero(); r]; r * r];
        for i in 0..r {
            for j in 0..r {
                let p = self
                    .product(i, j)
                    .ok_or_else(|| Error::Unsupported(format!("{e}_{i} {e}_{j} is beyond the truncation")))?;
                for (k, c) in p.iter().enumerate() {
                    let c = red(c)?;
                    if k < r {
                        mul[i * r + j][k] = c;
                    } else if !c.is_zero() {
                        return Err(not_closed(format!("{e}_{i} {e}_{j} has {e}_{k} coefficient {c} over {ring}")));
                    }
                }
            }
        }
        let big = self.rank();
        let mut comul = vec![vec![Scalar::zero(); r * r]; r];
        for (k, row) in comul.iter_mut().enumerate() {
            for (ab, c) in self.comul[k].iter().enumerate() {
                let (a, b) = (ab / big, ab % big);
                let c = red(c)?;
                if a < r && b < r {
                    row[a * r + b] = c;
                } else if !c.is_zero() {
                    return Err(not_closed(format!("Δ{e}_{k} involves {e}_{a} ⊗ {e}_{b}")));
                }
            }
        }
        let antipode = (0..r).map(|k| self.antipode[k][..r].iter().map(red).collect()).collect::<Result<_>>()?;
        let mut unit = vec![Scalar::zero(); r];
        unit[0] = Scalar::one();
        let data = HopfData {
            basis,
            counit: unit.clone(),
            unit,
            mul,
            comul,
            antipode,
        };
        GradedHopfAlgebra::new(name, ring, data)
    }
}
