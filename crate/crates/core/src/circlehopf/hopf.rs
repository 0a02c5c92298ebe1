use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, BaseRing, ExactMatrix, MultiPoly, Scalar};
use crate::report::Check;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64, weight: i64) -> Self {
        BasisElement {
            name: name.into(),
            degree,
            weight,
        }
    }
}

/// Raw structure constants. `mul[i * n + j]` is `e_i e_j`, `comul[k]` is
/// `Δ e_k` as an `n * n` vector indexed by `i * n + j`, `antipode[k]` is
/// `S e_k`.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub basis: Vec<BasisElement>,
    pub unit: Vec<Scalar>,
    pub mul: Vec<Vec<Scalar>>,
    pub comul: Vec<Vec<Scalar>>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<Vec<Scalar>>,
}

/// Finite-rank bigraded Hopf algebra given by structure constants on a
/// basis. Products of tensors carry the Koszul sign in homological degree.
#[derive(Clone, Debug)]
pub struct GradedHopfAlgebra {
    name: String,
    ring: BaseRing,
    d: HopfData,
}

fn odd(a: i64, b: i64) -> bool {
    (a * b).rem_euclid(2) == 1
}

fn signed(c: &Scalar, negate: bool) -> Scalar {
    if negate {
        -c
    } else {
        c.clone()
    }
}

impl GradedHopfAlgebra {
    /// Normalizes every constant into `ring` and checks all axioms.
    pub fn new(name: impl Into<String>, ring: BaseRing, data: HopfData) -> Result<Self> {
        let n = data.basis.len();
        let shape_ok = data.unit.len() == n
            && data.counit.len() == n
            && data.mul.len() == n * n
            && data.mul.iter().all(|v| v.len() == n)
            && data.comul.len() == n
            && data.comul.iter().all(|v| v.len() == n * n)
            && data.antipode.len() == n
            && data.antipode.iter().all(|v| v.len() == n);
        if !shape_ok {
            return Err(Error::Dimension("Hopf structure constants have the wrong shape".into()));
        }
        let norm = |v: Vec<Scalar>| -> Result<Vec<Scalar>> { v.into_iter().map(|x| ring.normalize(x)).collect() };
        let normv = |v: Vec<Vec<Scalar>>| -> Result<Vec<Vec<Scalar>>> { v.into_iter().map(norm).collect() };
        let d = HopfData {
            basis: data.basis,
            unit: norm(data.unit)?,
            mul: normv(data.mul)?,
            comul: normv(data.comul)?,
            counit: norm(data.counit)?,
            antipode: normv(data.antipode)?,
        };
        let h = GradedHopfAlgebra {
            name: name.into(),
            ring,
            d,
        };
        if let Some(c) = h.axiom_checks().into_iter().find(|c| !c.passed()) {
            return Err(Error::HopfAxiom {
                axiom: c.name,
                detail: c.diagnostics.join("; "),
            });
        }
        Ok(h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.d.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.d.basis
    }

    pub fn data(&self) -> &HopfData {
        &self.d
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.d.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rank()];
        v[i] = Scalar::one();
        v
    }

    fn deg(&self, i: usize) -> i64 {
        self.d.basis[i].degree
    }

    fn bideg(&self, i: usize) -> (i64, i64) {
        (self.d.basis[i].degree, self.d.basis[i].weight)
    }

    pub fn product(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        let mut out = vec![Scalar::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, c) in self.d.mul[i * n + j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        self.reduce(out)
    }

    pub fn coproduct(&self, a: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        let mut out = vec![Scalar::zero(); n * n];
        for (k, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (ij, c) in self.d.comul[k].iter().enumerate() {
                if !c.is_zero() {
                    out[ij] += x * c;
                }
            }
        }
        self.reduce(out)
    }

    pub fn counit_of(&self, a: &[Scalar]) -> Scalar {
        let s = a.iter().zip(&self.d.counit).map(|(x, c)| x * c).sum();
        self.ring.reduce(s)
    }

    pub fn antipode_of(&self, a: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        let mut out = vec![Scalar::zero(); n];
        for (k, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (i, c) in self.d.antipode[k].iter().enumerate() {
                out[i] += x * c;
            }
        }
        self.reduce(out)
    }

    /// Product in `H ⊗ H`: `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`.
    pub fn tensor_product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        let mut out = vec![Scalar::zero(); n * n];
        for (ab, s) in x.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            let (a, b) = (ab / n, ab % n);
            for (cd, t) in y.iter().enumerate().filter(|(_, t)| !t.is_zero()) {
                let (c, d) = (cd / n, cd % n);
                let coef = signed(&(s * t), odd(self.deg(b), self.deg(c)));
                let ac = &self.d.mul[a * n + c];
                let bd = &self.d.mul[b * n + d];
                for (k, u) in ac.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
                    for (l, v) in bd.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        out[k * n + l] += &coef * u * v;
                    }
                }
            }
        }
        self.reduce(out)
    }

    fn reduce(&self, v: Vec<Scalar>) -> Vec<Scalar> {
        v.into_iter().map(|x| self.ring.reduce(x)).collect()
    }

    pub fn is_primitive(&self, a: &[Scalar]) -> bool {
        let n = self.rank();
        let mut want = vec![Scalar::zero(); n * n];
        for (i, x) in a.iter().enumerate() {
            for (u, c) in self.d.unit.iter().enumerate() {
                want[i * n + u] += x * c;
                want[u * n + i] += x * c;
            }
        }
        self.coproduct(a) == self.reduce(want)
    }

    pub fn is_grouplike(&self, a: &[Scalar]) -> bool {
        let n = self.rank();
        let mut want = vec![Scalar::zero(); n * n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in a.iter().enumerate() {
                want[i * n + j] = x * y;
            }
        }
        !a.iter().all(Zero::is_zero) && self.coproduct(a) == self.reduce(want)
    }

    /// One check per axiom family, each evaluated on all basis elements.
    pub fn axiom_checks(&self) -> Vec<Check> {
        let n = self.rank();
        let e = |i: usize| self.basis_vector(i);
        let first = |name: &str, bad: Option<String>| match bad {
            None => Check::pass(name),
            Some(why) => Check::fail(name, why),
        };
        let mut out = Vec::new();

        let mut bad = None;
        'g: for i in 0..n {
            let (di, wi) = self.bideg(i);
            if !self.d.unit[i].is_zero() && (di, wi) != (0, 0) {
                bad = Some(format!("unit has a component on {}", self.d.basis[i].name));
                break;
            }
            if !self.d.counit[i].is_zero() && (di, wi) != (0, 0) {
                bad = Some(format!("counit is nonzero on {}", self.d.basis[i].name));
                break;
            }
            for j in 0..n {
                let (dj, wj) = self.bideg(j);
                for (k, c) in self.d.mul[i * n + j].iter().enumerate() {
                    if !c.is_zero() && self.bideg(k) != (di + dj, wi + wj) {
                        bad = Some(format!("e_{i} e_{j} has a component on e_{k}"));
                        break 'g;
                    }
                }
                if !self.d.antipode[i][j].is_zero() && self.bideg(j) != (di, wi) {
                    bad = Some(format!("S e_{i} has a component on e_{j}"));
                    break 'g;
                }
            }
            for (ab, c) in self.d.comul[i].iter().enumerate() {
                let (a, b) = (ab / n, ab % n);
                let (da, wa) = self.bideg(a);
                let (db, wb) = self.bideg(b);
                if !c.is_zero() && (da + db, wa + wb) != (di, wi) {
                    bad = Some(format!("Δ e_{i} has a component on e_{a} ⊗ e_{b}"));
                    break 'g;
                }
            }
        }
        out.push(first("homogeneous structure maps", bad));

        let bad = (0..n).find_map(|i| {
            let ok = self.product(&self.d.unit, &e(i)) == e(i) && self.product(&e(i), &self.d.unit) == e(i);
            (!ok).then(|| format!("unit law fails on {}", self.d.basis[i].name))
        });
        out.push(first("unit", bad));

        let mut bad = None;
        'a: for i in 0..n {
            for j in 0..n {
                let ij = &self.d.mul[i * n + j];
                for k in 0..n {
                    let lhs = self.product(ij, &e(k));
                    let rhs = self.product(&e(i), &self.d.mul[j * n + k]);
                    if lhs != rhs {
                        bad = Some(format!("(e_{i} e_{j}) e_{k} != e_{i} (e_{j} e_{k})"));
                        break 'a;
                    }
                }
            }
        }
        out.push(first("associativity", bad));

        let bad = (0..n).find_map(|k| {
            let c = &self.d.comul[k];
            let mut left = vec![Scalar::zero(); n * n * n];
            let mut right = vec![Scalar::zero(); n * n * n];
            for (ab, x) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (ab / n, ab % n);
                for (uv, y) in self.d.comul[a].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    left[uv * n + b] += x * y;
                }
                for (uv, y) in self.d.comul[b].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    right[a * n * n + uv] += x * y;
                }
            }
            (self.reduce(left) != self.reduce(right)).then(|| format!("coassociativity fails on e_{k}"))
        });
        out.push(first("coassociativity", bad));

        let bad = (0..n).find_map(|k| {
            let c = &self.d.comul[k];
            let mut left = vec![Scalar::zero(); n];
            let mut right = vec![Scalar::zero(); n];
            for (ab, x) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (ab / n, ab % n);
                left[b] += x * &self.d.counit[a];
                right[a] += x * &self.d.counit[b];
            }
            (self.reduce(left) != e(k) || self.reduce(right) != e(k)).then(|| format!("counit law fails on e_{k}"))
        });
        out.push(first("counit", bad));

        let mut bad = None;
        let unit_unit = self.reduce(
            (0..n * n)
                .map(|ab| &self.d.unit[ab / n] * &self.d.unit[ab % n])
                .collect(),
        );
        if self.coproduct(&self.d.unit) != unit_unit || !self.counit_of(&self.d.unit).is_one() {
            bad = Some("Δ(1) != 1 ⊗ 1 or ε(1) != 1".to_string());
        }
        'c: for i in 0..n {
            for j in 0..n {
                if bad.is_some() {
                    break 'c;
                }
                let ij = &self.d.mul[i * n + j];
                let lhs = self.coproduct(ij);
                let rhs = self.tensor_product(&self.d.comul[i], &self.d.comul[j]);
                if lhs != rhs {
                    bad = Some(format!("Δ(e_{i} e_{j}) != Δ(e_{i}) Δ(e_{j})"));
                } else if self.counit_of(ij) != self.ring.reduce(&self.d.counit[i] * &self.d.counit[j]) {
                    bad = Some(format!("ε(e_{i} e_{j}) != ε(e_{i}) ε(e_{j})"));
                }
            }
        }
        out.push(first("bialgebra compatibility", bad));

        let bad = (0..n).find_map(|k| {
            let mut left = vec![Scalar::zero(); n];
            let mut right = vec![Scalar::zero(); n];
            for (ab, x) in self.d.comul[k].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (ab / n, ab % n);
                let sa = &self.d.antipode[a];
                let sb = &self.d.antipode[b];
                for (i, y) in self.product(sa, &e(b)).iter().enumerate() {
                    left[i] += x * y;
                }
                for (i, y) in self.product(&e(a), sb).iter().enumerate() {
                    right[i] += x * y;
                }
            }
            let want: Vec<Scalar> = self.d.unit.iter().map(|u| self.ring.reduce(u * &self.d.counit[k])).collect();
            (self.reduce(left) != want || self.reduce(right) != want).then(|| format!("antipode law fails on e_{k}"))
        });
        out.push(first("antipode", bad));
        out
    }

    /// Linear dual with `⟨f ⊗ g, a ⊗ b⟩ = (-1)^{|g||a|} f(a) g(b)`; basis
    /// `e_i^*` in bidegree `(-deg, -weight)`.
    pub fn dual(&self) -> Result<GradedHopfAlgebra> {
        let n = self.rank();
        let basis = self
            .d
            .basis
            .iter()
            .map(|b| BasisElement::new(format!("{}*", b.name), -b.degree, -b.weight))
            .collect();
        let sign = |i: usize, j: usize| odd(self.deg(i), self.deg(j));
        let mut mul = vec![vec![Scalar::zero(); n]; n * n];
        let mut comul = vec![vec![Scalar::zero(); n * n]; n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    mul[i * n + j][k] = signed(&self.d.comul[k][i * n + j], sign(i, j));
                    comul[k][i * n + j] = signed(&self.d.mul[i * n + j][k], sign(i, j));
                }
            }
        }
        let antipode = (0..n).map(|k| (0..n).map(|i| self.d.antipode[i][k].clone()).collect()).collect();
        let data = HopfData {
            basis,
            unit: self.d.counit.clone(),
            mul,
            comul,
            counit: self.d.unit.clone(),
            antipode,
        };
        GradedHopfAlgebra::new(format!("{}^dual", self.name), self.ring, data)
    }

    /// True when the two algebras have identical structure constants in the
    /// given bases.
    pub fn same_constants(&self, other: &GradedHopfAlgebra) -> bool {
        self.ring == other.ring
            && self.d.unit == other.d.unit
            && self.d.mul == other.d.mul
            && self.d.comul == other.d.comul
            && self.d.counit == other.d.counit
            && self.d.antipode == other.d.antipode
    }

    /// Checks that the matrix (columns = images of basis vectors) is a
    /// morphism of Hopf algebras `self -> target`.
    pub fn morphism_checks(&self, phi: &ExactMatrix, target: &GradedHopfAlgebra) -> Vec<Check> {
        let n = self.rank();
        let m = target.rank();
        let name = |s: &str| format!("{s} ({} -> {})", self.name, target.name);
        if phi.rows() != m || phi.cols() != n {
            return vec![Check::fail(name("shape"), format!("{}x{} matrix", phi.rows(), phi.cols()))];
        }
        let img = |v: &[Scalar]| target.reduce(phi.apply(v));
        let img2 = |v: &[Scalar]| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); m * m];
            for (ab, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (ab / n, ab % n);
                for (u, y) in phi.column(a).iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    for (w, z) in phi.column(b).iter().enumerate().filter(|(_, z)| !z.is_zero()) {
                        out[u * m + w] += x * y * z;
                    }
                }
            }
            target.reduce(out)
        };
        let mut out = Vec::new();
        let unit_ok = img(&self.d.unit) == target.d.unit;
        let mul_bad = (0..n * n).find(|&ij| {
            let (i, j) = (ij / n, ij % n);
            img(&self.d.mul[ij]) != target.product(&phi.column(i), &phi.column(j))
        });
        out.push(Check::from_bool(name("algebra map"), unit_ok && mul_bad.is_none(), || match mul_bad {
            Some(ij) => format!("φ(e_{} e_{}) != φ(e_{}) φ(e_{})", ij / n, ij % n, ij / n, ij % n),
            None => "φ(1) != 1".into(),
        }));
        let co_bad = (0..n).find(|&k| {
            img2(&self.d.comul[k]) != target.coproduct(&phi.column(k))
                || target.counit_of(&phi.column(k)) != self.d.counit[k]
        });
        out.push(Check::from_bool(name("coalgebra map"), co_bad.is_none(), || {
            format!("Δφ(e_{k}) != (φ⊗φ)Δ(e_{k}) or counit mismatch", k = co_bad.unwrap())
        }));
        let s_bad = (0..n).find(|&k| img(&self.d.antipode[k]) != target.antipode_of(&phi.column(k)));
        out.push(Check::from_bool(name("antipode"), s_bad.is_none(), || {
            format!("φ S(e_{}) != S φ(e_{})", s_bad.unwrap(), s_bad.unwrap())
        }));
        let inv = phi.is_invertible().unwrap_or(false);
        out.push(Check::from_bool(name("bijective"), inv, || "matrix is not invertible".into()));
        out
    }
}

impl fmt::Display for GradedHopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} (rank {})", self.name, self.ring, self.rank())
    }
}

/// Exterior Hopf algebra `k[ε]/ε²` with `ε` primitive in the given
/// bidegree.
pub fn exterior(ring: BaseRing, degree: i64, weight: i64) -> Result<GradedHopfAlgebra> {
    let z = Scalar::zero;
    let o = Scalar::one;
    let basis = vec![BasisElement::new("1", 0, 0), BasisElement::new("eps", degree, weight)];
    let data = HopfData {
        basis,
        unit: vec![o(), z()],
        mul: vec![vec![o(), z()], vec![z(), o()], vec![z(), o()], vec![z(), z()]],
        comul: vec![vec![o(), z(), z(), z()], vec![z(), o(), o(), z()]],
        counit: vec![o(), z()],
        antipode: vec![vec![o(), z()], vec![z(), int(-1)]],
    };
    GradedHopfAlgebra::new("Lambda", ring, data)
}

/// Group algebra `k[Z/N] = O(μ_N)`: basis `U^a`, `U` grouplike.
pub fn group_algebra(ring: BaseRing, order: usize) -> Result<GradedHopfAlgebra> {
    let n = order;
    let basis = (0..n).map(|a| BasisElement::new(format!("U^{a}"), 0, 0)).collect();
    let mut mul = vec![vec![Scalar::zero(); n]; n * n];
    let mut comul = vec![vec![Scalar::zero(); n * n]; n];
    let mut antipode = vec![vec![Scalar::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b][(a + b) % n] = Scalar::one();
        }
        comul[a][a * n + a] = Scalar::one();
        antipode[a][(n - a) % n] = Scalar::one();
    }
    let mut unit = vec![Scalar::zero(); n];
    unit[0] = Scalar::one();
    let data = HopfData {
        basis,
        unit,
        mul,
        comul,
        counit: vec![Scalar::one(); n],
        antipode,
    };
    GradedHopfAlgebra::new(format!("O(mu_{n})"), ring, data)
}

/// Functions on the constant group `Z/N`: basis of indicator functions.
pub fn function_algebra(ring: BaseRing, order: usize) -> Result<GradedHopfAlgebra> {
    let n = order;
    let basis = (0..n).map(|a| BasisElement::new(format!("1_{a}"), 0, 0)).collect();
    let mut mul = vec![vec![Scalar::zero(); n]; n * n];
    let mut comul = vec![vec![Scalar::zero(); n * n]; n];
    let mut antipode = vec![vec![Scalar::zero(); n]; n];
    for a in 0..n {
        mul[a * n + a][a] = Scalar::one();
        for b in 0..n {
            comul[(a + b) % n][a * n + b] = Scalar::one();
        }
        antipode[a][(n - a) % n] = Scalar::one();
    }
    let mut counit = vec![Scalar::zero(); n];
    counit[0] = Scalar::one();
    let data = HopfData {
        basis,
        unit: vec![Scalar::one(); n],
        mul,
        comul,
        counit,
        antipode,
    };
    GradedHopfAlgebra::new(format!("O(Z/{n})"), ring, data)
}

/// Commutative Hopf algebra `k[z_0..z_{g-1}]/(z_i^{b_i})`. `coproducts[i]`
/// is `Δ z_i` in the variables `x_0..x_{g-1}, y_0..y_{g-1}` (for `z ⊗ 1`
/// and `1 ⊗ z`), `antipodes[i]` is `S z_i` in `x_0..x_{g-1}`. Basis:
/// exponent vectors, first variable fastest.
pub struct TruncatedPresentation<'a> {
    pub names: &'a [String],
    pub bounds: &'a [u32],
    pub weights: &'a [i64],
    pub coproducts: &'a [MultiPoly],
    pub antipodes: &'a [MultiPoly],
}

pub(crate) fn exponent_vectors(bounds: &[u32]) -> Vec<Vec<u32>> {
    let total: usize = bounds.iter().map(|&b| b as usize).product();
    (0..total)
        .map(|mut idx| {
            bounds
                .iter()
                .map(|&b| {
                    let e = (idx % b as usize) as u32;
                    idx /= b as usize;
                    e
                })
                .collect()
        })
        .collect()
}

pub(crate) fn exponent_index(bounds: &[u32], e: &[u32]) -> Option<usize> {
    let mut idx = 0;
    let mut stride = 1;
    for (&x, &b) in e.iter().zip(bounds) {
        if x >= b {
            return None;
        }
        idx += x as usize * stride;
        stride *= b as usize;
    }
    Some(idx)
}

fn truncate(p: &MultiPoly, bounds: &[u32]) -> Result<MultiPoly> {
    MultiPoly::from_terms(
        p.ring(),
        p.vars().clone(),
        p.terms()
            .filter(|(m, _)| m.0.iter().enumerate().all(|(v, &e)| e < bounds[v % bounds.len()]))
            .map(|(m, c)| (m.0.clone(), c.clone())),
    )
}

fn monomial_name(names: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, &x)| if x == 1 { names[i].clone() } else { format!("{}^{}", names[i], x) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn truncated_hopf_algebra(name: &str, ring: BaseRing, pres: &TruncatedPresentation) -> Result<GradedHopfAlgebra> {
    let g = pres.bounds.len();
    let exps = exponent_vectors(pres.bounds);
    let n = exps.len();
    let basis: Vec<BasisElement> = exps
        .iter()
        .map(|e| {
            let w = e.iter().zip(pres.weights).map(|(&x, &w)| x as i64 * w).sum();
            BasisElement::new(monomial_name(pres.names, e), 0, w)
        })
        .collect();
    let xy: Arc<[String]> = crate::exactalg::var_names("x", g)
        .into_iter()
        .chain(crate::exactalg::var_names("y", g))
        .collect::<Vec<_>>()
        .into();
    let x: Arc<[String]> = crate::exactalg::var_names("x", g).into();
    let reread = |p: &MultiPoly, vars: &Arc<[String]>| {
        MultiPoly::from_terms(ring, vars.clone(), p.terms().map(|(m, c)| (m.0.clone(), c.clone())))
    };
    let cop: Vec<MultiPoly> = pres.coproducts.iter().map(|p| reread(p, &xy)).collect::<Result<_>>()?;
    let ant: Vec<MultiPoly> = pres.antipodes.iter().map(|p| reread(p, &x)).collect::<Result<_>>()?;

    // images of basis monomials, built up one generator at a time
    let mut delta: Vec<MultiPoly> = Vec::with_capacity(n);
    let mut anti: Vec<MultiPoly> = Vec::with_capacity(n);
    for e in &exps {
        match e.iter().position(|&v| v > 0) {
            None => {
                delta.push(MultiPoly::one(ring, xy.clone()));
                anti.push(MultiPoly::one(ring, x.clone()));
            }
            Some(i) => {
                let mut prev = e.clone();
                prev[i] -= 1;
                let j = exponent_index(pres.bounds, &prev).unwrap();
                delta.push(truncate(&delta[j].mul(&cop[i]), pres.bounds)?);
                anti.push(truncate(&anti[j].mul(&ant[i]), pres.bounds)?);
            }
        }
    }
    let mut mul = vec![vec![Scalar::zero(); n]; n * n];
    for (a, ea) in exps.iter().enumerate() {
        for (b, eb) in exps.iter().enumerate() {
            let s: Vec<u32> = ea.iter().zip(eb).map(|(u, v)| u + v).collect();
            if let Some(k) = exponent_index(pres.bounds, &s) {
                mul[a * n + b][k] = Scalar::one();
            }
        }
    }
    let mut comul = vec![vec![Scalar::zero(); n * n]; n];
    for (k, d) in delta.iter().enumerate() {
        for (m, c) in d.terms() {
            let a = exponent_index(pres.bounds, &m.0[..g]).unwrap();
            let b = exponent_index(pres.bounds, &m.0[g..]).unwrap();
            comul[k][a * n + b] = c.clone();
        }
    }
    let mut antipode = vec![vec![Scalar::zero(); n]; n];
    for (k, s) in anti.iter().enumerate() {
        for (m, c) in s.terms() {
            antipode[k][exponent_index(pres.bounds, &m.0).unwrap()] = c.clone();
        }
    }
    let mut unit = vec![Scalar::zero(); n];
    unit[0] = Scalar::one();
    let data = HopfData {
        basis,
        unit: unit.clone(),
        mul,
        comul,
        counit: unit,
        antipode,
    };
    GradedHopfAlgebra::new(name, ring, data)
}

/// `O(α_N) = k[T]/T^N` with `T` primitive of weight 1. A Hopf algebra only
/// when `N` is a power of the characteristic.
pub fn additive_truncation(ring: BaseRing, order: u32) -> Result<GradedHopfAlgebra> {
    let xy: Arc<[String]> = vec!["x0".to_string(), "y0".to_string()].into();
    let x: Arc<[String]> = vec!["x0".to_string()].into();
    let cop = MultiPoly::var(ring, xy.clone(), 0).add(&MultiPoly::var(ring, xy, 1));
    let ant = MultiPoly::var(ring, x, 0).neg();
    let names = ["T".to_string()];
    let pres = TruncatedPresentation {
        names: &names,
        bounds: &[order],
        weights: &[1],
        coproducts: &[cop],
        antipodes: &[ant],
    };
    truncated_hopf_algebra(&format!("O(alpha_{order})"), ring, &pres)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> BaseRing {
        BaseRing::prime_field(p).unwrap()
    }

    #[test]
    fn exterior_is_self_dual() {
        let l = exterior(BaseRing::Rationals, 1, 1).unwrap();
        let d = l.dual().unwrap();
        assert_eq!(d.basis()[1].degree, -1);
        assert!(d.is_primitive(&d.basis_vector(1)));
        assert!(d.dual().unwrap().same_constants(&l));
    }

    #[test]
    fn additive_truncation_needs_a_prime_power() {
        assert!(additive_truncation(fp(2), 4).is_ok());
        assert!(additive_truncation(fp(3), 9).is_ok());
        let err = additive_truncation(fp(3), 4).unwrap_err();
        assert!(matches!(err, Error::HopfAxiom { .. }), "{err}");
        assert!(additive_truncation(BaseRing::Rationals, 2).is_err());
    }

    #[test]
    fn divided_powers_as_dual() {
        // δ_1 δ_1 = 2 δ_2 over F_3
        let a = additive_truncation(fp(3), 3).unwrap();
        let d = a.dual().unwrap();
        let sq = d.product(&d.basis_vector(1), &d.basis_vector(1));
        assert_eq!(sq, vec![int(0), int(0), int(2)]);
        assert_eq!(d.basis()[2].weight, -2);
    }

    #[test]
    fn mu_dual_is_functions_on_z() {
        for ring in [fp(2), fp(3), BaseRing::Rationals] {
            for n in [2, 3, 4] {
                let d = group_algebra(ring, n).unwrap().dual().unwrap();
                assert!(d.same_constants(&function_algebra(ring, n).unwrap()));
            }
        }
    }

    #[test]
    fn broken_antipode_is_rejected() {
        let mut data = group_algebra(BaseRing::Rationals, 3).unwrap().data().clone();
        data.antipode[1] = vec![int(0), int(1), int(0)];
        let err = GradedHopfAlgebra::new("bad", BaseRing::Rationals, data).unwrap_err();
        assert!(matches!(err, Error::HopfAxiom { ref axiom, .. } if axiom == "antipode"));
    }

    #[test]
    fn grouplikes_and_primitives() {
        let g = group_algebra(fp(2), 4).unwrap();
        assert!(g.is_grouplike(&g.basis_vector(3)));
        assert!(!g.is_primitive(&g.basis_vector(3)));
        let a = additive_truncation(fp(2), 4).unwrap();
        assert!(a.is_primitive(&a.basis_vector(1)));
        // Frobenius: T^2 is primitive in characteristic 2, T^3 is not
        assert!(a.is_primitive(&a.basis_vector(2)));
        assert!(!a.is_primitive(&a.basis_vector(3)));
    }
}
