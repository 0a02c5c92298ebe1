use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::Serialize;

use super::parse::{parse_algebra, parse_poly};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, MultiPoly, Scalar};

/// Term-order key: weighted degree, then exponents compared from the last
/// variable backwards, so later generators are larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    wdeg: u64,
    exps: Vec<u32>,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.wdeg
            .cmp(&other.wdeg)
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly = BTreeMap<Key, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

/// Finitely presented, positively graded commutative algebra with a
/// normal-form system for its relations.
#[derive(Clone)]
pub struct FPGradedAlgebra {
    ring: BaseRing,
    gens: Vec<Generator>,
    vars: Arc<[String]>,
    relations: Vec<MultiPoly>,
    basis: Vec<Poly>,
    pieces: Arc<Mutex<Vec<Vec<Vec<u32>>>>>,
}

impl fmt::Debug for FPGradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPGradedAlgebra({self})")
    }
}

impl fmt::Display for FPGradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring)?;
        if self.gens.is_empty() {
            return Ok(());
        }
        let g: Vec<String> = self.gens.iter().map(|g| format!("{}({})", g.name, g.weight)).collect();
        write!(f, "[{}]", g.join(","))?;
        if !self.relations.is_empty() {
            let r: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            write!(f, "/({})", r.join(","))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct AlgebraJson<'a> {
    spec: String,
    base: String,
    generators: &'a [Generator],
    relations: Vec<String>,
    normal_form_basis: Vec<String>,
    smooth: bool,
}

impl Serialize for FPGradedAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson {
            spec: self.to_string(),
            base: self.ring.to_string(),
            generators: &self.gens,
            relations: self.relations.iter().map(|r| r.to_string()).collect(),
            normal_form_basis: self.normal_form_relations().iter().map(|r| r.to_string()).collect(),
            smooth: self.is_smooth(),
        }
        .serialize(s)
    }
}

impl std::str::FromStr for FPGradedAlgebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FPGradedAlgebra::parse(s)
    }
}

impl FPGradedAlgebra {
    /// Parses `BASE[x(w1),y(w2)]/(rel1,rel2)`; weights default to 1.
    pub fn parse(s: &str) -> Result<Self> {
        let spec = parse_algebra(s)?;
        let gens: Vec<Generator> = spec
            .generators
            .into_iter()
            .map(|(name, weight)| Generator { name, weight })
            .collect();
        let vars: Arc<[String]> = gens.iter().map(|g| g.name.clone()).collect::<Vec<_>>().into();
        let rels = spec
            .relations
            .iter()
            .map(|r| parse_poly(r, spec.base, &vars))
            .collect::<Result<Vec<_>>>()?;
        FPGradedAlgebra::new(spec.base, gens, rels)
    }

    /// Free polynomial algebra on generators of the given weights.
    pub fn polynomial(ring: BaseRing, gens: &[(&str, u32)]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|&(n, w)| Generator {
                name: n.to_string(),
                weight: w,
            })
            .collect();
        FPGradedAlgebra::new(ring, gens, Vec::new())
    }

    pub fn new(ring: BaseRing, gens: Vec<Generator>, relations: Vec<MultiPoly>) -> Result<Self> {
        if gens.iter().any(|g| g.weight == 0) {
            return Err(Error::Unsupported("generators need positive weights".into()));
        }
        let vars: Arc<[String]> = gens.iter().map(|g| g.name.clone()).collect::<Vec<_>>().into();
        let weights: Vec<u32> = gens.iter().map(|g| g.weight).collect();
        let mut polys = Vec::new();
        for r in &relations {
            if r.vars().len() != vars.len() {
                return Err(Error::Dimension(format!("relation {r} has the wrong variables")));
            }
            let r = r.change_ring(ring)?;
            if r.is_zero() {
                continue;
            }
            let degs: std::collections::BTreeSet<u64> = r
                .terms()
                .map(|(m, _)| wdeg(&weights, &m.0))
                .collect();
            if degs.len() > 1 {
                return Err(Error::Unsupported(format!("relation {r} is not homogeneous for the weights")));
            }
            if degs.contains(&0) {
                return Err(Error::Unsupported(format!("relation {r} has a constant term")));
            }
            polys.push(to_poly(&weights, &r));
        }
        let basis = if ring.is_field() {
            buchberger(ring, &weights, polys)
        } else {
            monomial_basis(ring, polys)?
        };
        let relations = relations.iter().map(|r| r.change_ring(ring)).collect::<Result<_>>()?;
        Ok(FPGradedAlgebra {
            ring,
            gens,
            vars,
            relations,
            basis,
            pieces: Arc::new(Mutex::new(Vec::new())),
        })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn weights(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.weight).collect()
    }

    pub fn relations(&self) -> &[MultiPoly] {
        &self.relations
    }

    /// True iff there are no relations.
    pub fn is_smooth(&self) -> bool {
        self.basis.is_empty()
    }

    /// The reduced Gröbner basis (or minimal monomial generators).
    pub fn normal_form_relations(&self) -> Vec<MultiPoly> {
        self.basis.iter().map(|p| self.to_multipoly(p)).collect()
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u64 {
        wdeg(&self.weights(), exps)
    }

    fn to_multipoly(&self, p: &Poly) -> MultiPoly {
        MultiPoly::from_terms(self.ring, self.vars.clone(), p.iter().map(|(k, c)| (k.exps.clone(), c.clone())))
            .expect("coefficients already reduced")
    }

    /// Parses an element written in the generators.
    pub fn element(&self, s: &str) -> Result<MultiPoly> {
        parse_poly(s, self.ring, &self.vars)
    }

    /// Unique reduced representative.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.vars().len() != self.vars.len() {
            return Err(Error::Dimension(format!("{p} is not written in the generators")));
        }
        let p = p.change_ring(self.ring)?;
        let reduced = reduce(self.ring, to_poly(&self.weights(), &p), &self.basis);
        Ok(self.to_multipoly(&reduced))
    }

    /// Standard monomials of weighted degree `d`, increasing in term order.
    pub fn basis_in_degree(&self, d: u64) -> Vec<Vec<u32>> {
        let mut cache = self.pieces.lock().unwrap();
        while cache.len() as u64 <= d {
            let k = cache.len() as u64;
            let weights = self.weights();
            let mut mons = Vec::new();
            monomials_of_degree(&weights, k, 0, &mut vec![0; weights.len()], &mut mons);
            mons.retain(|m| !self.basis.iter().any(|g| divides(&lead(g).exps, m)));
            mons.sort_by(|a, b| key(&weights, a).cmp(&key(&weights, b)));
            cache.push(mons);
        }
        cache[d as usize].clone()
    }

    pub fn dim(&self, d: u64) -> usize {
        self.basis_in_degree(d).len()
    }

    /// Normal form of a monomial as coordinates `(index in A_d, coeff)`.
    pub(crate) fn reduce_monomial(&self, exps: &[u32]) -> Vec<(usize, Scalar)> {
        let weights = self.weights();
        let d = wdeg(&weights, exps);
        let basis = self.basis_in_degree(d);
        let mut p = Poly::new();
        p.insert(key(&weights, exps), Scalar::from_integer(1.into()));
        let r = reduce(self.ring, p, &self.basis);
        let mut out: Vec<(usize, Scalar)> = r
            .into_iter()
            .map(|(k, c)| {
                let i = basis.iter().position(|m| *m == k.exps).expect("normal forms are standard");
                (i, c)
            })
            .collect();
        out.sort_by_key(|x| x.0);
        out
    }

    /// Module of Kähler differentials.
    pub fn kahler(&self) -> Result<KahlerModule> {
        let mut relations = Vec::new();
        for g in self.normal_form_relations() {
            let row = (0..self.vars.len())
                .map(|i| self.normal_form(&derivative(&g, i)))
                .collect::<Result<Vec<_>>>()?;
            relations.push(row);
        }
        Ok(KahlerModule {
            generators: self.gens.iter().map(|g| format!("d{}", g.name)).collect(),
            weights: self.weights(),
            relations,
        })
    }
}

/// Multiplication table of basis monomials, grown on demand.
pub(crate) struct Products<'a> {
    alg: &'a FPGradedAlgebra,
    bases: Vec<Vec<Vec<u32>>>,
    cache: HashMap<(u32, u32, u32, u32), Vec<(usize, Scalar)>>,
}

impl<'a> Products<'a> {
    pub fn new(alg: &'a FPGradedAlgebra, max_degree: u64) -> Self {
        let bases = (0..=max_degree).map(|d| alg.basis_in_degree(d)).collect();
        Products {
            alg,
            bases,
            cache: HashMap::new(),
        }
    }

    pub fn dim(&self, d: u32) -> usize {
        self.bases.get(d as usize).map_or(0, Vec::len)
    }

    /// `e_{d1,i} · e_{d2,j}` in the basis of degree `d1 + d2`.
    pub fn mul(&mut self, (d1, i): (u32, u32), (d2, j): (u32, u32)) -> &[(usize, Scalar)] {
        let k = if (d1, i) <= (d2, j) { (d1, i, d2, j) } else { (d2, j, d1, i) };
        if !self.cache.contains_key(&k) {
            let a = &self.bases[k.0 as usize][k.1 as usize];
            let b = &self.bases[k.2 as usize][k.3 as usize];
            let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let r = self.alg.reduce_monomial(&e);
            self.cache.insert(k, r);
        }
        &self.cache[&k]
    }
}

/// Presentation of Ω¹: free on `dx_i` modulo `d(g)` for each normal-form
/// relation `g`; `relations[r][i]` is the coefficient of `dx_i`.
#[derive(Clone, Debug, Serialize)]
pub struct KahlerModule {
    pub generators: Vec<String>,
    pub weights: Vec<u32>,
    pub relations: Vec<Vec<MultiPoly>>,
}

pub(crate) fn derivative(p: &MultiPoly, i: usize) -> MultiPoly {
    let ring = p.ring();
    MultiPoly::from_terms(
        ring,
        p.vars().clone(),
        p.terms().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (e, c * Scalar::from_integer(k.into()))
        }),
    )
    .expect("same ring")
}

fn wdeg(weights: &[u32], exps: &[u32]) -> u64 {
    weights.iter().zip(exps).map(|(&w, &e)| w as u64 * e as u64).sum()
}

fn key(weights: &[u32], exps: &[u32]) -> Key {
    Key {
        wdeg: wdeg(weights, exps),
        exps: exps.to_vec(),
    }
}

fn to_poly(weights: &[u32], p: &MultiPoly) -> Poly {
    p.terms().map(|(m, c)| (key(weights, &m.0), c.clone())).collect()
}

fn lead(p: &Poly) -> &Key {
    p.keys().next_back().expect("nonzero polynomial")
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn monomials_of_degree(weights: &[u32], d: u64, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == weights.len() {
        if d == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let w = weights[i] as u64;
    let mut e = 0;
    while e * w <= d {
        cur[i] = e as u32;
        monomials_of_degree(weights, d - e * w, i + 1, cur, out);
        e += 1;
    }
    cur[i] = 0;
}

fn shift(k: &Key, by: &[u32], by_deg: u64) -> Key {
    Key {
        wdeg: k.wdeg + by_deg,
        exps: k.exps.iter().zip(by).map(|(a, b)| a + b).collect(),
    }
}

/// `p - c · m · g` where `m` is a monomial of weighted degree `mdeg`.
fn sub_multiple(ring: BaseRing, p: &mut Poly, c: &Scalar, m: &[u32], mdeg: u64, g: &Poly) {
    for (k, a) in g {
        let t = shift(k, m, mdeg);
        let v = ring.sub(p.get(&t).unwrap_or(&Scalar::zero()), &ring.mul(c, a));
        if v.is_zero() {
            p.remove(&t);
        } else {
            p.insert(t, v);
        }
    }
}

/// Full reduction by a basis with monic leading terms.
fn reduce(ring: BaseRing, mut p: Poly, basis: &[Poly]) -> Poly {
    let mut rem = Poly::new();
    while let Some((k, c)) = p.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
        let hit = basis.iter().find(|g| divides(&lead(g).exps, &k.exps));
        match hit {
            Some(g) => {
                let l = lead(g);
                let m: Vec<u32> = k.exps.iter().zip(&l.exps).map(|(a, b)| a - b).collect();
                sub_multiple(ring, &mut p, &c, &m, k.wdeg - l.wdeg, g);
            }
            None => {
                p.remove(&k);
                rem.insert(k, c);
            }
        }
    }
    rem
}

fn monic(ring: BaseRing, p: Poly) -> Poly {
    let inv = ring.inv(&p[lead(&p)]).expect("field coefficients");
    p.into_iter().map(|(k, c)| (k, ring.mul(&c, &inv))).collect()
}

fn lcm(a: &Key, b: &Key) -> Vec<u32> {
    a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect()
}

fn buchberger(ring: BaseRing, weights: &[u32], polys: Vec<Poly>) -> Vec<Poly> {
    let mut g: Vec<Poly> = Vec::new();
    for p in polys {
        let r = reduce(ring, p, &g);
        if !r.is_empty() {
            g.push(monic(ring, r));
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, lj) = (lead(&g[i]).clone(), lead(&g[j]).clone());
        // coprime leading terms reduce to zero
        if li.exps.iter().zip(&lj.exps).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = lcm(&li, &lj);
        let ldeg = wdeg(weights, &l);
        let mut s = Poly::new();
        for (idx, lk, c) in [(i, &li, -1), (j, &lj, 1)] {
            let m: Vec<u32> = l.iter().zip(&lk.exps).map(|(a, b)| a - b).collect();
            sub_multiple(ring, &mut s, &Scalar::from_integer(c.into()), &m, ldeg - lk.wdeg, &g[idx]);
        }
        let r = reduce(ring, s, &g);
        if !r.is_empty() {
            let n = g.len();
            g.push(monic(ring, r));
            pairs.extend((0..n).map(|i| (i, n)));
        }
    }
    interreduce(ring, g)
}

fn interreduce(ring: BaseRing, mut g: Vec<Poly>) -> Vec<Poly> {
    // drop elements whose leading term is divisible by another's
    let mut keep: Vec<Poly> = Vec::new();
    g.sort_by(|a, b| lead(a).cmp(lead(b)));
    for p in g {
        if !keep.iter().any(|q| divides(&lead(q).exps, &lead(&p).exps)) {
            keep.push(p);
        }
    }
    let mut out = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        let l = lead(&keep[i]).clone();
        let c = keep[i][&l].clone();
        let mut tail = keep[i].clone();
        tail.remove(&l);
        let mut r = reduce(ring, tail, &others);
        r.insert(l, c);
        out.push(monic(ring, r));
    }
    out.sort_by(|a, b| lead(a).cmp(lead(b)));
    out
}

fn monomial_basis(ring: BaseRing, polys: Vec<Poly>) -> Result<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::new();
    for p in polys {
        if p.len() != 1 || !ring.is_unit(p.values().next().unwrap()) {
            return Err(Error::Unsupported("monomial ideals only over non-field base".into()));
        }
        let k = lead(&p).clone();
        out.push(Poly::from([(k, Scalar::from_integer(1.into()))]));
    }
    out.sort_by(|a, b| lead(a).cmp(lead(b)));
    let mut keep: Vec<Poly> = Vec::new();
    for p in out {
        if !keep.iter().any(|q| divides(&lead(q).exps, &lead(&p).exps)) {
            keep.push(p);
        }
    }
    Ok(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> FPGradedAlgebra {
        FPGradedAlgebra::parse(s).unwrap()
    }

    fn nf(a: &FPGradedAlgebra, e: &str) -> String {
        a.normal_form(&a.element(e).unwrap()).unwrap().to_string()
    }

    #[test]
    fn truncated_polynomials() {
        let a = alg("Q[x]/(x^3)");
        assert_eq!(nf(&a, "x^4"), "0");
        assert_eq!(nf(&a, "x^2 + 3"), "3 + x^2");
        assert_eq!((0..5).map(|d| a.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1, 0, 0]);
    }

    #[test]
    fn cusp_reduction() {
        let a = alg("Q[x(2),y(3)]/(y^2 - x^3)");
        assert_eq!(nf(&a, "y^3"), "x^3*y");
        assert_eq!(a.normal_form_relations()[0].to_string(), "y^2 - x^3");
        // y^2 = x^3 removes one monomial in degree 6
        assert_eq!(a.dim(6), 1);
    }

    #[test]
    fn free_algebra_is_untouched() {
        let a = alg("Q[x,y]");
        assert_eq!(nf(&a, "x*y + y^2"), "x*y + y^2");
        assert!(a.is_smooth());
        assert_eq!((0..4).map(|d| a.dim(d)).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn groebner_completion() {
        // leading terms y^2 and x*y overlap; the S-polynomial reduces to x^3
        let a = alg("Q[x,y]/(y^2, x*y - x^2)");
        let g: Vec<String> = a.normal_form_relations().iter().map(|p| p.to_string()).collect();
        assert_eq!(g.len(), 3, "{g:?}");
        assert!(g.contains(&"x^3".to_string()), "{g:?}");
        assert_eq!(a.dim(3), 0);
        assert_eq!(a.dim(2), 1);
    }

    #[test]
    fn integral_bases_need_monomials() {
        let err = FPGradedAlgebra::parse("Z[x,y]/(x^2 - y^2)").unwrap_err();
        assert_eq!(err, Error::Unsupported("monomial ideals only over non-field base".into()));
        assert!(FPGradedAlgebra::parse("Z[x]/(2*x)").is_err());
        let a = alg("Z[x,y]/(x*y, x^2*y)");
        assert_eq!(a.normal_form_relations().len(), 1);
        assert_eq!(a.dim(3), 2);
    }

    #[test]
    fn inhomogeneous_relations_are_refused() {
        assert!(FPGradedAlgebra::parse("Q[x,y]/(y^2 - x^3)").is_err());
    }

    #[test]
    fn kahler_relations() {
        let a = alg("Q[x]/(x^3)");
        let k = a.kahler().unwrap();
        assert_eq!(k.relations, vec![vec![a.element("3*x^2").unwrap()]]);
    }

    #[test]
    fn display_round_trip() {
        let a = alg("F_3[x(1),y(2)]/(x^2 - y)");
        let b = alg(&a.to_string());
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.normal_form_relations(), b.normal_form_relations());
    }
}
