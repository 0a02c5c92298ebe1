use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::ring::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Minimal commutative ring interface used to evaluate integer polynomials
/// in other rings.
pub trait CommRing {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_integer(&self, n: &BigInt) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Image of a scalar coefficient. The default only accepts integers.
    fn from_scalar(&self, c: &Scalar) -> Result<Self::Elem> {
        if c.is_integer() {
            Ok(self.from_integer(c.numer()))
        } else {
            Err(Error::NotInRing {
                value: c.to_string(),
                ring: "integral carrier".into(),
            })
        }
    }
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a [`BaseRing`]. No zero coefficient
/// is ever stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Scalar>,
    ring: BaseRing,
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl MultiPoly {
    pub fn zero(ring: BaseRing, vars: Arc<[String]>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
            ring,
        }
    }

    pub fn constant(ring: BaseRing, vars: Arc<[String]>, c: Scalar) -> Self {
        let mut p = Self::zero(ring, vars);
        let c = ring.reduce(c);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Monomial(vec![0; n]), c);
        }
        p
    }

    pub fn one(ring: BaseRing, vars: Arc<[String]>) -> Self {
        Self::constant(ring, vars, Scalar::one())
    }

    pub fn var(ring: BaseRing, vars: Arc<[String]>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(ring, vars, e, Scalar::one())
    }

    pub fn monomial(ring: BaseRing, vars: Arc<[String]>, exps: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(ring, vars);
        let c = ring.reduce(c);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms(
        ring: BaseRing,
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(ring, vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    p.vars.len()
                )));
            }
            let c = ring.normalize(c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let ring = self.ring;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common weighted degree of all terms, if homogeneous.
    pub fn weighted_degree(&self, weights: &[u64]) -> Option<u64> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.0.iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum::<u64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn check_compatible(&self, other: &MultiPoly) {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomial variable mismatch"
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.ring, self.vars.clone());
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_compatible(other);
        let mut acc: HashMap<Vec<u32>, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let prod = a * b;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let ring = self.ring;
        let terms = acc
            .into_iter()
            .filter_map(|(e, c)| {
                let c = ring.reduce(c);
                (!c.is_zero()).then(|| (Monomial(e), c))
            })
            .collect();
        MultiPoly {
            vars: self.vars.clone(),
            terms,
            ring,
        }
    }

    pub fn pow(&self, mut e: u64) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.ring, self.vars.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces variable `i` by `value` (a polynomial in the same variables).
    pub fn substitute(&self, i: usize, value: &MultiPoly) -> MultiPoly {
        self.check_compatible(value);
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one(self.ring, self.vars.clone())];
        let mut out = MultiPoly::zero(self.ring, self.vars.clone());
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut rest = m.0.clone();
            rest[i] = 0;
            let mono = MultiPoly::monomial(self.ring, self.vars.clone(), rest, c.clone());
            out = out.add(&mono.mul(&powers[k]));
        }
        out
    }

    /// Replaces every variable by the corresponding image. The images share
    /// a variable list, which becomes the variable list of the result.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let target_vars = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let ring = self.ring;
        let r = PolyRing::new(ring, target_vars);
        self.eval(&r, images).expect("integral coefficients")
    }

    /// Divides every coefficient by `n`, failing with the offending term if
    /// any coefficient is not an exact multiple.
    pub fn divide_exactly_by_integer(&self, n: &BigInt) -> Result<MultiPoly> {
        if n.is_zero() {
            return Err(Error::InexactDivision {
                divisor: "0".into(),
                term: "any".into(),
            });
        }
        let mut out = MultiPoly::zero(self.ring, self.vars.clone());
        for (m, c) in &self.terms {
            let q = c / Scalar::from_integer(n.clone());
            let ok = match self.ring {
                BaseRing::Rationals => true,
                _ => q.is_integer(),
            };
            if !ok {
                return Err(Error::InexactDivision {
                    divisor: n.to_string(),
                    term: self.format_term(m, c),
                });
            }
            out.terms.insert(m.clone(), q);
        }
        Ok(out)
    }

    /// Evaluates in another commutative ring.
    pub fn eval<R: CommRing>(&self, ring: &R, values: &[R::Elem]) -> Result<R::Elem> {
        if values.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} variables",
                values.len(),
                self.vars.len()
            )));
        }
        // cache of powers per variable
        let mut cache: Vec<Vec<R::Elem>> = values.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.from_scalar(c)?;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = ring.mul(cache[i].last().unwrap(), &values[i]);
                    cache[i].push(next);
                }
                t = ring.mul(&t, &cache[i][e]);
            }
            acc = ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Re-reads the coefficients in another ring (e.g. reduction mod p).
    pub fn change_ring(&self, ring: BaseRing) -> Result<MultiPoly> {
        MultiPoly::from_terms(
            ring,
            self.vars.clone(),
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
    }

    /// Same polynomial over a longer variable list; variable `i` becomes
    /// `positions[i]`.
    pub fn embed(&self, vars: Arc<[String]>, positions: &[usize]) -> MultiPoly {
        assert_eq!(positions.len(), self.vars.len());
        let mut out = MultiPoly::zero(self.ring, vars.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    fn format_term(&self, m: &Monomial, c: &Scalar) -> String {
        let mono: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], e)
                }
            })
            .collect();
        if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono.join("*")
        } else {
            format!("{}*{}", c, mono.join("*"))
        }
    }
}

impl fmt::Display for MultiPoly {
    /// Lowest degree first, e.g. `x1 + y1 - x0*y0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // low degree first; within a degree, earlier variables first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0 .0.cmp(&a.0 .0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            let body = self.format_term(m, &abs);
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly<{}>({})", self.ring, self)
    }
}

struct TermJson<'a>(&'a Monomial, &'a Scalar);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("exps", &self.0 .0)?;
        m.serialize_entry("coef", &self.1.to_string())?;
        m.end()
    }
}

impl Serialize for MultiPoly {
    /// `{"vars": [...], "terms": [{"exps": [...], "coef": "..."}]}` with
    /// terms in increasing term order.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MultiPoly", 2)?;
        st.serialize_field("vars", &*self.vars)?;
        let terms: Vec<TermJson> = self.terms.iter().map(|(m, c)| TermJson(m, c)).collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// The polynomial ring itself as a [`CommRing`]; evaluating in it is
/// substitution.
#[derive(Clone, Debug)]
pub struct PolyRing {
    pub ring: BaseRing,
    pub vars: Arc<[String]>,
}

impl PolyRing {
    pub fn new(ring: BaseRing, vars: Arc<[String]>) -> Self {
        PolyRing { ring, vars }
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.ring, self.vars.clone(), i)
    }
}

impl CommRing for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.ring, self.vars.clone())
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::one(self.ring, self.vars.clone())
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn from_integer(&self, n: &BigInt) -> MultiPoly {
        MultiPoly::constant(self.ring, self.vars.clone(), Scalar::from_integer(n.clone()))
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
    fn from_scalar(&self, c: &Scalar) -> Result<MultiPoly> {
        Ok(MultiPoly::constant(self.ring, self.vars.clone(), self.ring.normalize(c.clone())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ring::int;

    fn xy() -> PolyRing {
        PolyRing::new(BaseRing::Integers, vec!["x".to_string(), "y".to_string()].into())
    }

    #[test]
    fn divide_exactly_example() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let f = x.pow(2).add(&y.pow(2)).sub(&x.add(&y).pow(2));
        let q = f.divide_exactly_by_integer(&BigInt::from(2)).unwrap();
        assert_eq!(q, x.mul(&y).neg());
        let err = x.add(&y.scale(&int(2))).divide_exactly_by_integer(&BigInt::from(2));
        assert!(matches!(err, Err(Error::InexactDivision { .. })));
    }

    #[test]
    fn substitute_and_mul() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let zero = r.zero();
        assert_eq!(x.add(&y).substitute(0, &zero), y);
        assert_eq!(x.mul(&x), MultiPoly::monomial(r.ring, r.vars.clone(), vec![2, 0], int(1)));
    }

    #[test]
    fn display_orders_low_terms_first() {
        let r = xy();
        let (x, y) = (r.var(0), r.var(1));
        let f = x.add(&y).sub(&x.mul(&y));
        assert_eq!(f.to_string(), "x + y - x*y");
    }

    #[test]
    fn reduction_drops_zero_terms() {
        let r = xy();
        let f = r.var(0).scale(&int(3)).add(&r.var(1));
        let g = f.change_ring(BaseRing::prime_field(3).unwrap()).unwrap();
        assert_eq!(g.num_terms(), 1);
    }
}
