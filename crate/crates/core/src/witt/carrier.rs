//! Rings in which Witt vectors are evaluated.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{is_prime, BaseRing, CommRing, PolyRing, Scalar};

/// A commutative ring usable as Witt-vector coordinates.
pub trait Carrier: CommRing + Sync {
    fn name(&self) -> String;

    /// All elements, for finite rings.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// True when `p = 0` in the ring.
    fn is_fp_algebra(&self, p: u64) -> bool {
        self.is_zero(&self.from_integer(&BigInt::from(p)))
    }

    fn show(&self, a: &Self::Elem) -> String;
}

/// Irreducible polynomials defining F_{p^k} (Conway polynomials), low
/// coefficients first, monic term omitted.
fn conway(p: u64, k: u32) -> Option<Vec<u64>> {
    let c: &[u64] = match (p, k) {
        (_, 1) => return Some(vec![0]),
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (7, 2) => &[3, 6],
        (7, 3) => &[4, 0, 6],
        _ => return None,
    };
    Some(c.to_vec())
}

/// Which finite ring a [`FiniteRing`] tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiniteKind {
    /// F_{p^k}, k <= 3.
    Field { p: u64, k: u32 },
    /// F_p[ε]/(ε²).
    DualNumbers { p: u64 },
    /// Z/p^k.
    Cyclic { p: u64, k: u32 },
}

impl fmt::Display for FiniteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteKind::Field { p, k: 1 } => write!(f, "F_{p}"),
            FiniteKind::Field { p, k } => write!(f, "F_{}", p.pow(*k)),
            FiniteKind::DualNumbers { p } => write!(f, "F_{p}[e]/(e^2)"),
            FiniteKind::Cyclic { p, k } => write!(f, "Z/{}", p.pow(*k)),
        }
    }
}

const MAX_TABLE: usize = 1024;

/// Finite commutative ring given by addition and multiplication tables on
/// `0..size`. Element 0 is zero.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    kind: FiniteKind,
    size: usize,
    one: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    /// `multiples[n] = n·1` for `n` below the characteristic.
    multiples: Vec<u32>,
    labels: Vec<String>,
}

impl FiniteRing {
    pub fn new(kind: FiniteKind) -> Result<Self> {
        match kind {
            FiniteKind::Field { p, k } => Self::field(p, k),
            FiniteKind::DualNumbers { p } => Self::dual_numbers(p),
            FiniteKind::Cyclic { p, k } => Self::cyclic(p, k),
        }
    }

    /// F_{p^k}; element index `Σ c_i p^i` for the class of `Σ c_i t^i`.
    pub fn field(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus = conway(p, k).ok_or_else(|| Error::Unsupported(format!("F_{p}^{k} is not tabulated")))?;
        let k = k as usize;
        let size = (p as usize).pow(k as u32);
        let digits = |mut x: usize| -> Vec<u64> {
            (0..k)
                .map(|_| {
                    let d = (x % p as usize) as u64;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let index = |c: &[u64]| -> u32 { c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32 };
        let mulpoly = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut prod = vec![0u64; 2 * k - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // t^k = -Σ modulus_i t^i
            for deg in (k..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (i, &mi) in modulus.iter().enumerate() {
                    let slot = deg - k + i;
                    prod[slot] = (prod[slot] + (p - c) * mi) % p;
                }
            }
            prod.truncate(k);
            prod
        };
        let labels = (0..size)
            .map(|x| {
                let d = digits(x);
                if k == 1 {
                    return d[0].to_string();
                }
                let mut parts = Vec::new();
                for (i, &c) in d.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => "t".into(),
                        _ => format!("t^{i}"),
                    };
                    parts.push(match (c, i) {
                        (_, 0) => c.to_string(),
                        (1, _) => mono,
                        _ => format!("{c}*{mono}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            })
            .collect();
        Self::tabulate(
            FiniteKind::Field { p, k: k as u32 },
            size,
            |a, b| {
                let (da, db) = (digits(a), digits(b));
                index(&da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect::<Vec<_>>())
            },
            |a, b| index(&mulpoly(&digits(a), &digits(b))),
            1,
            labels,
        )
    }

    /// F_p[ε]/(ε²); index `a + p b` for `a + bε`.
    pub fn dual_numbers(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = p as usize;
        let split = |x: usize| ((x % n) as u64, (x / n) as u64);
        let labels = (0..n * n)
            .map(|x| {
                let (a, b) = split(x);
                match (a, b) {
                    (a, 0) => a.to_string(),
                    (0, 1) => "e".into(),
                    (0, b) => format!("{b}*e"),
                    (a, 1) => format!("{a}+e"),
                    (a, b) => format!("{a}+{b}*e"),
                }
            })
            .collect();
        Self::tabulate(
            FiniteKind::DualNumbers { p },
            n * n,
            |x, y| {
                let ((a, b), (c, d)) = (split(x), split(y));
                ((a + c) % p + p * ((b + d) % p)) as u32
            },
            |x, y| {
                let ((a, b), (c, d)) = (split(x), split(y));
                ((a * c) % p + p * ((a * d + b * c) % p)) as u32
            },
            1,
            labels,
        )
    }

    pub fn cyclic(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = p.pow(k);
        Self::tabulate(
            FiniteKind::Cyclic { p, k },
            n as usize,
            |a, b| ((a as u64 + b as u64) % n) as u32,
            |a, b| ((a as u64 * b as u64) % n) as u32,
            1,
            (0..n).map(|x| x.to_string()).collect(),
        )
    }

    fn tabulate(
        kind: FiniteKind,
        size: usize,
        add: impl Fn(usize, usize) -> u32,
        mul: impl Fn(usize, usize) -> u32,
        one: u32,
        labels: Vec<String>,
    ) -> Result<Self> {
        if size > MAX_TABLE {
            return Err(Error::Budget {
                what: format!("table for {kind}"),
                dimension: size,
                budget: MAX_TABLE,
            });
        }
        let mut at = vec![0u32; size * size];
        let mut mt = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                at[a * size + b] = add(a, b);
                mt[a * size + b] = mul(a, b);
            }
        }
        let neg = (0..size)
            .map(|a| (0..size).find(|&b| at[a * size + b] == 0).expect("additive inverse") as u32)
            .collect();
        let mut multiples = vec![0u32];
        let mut x = one;
        while x != 0 {
            multiples.push(x);
            x = at[x as usize * size + one as usize];
        }
        Ok(FiniteRing {
            kind,
            size,
            one,
            add: at,
            mul: mt,
            neg,
            multiples,
            labels,
        })
    }

    pub fn kind(&self) -> FiniteKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Additive order of 1.
    pub fn characteristic(&self) -> u64 {
        self.multiples.len() as u64
    }

    /// Element with the given label, e.g. `t+1`, `2*e`.
    pub fn parse(&self, s: &str) -> Option<u32> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels.iter().position(|l| *l == s).map(|i| i as u32)
    }
}

impl CommRing for FiniteRing {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        self.one
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add[*a as usize * self.size + *b as usize]
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg[*a as usize]
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul[*a as usize * self.size + *b as usize]
    }
    fn from_integer(&self, n: &BigInt) -> u32 {
        let c = BigInt::from(self.multiples.len());
        let r = n.mod_floor(&c).to_usize().unwrap();
        self.multiples[r]
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_scalar(&self, c: &Scalar) -> Result<u32> {
        let num = self.from_integer(c.numer());
        if c.is_integer() {
            return Ok(num);
        }
        let den = self.from_integer(c.denom());
        let inv = (0..self.size as u32).find(|x| self.mul(x, &den) == self.one);
        inv.map(|i| self.mul(&num, &i)).ok_or_else(|| Error::NotInRing {
            value: c.to_string(),
            ring: self.kind.to_string(),
        })
    }
}

impl Carrier for FiniteRing {
    fn name(&self) -> String {
        self.kind.to_string()
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.size as u32).collect())
    }
    fn show(&self, a: &u32) -> String {
        self.labels[*a as usize].clone()
    }
}

/// A [`BaseRing`] (Z, Q, Z/p^k, Z_(p), F_p) used directly as carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalarCarrier(pub BaseRing);

impl CommRing for ScalarCarrier {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        self.0.zero()
    }
    fn one(&self) -> Scalar {
        self.0.one()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.0.add(a, b)
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        self.0.neg(a)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.0.mul(a, b)
    }
    fn from_integer(&self, n: &BigInt) -> Scalar {
        self.0.from_big(n)
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn from_scalar(&self, c: &Scalar) -> Result<Scalar> {
        self.0.normalize(c.clone())
    }
}

impl Carrier for ScalarCarrier {
    fn name(&self) -> String {
        self.0.to_string()
    }
    fn elements(&self) -> Option<Vec<Scalar>> {
        let n = self.0.modulus()?;
        Some((0..n as i64).map(|x| self.0.from_int(x)).collect())
    }
    fn show(&self, a: &Scalar) -> String {
        a.to_string()
    }
}

impl Carrier for PolyRing {
    fn name(&self) -> String {
        format!("polynomials over {}", self.ring)
    }
    fn show(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables_are_fields() {
        for (p, k) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)] {
            let f = FiniteRing::field(p, k).unwrap();
            assert_eq!(f.characteristic(), p);
            for a in 1..f.size() as u32 {
                assert!((1..f.size() as u32).any(|b| f.mul(&a, &b) == f.one()), "F_{p}^{k}: {a} not invertible");
            }
        }
    }

    #[test]
    fn dual_numbers_square_zero() {
        let r = FiniteRing::dual_numbers(3).unwrap();
        let e = r.parse("e").unwrap();
        assert_eq!(r.mul(&e, &e), 0);
        assert!(r.is_fp_algebra(3));
        assert_eq!(r.show(&r.add(&e, &r.one())), "1+e");
    }

    #[test]
    fn cyclic_is_not_fp_algebra() {
        let r = FiniteRing::cyclic(2, 2).unwrap();
        assert!(!r.is_fp_algebra(2));
        assert_eq!(r.characteristic(), 4);
        assert_eq!(r.from_integer(&BigInt::from(-1)), 3);
    }

    #[test]
    fn f4_labels_parse() {
        let f = FiniteRing::field(2, 2).unwrap();
        let t = f.parse("t").unwrap();
        // t^2 = t + 1
        assert_eq!(f.show(&f.mul(&t, &t)), "t+1");
    }
}
