//! Integer polynomials with packed exponent vectors, used to build the
//! universal Witt polynomials.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, MultiPoly, Scalar};

const BITS: u32 = 12;
const MASK: u128 = (1 << BITS) - 1;
pub(crate) const MAX_VARS: usize = (128 / BITS) as usize;
pub(crate) const MAX_EXP: u32 = (1 << BITS) - 1;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct IntPoly {
    nvars: usize,
    terms: FxHashMap<u128, BigInt>,
}

fn exp_of(key: u128, i: usize) -> u32 {
    ((key >> (BITS * i as u32)) & MASK) as u32
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables for a packed monomial");
        IntPoly {
            nvars,
            terms: FxHashMap::default(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(1u128 << (BITS * i as u32), BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Rewrites every monomial through `f`; monomials mapped to `None` are
    /// dropped.
    pub fn remap(&self, nvars: usize, f: impl Fn(&[u32]) -> Option<Vec<u32>>) -> IntPoly {
        let mut out = IntPoly::zero(nvars);
        for (&k, v) in &self.terms {
            let exps: Vec<u32> = (0..self.nvars).map(|i| exp_of(k, i)).collect();
            if let Some(e) = f(&exps) {
                let key = e
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (i, &x)| acc | ((x as u128) << (BITS * i as u32)));
                let slot = out.terms.entry(key).or_insert_with(BigInt::zero);
                *slot += v;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_assign_scaled(&mut self, other: &IntPoly, c: &BigInt) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_insert_with(BigInt::zero);
            *e += v * c;
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigInt::one());
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: FxHashMap<u128, BigInt> = FxHashMap::default();
        acc.reserve(big.terms.len() * small.terms.len().min(8));
        for (ka, va) in &small.terms {
            for (kb, vb) in &big.terms {
                // exponents never carry into the neighbouring field; callers
                // stay below MAX_EXP per variable
                let e = acc.entry(ka + kb).or_insert_with(BigInt::zero);
                *e += va * vb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        IntPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, e: u64) -> IntPoly {
        if e == 0 {
            return Self::constant(self.nvars, BigInt::one());
        }
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            let mut p = Self::zero(self.nvars);
            p.terms.insert(k * e as u128, v.pow(e as u32));
            return p;
        }
        // repeated multiplication by a short base beats squaring here
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by `n`; the first inexact term is reported.
    pub fn div_exact(&self, n: &BigInt, names: &[String]) -> Result<IntPoly> {
        let mut terms = FxHashMap::default();
        for (k, v) in &self.terms {
            let (q, r) = v.div_rem(n);
            if !r.is_zero() {
                return Err(Error::InexactDivision {
                    divisor: n.to_string(),
                    term: self.term_string(*k, v, names),
                });
            }
            terms.insert(*k, q);
        }
        Ok(IntPoly {
            nvars: self.nvars,
            terms,
        })
    }

    fn term_string(&self, k: u128, v: &BigInt, names: &[String]) -> String {
        let mut s = v.to_string();
        for (i, name) in names.iter().enumerate().take(self.nvars) {
            match exp_of(k, i) {
                0 => {}
                1 => s.push_str(&format!("*{name}")),
                e => s.push_str(&format!("*{name}^{e}")),
            }
        }
        s
    }

    /// Weighted degrees of all monomials.
    pub fn weighted_degrees(&self, weights: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .terms
            .keys()
            .map(|&k| (0..self.nvars).map(|i| weights[i] * exp_of(k, i) as u64).sum())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_multipoly(&self, vars: Arc<[String]>) -> MultiPoly {
        let n = vars.len();
        let terms = self.terms.iter().map(|(&k, v)| {
            let exps: Vec<u32> = (0..n).map(|i| exp_of(k, i)).collect();
            (exps, Scalar::from_integer(v.clone()))
        });
        MultiPoly::from_terms(BaseRing::Integers, vars, terms).expect("integer coefficients")
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_expansion() {
        let x = IntPoly::var(2, 0);
        let y = IntPoly::var(2, 1);
        let p = x.add(&y).pow(5);
        assert_eq!(p.num_terms(), 6);
        let vars: Arc<[String]> = vec!["x".to_string(), "y".to_string()].into();
        let mp = p.to_multipoly(vars);
        assert_eq!(mp.coeff(&[2, 3]), Scalar::from_integer(10.into()));
    }

    #[test]
    fn inexact_division_reports_term() {
        let x = IntPoly::var(1, 0);
        let names = vec!["x".to_string()];
        let err = x.add(&IntPoly::constant(1, 2.into())).div_exact(&2.into(), &names).unwrap_err();
        match err {
            Error::InexactDivision { term, .. } => assert_eq!(term, "1*x"),
            other => panic!("{other:?}"),
        }
    }
}
