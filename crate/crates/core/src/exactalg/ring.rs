use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact scalar used throughout. Elements of every supported ring are
/// stored as rationals in a canonical form chosen by [`BaseRing::normalize`].
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Scalar {
    Scalar::from_integer(n.clone())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The exact base rings supported by every module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BaseRing {
    Integers,
    Rationals,
    PrimeField { p: u64 },
    /// Z/p^k.
    CyclicRing { p: u64, k: u32 },
    /// Z_(p): integers with p-local bookkeeping. Division by integers prime
    /// to p is allowed.
    PLocalIntegers { p: u64 },
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Rationals => write!(f, "Q"),
            BaseRing::PrimeField { p } => write!(f, "F_{p}"),
            BaseRing::CyclicRing { p, k } => write!(f, "Z/{p}^{k}"),
            BaseRing::PLocalIntegers { p } => write!(f, "Z_({p})"),
        }
    }
}

impl FromStr for BaseRing {
    type Err = Error;

    /// Accepts `Z`, `Q`, `F_p` (or `Fp`), `Z/n` with `n = p^k` (or `Z/p^k`),
    /// and `Z_(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown base ring '{s}'"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s {
            "Z" => return Ok(BaseRing::Integers),
            "Q" => return Ok(BaseRing::Rationals),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
            return BaseRing::p_local(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("F_").or_else(|| s.strip_prefix('F')) {
            return BaseRing::prime_field(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("Z/") {
            if let Some((p, k)) = rest.split_once('^') {
                return BaseRing::cyclic(num(p)?, num(k)? as u32);
            }
            let n = num(rest)?;
            let f = factor(&BigInt::from(n));
            if f.len() != 1 {
                return Err(Error::Parse(format!("Z/{n}: modulus must be a prime power")));
            }
            let p = f[0].0.to_u64().ok_or_else(bad)?;
            return BaseRing::cyclic(p, f[0].1);
        }
        Err(bad())
    }
}

impl BaseRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(BaseRing::PrimeField { p })
    }

    pub fn cyclic(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::OutOfRange("Z/p^k needs k >= 1".into()));
        }
        if k == 1 {
            return Ok(BaseRing::PrimeField { p });
        }
        if (p as f64).powi(k as i32) > (u32::MAX as f64) {
            return Err(Error::OutOfRange(format!("Z/{p}^{k} is too large")));
        }
        Ok(BaseRing::CyclicRing { p, k })
    }

    pub fn p_local(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(BaseRing::PLocalIntegers { p })
    }

    pub fn is_field(&self) -> bool {
        matches!(self, BaseRing::Rationals | BaseRing::PrimeField { .. })
    }

    /// Integers, or p-local integers. Homology over these goes through Smith
    /// normal form.
    pub fn is_integral(&self) -> bool {
        matches!(self, BaseRing::Integers | BaseRing::PLocalIntegers { .. })
    }

    /// The modulus of a finite ring (p or p^k).
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            BaseRing::PrimeField { p } => Some(p),
            BaseRing::CyclicRing { p, k } => Some(p.pow(k)),
            _ => None,
        }
    }

    /// Characteristic (0 for Z, Q, Z_(p)).
    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    /// The prime attached to the ring, if any.
    pub fn prime(&self) -> Option<u64> {
        match *self {
            BaseRing::PrimeField { p }
            | BaseRing::CyclicRing { p, .. }
            | BaseRing::PLocalIntegers { p } => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match self {
            BaseRing::Rationals => true,
            BaseRing::Integers => x.is_integer(),
            BaseRing::PLocalIntegers { p } => {
                !(x.denom() % BigInt::from(*p)).is_zero()
            }
            BaseRing::PrimeField { .. } | BaseRing::CyclicRing { .. } => {
                let n = BigInt::from(self.modulus().unwrap());
                x.is_integer() && !x.is_negative() && x.numer() < &n
            }
        }
    }

    /// Maps a rational into the ring (reducing modulo n for finite rings).
    /// Fails when the value has a denominator not invertible in the ring.
    pub fn normalize(&self, x: Scalar) -> Result<Scalar> {
        match self {
            BaseRing::Rationals => Ok(x),
            BaseRing::Integers => {
                if x.is_integer() {
                    Ok(x)
                } else {
                    Err(self.not_in(&x))
                }
            }
            BaseRing::PLocalIntegers { p } => {
                if (x.denom() % BigInt::from(*p)).is_zero() {
                    Err(self.not_in(&x))
                } else {
                    Ok(x)
                }
            }
            BaseRing::PrimeField { .. } | BaseRing::CyclicRing { .. } => {
                let n = BigInt::from(self.modulus().unwrap());
                let num = x.numer().mod_floor(&n);
                if x.is_integer() {
                    return Ok(Scalar::from_integer(num));
                }
                let den = x.denom().mod_floor(&n);
                let inv = mod_inverse(&den, &n).ok_or_else(|| self.not_in(&x))?;
                Ok(Scalar::from_integer((num * inv).mod_floor(&n)))
            }
        }
    }

    fn not_in(&self, x: &Scalar) -> Error {
        Error::NotInRing {
            value: x.to_string(),
            ring: self.to_string(),
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.normalize(int(n)).expect("integers map into every ring")
    }

    pub fn from_big(&self, n: &BigInt) -> Scalar {
        self.normalize(big(n)).expect("integers map into every ring")
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    /// Reduction for values that are known to be ring elements up to the
    /// modulus (sums and products of ring elements).
    pub(crate) fn reduce(&self, x: Scalar) -> Scalar {
        match self.modulus() {
            Some(n) => {
                let n = BigInt::from(n);
                Scalar::from_integer(x.numer().mod_floor(&n))
            }
            None => x,
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            BaseRing::Rationals => Some(a.recip()),
            BaseRing::Integers => {
                if a.is_integer() && a.numer().abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            BaseRing::PLocalIntegers { p } => {
                if (a.numer() % BigInt::from(*p)).is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            BaseRing::PrimeField { .. } | BaseRing::CyclicRing { .. } => {
                let n = BigInt::from(self.modulus().unwrap());
                mod_inverse(&a.numer().mod_floor(&n), &n).map(Scalar::from_integer)
            }
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = Scalar::one();
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
}

pub fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(n);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(n))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(n))
    } else {
        None
    }
}

/// Factor a positive integer into prime powers (trial division).
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// The exponent of p in n (n nonzero).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for r in [
            BaseRing::Integers,
            BaseRing::Rationals,
            BaseRing::PrimeField { p: 3 },
            BaseRing::CyclicRing { p: 2, k: 3 },
            BaseRing::PLocalIntegers { p: 5 },
        ] {
            assert_eq!(r.to_string().parse::<BaseRing>().unwrap(), r);
        }
        assert_eq!("Z/9".parse::<BaseRing>().unwrap(), BaseRing::CyclicRing { p: 3, k: 2 });
        assert_eq!("F2".parse::<BaseRing>().unwrap(), BaseRing::PrimeField { p: 2 });
        assert!("Z/6".parse::<BaseRing>().is_err());
        assert!("R".parse::<BaseRing>().is_err());
    }

    #[test]
    fn primality_is_checked() {
        assert!(BaseRing::prime_field(4).is_err());
        assert!(BaseRing::prime_field(7).is_ok());
        assert!(BaseRing::p_local(9).is_err());
    }

    #[test]
    fn finite_rings_reduce() {
        let f5 = BaseRing::prime_field(5).unwrap();
        assert_eq!(f5.from_int(-1), int(4));
        assert_eq!(f5.inv(&int(2)), Some(int(3)));
        assert_eq!(f5.normalize(Scalar::new(1.into(), 2.into())).unwrap(), int(3));
        let z9 = BaseRing::cyclic(3, 2).unwrap();
        assert_eq!(z9.inv(&int(3)), None);
        assert_eq!(z9.inv(&int(2)), Some(int(5)));
    }

    #[test]
    fn plocal_units() {
        let z3 = BaseRing::p_local(3).unwrap();
        assert!(z3.is_unit(&int(2)));
        assert!(!z3.is_unit(&int(6)));
        assert!(z3.normalize(Scalar::new(1.into(), 3.into())).is_err());
        assert!(z3.normalize(Scalar::new(1.into(), 2.into())).is_ok());
    }

    #[test]
    fn factoring() {
        assert_eq!(
            factor(&BigInt::from(360)),
            vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)]
        );
        assert_eq!(valuation(&BigInt::from(48), 2), 4);
    }
}
