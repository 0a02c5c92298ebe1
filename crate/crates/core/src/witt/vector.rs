use std::sync::Arc;

use serde::Serialize;

use super::carrier::Carrier;
use super::law::{build_witt_law, WittLaw};
use crate::error::{Error, Result};
use crate::exactalg::MultiPoly;

/// Witt coordinates `(λ_{p^0}, ..., λ_{p^{m-1}})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector<E> {
    pub coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn new(coords: Vec<E>) -> Self {
        WittVector { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// JSON form `{"p":…, "m":…, "coords":[…]}`.
#[derive(Clone, Debug, Serialize)]
pub struct WittVectorJson {
    pub p: u64,
    pub m: usize,
    pub coords: Vec<String>,
}

/// Witt arithmetic of length `m` at the prime `p` over a carrier.
pub struct Witt<'a, C: Carrier> {
    carrier: &'a C,
    law: Arc<WittLaw>,
}

impl<'a, C: Carrier> Witt<'a, C> {
    pub fn new(carrier: &'a C, p: u64, m: usize) -> Result<Self> {
        Ok(Witt {
            carrier,
            law: build_witt_law(p, m)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.law.p
    }

    pub fn m(&self) -> usize {
        self.law.m
    }

    pub fn law(&self) -> &WittLaw {
        &self.law
    }

    pub fn carrier(&self) -> &C {
        self.carrier
    }

    fn check_len(&self, w: &WittVector<C::Elem>) -> Result<()> {
        if w.len() != self.m() {
            return Err(Error::Dimension(format!("Witt vector of length {} in W_{}", w.len(), self.m())));
        }
        Ok(())
    }

    pub fn zero(&self) -> WittVector<C::Elem> {
        WittVector::new(vec![self.carrier.zero(); self.m()])
    }

    /// `(1, 0, ..., 0)`, the multiplicative unit.
    pub fn one(&self) -> WittVector<C::Elem> {
        self.teichmuller(&self.carrier.one())
    }

    pub fn teichmuller(&self, a: &C::Elem) -> WittVector<C::Elem> {
        let mut c = vec![self.carrier.zero(); self.m()];
        c[0] = a.clone();
        WittVector::new(c)
    }

    fn eval_all(&self, polys: &[MultiPoly], values: &[C::Elem]) -> Result<WittVector<C::Elem>> {
        let coords = polys
            .iter()
            .map(|q| q.eval(self.carrier, values))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector::new(coords))
    }

    fn pair(&self, a: &WittVector<C::Elem>, b: &WittVector<C::Elem>) -> Result<Vec<C::Elem>> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(a.coords.iter().chain(&b.coords).cloned().collect())
    }

    pub fn add(&self, a: &WittVector<C::Elem>, b: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        let v = self.pair(a, b)?;
        self.eval_all(&self.law.sum, &v)
    }

    pub fn mul(&self, a: &WittVector<C::Elem>, b: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        let v = self.pair(a, b)?;
        self.eval_all(&self.law.product, &v)
    }

    pub fn neg(&self, a: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.check_len(a)?;
        self.eval_all(&self.law.negation, &a.coords)
    }

    /// `a + neg(b)`.
    pub fn sub(&self, a: &WittVector<C::Elem>, b: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.add(a, &self.neg(b)?)
    }

    /// Ghost components `ω_i = Σ_{j≤i} p^j λ_j^{p^{i-j}}`.
    pub fn ghost(&self, w: &WittVector<C::Elem>) -> Vec<C::Elem> {
        ghost(self.carrier, self.p(), w)
    }

    /// Truncated Frobenius `W_m -> W_{m-1}`.
    pub fn frobenius(&self, w: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.check_len(w)?;
        if self.m() < 2 {
            return Err(Error::OutOfRange("truncated Frobenius needs m >= 2".into()));
        }
        self.eval_all(&self.law.frobenius, &w.coords)
    }

    /// Full-length Frobenius over an F_p-algebra: coordinatewise p-th power.
    pub fn frobenius_modp(&self, w: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.check_len(w)?;
        self.require_fp_algebra()?;
        let p = self.p();
        Ok(WittVector::new(w.coords.iter().map(|x| self.carrier.pow(x, p)).collect()))
    }

    fn require_fp_algebra(&self) -> Result<()> {
        if !self.carrier.is_fp_algebra(self.p()) {
            return Err(Error::Unsupported(format!(
                "{} is not an F_{}-algebra",
                self.carrier.name(),
                self.p()
            )));
        }
        Ok(())
    }

    /// `(a^{p^i} λ_i)_i`.
    pub fn gm_action(&self, a: &C::Elem, w: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.check_len(w)?;
        let p = self.p();
        let coords = w
            .coords
            .iter()
            .enumerate()
            .map(|(i, x)| self.carrier.mul(&self.carrier.pow(a, p.pow(i as u32)), x))
            .collect();
        Ok(WittVector::new(coords))
    }

    /// Coordinate shift `(λ_i) -> (0, λ_0, ..., λ_{m-2})`.
    pub fn verschiebung(&self, w: &WittVector<C::Elem>) -> Result<WittVector<C::Elem>> {
        self.check_len(w)?;
        let mut coords = vec![self.carrier.zero()];
        coords.extend(w.coords[..self.m() - 1].iter().cloned());
        Ok(WittVector::new(coords))
    }

    /// `F(w) - [a^{p-1}] w`. Over F_p-algebras F is full length; otherwise
    /// the result has length `m - 1` and the second term is truncated.
    pub fn gp_map(&self, w: &WittVector<C::Elem>, a: &C::Elem) -> Result<WittVector<C::Elem>> {
        let scaled = self.gm_action(&self.carrier.pow(a, self.p() - 1), w)?;
        if self.carrier.is_fp_algebra(self.p()) {
            let f = self.frobenius_modp(w)?;
            return self.sub(&f, &scaled);
        }
        let f = self.frobenius(w)?;
        let short = Witt::new(self.carrier, self.p(), self.m() - 1)?;
        let scaled = WittVector::new(scaled.coords[..self.m() - 1].to_vec());
        short.sub(&f, &scaled)
    }

    pub fn to_json(&self, w: &WittVector<C::Elem>) -> WittVectorJson {
        WittVectorJson {
            p: self.p(),
            m: w.len(),
            coords: w.coords.iter().map(|x| self.carrier.show(x)).collect(),
        }
    }
}

/// Ghost components over any carrier.
pub fn ghost<C: Carrier>(carrier: &C, p: u64, w: &WittVector<C::Elem>) -> Vec<C::Elem> {
    let n = w.len();
    (0..n)
        .map(|i| {
            let mut acc = carrier.zero();
            for j in 0..=i {
                let term = carrier.pow(&w.coords[j], p.pow((i - j) as u32));
                let coef = carrier.from_integer(&num_bigint::BigInt::from(p).pow(j as u32));
                acc = carrier.add(&acc, &carrier.mul(&coef, &term));
            }
            acc
        })
        .collect()
}
