use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, MultiPoly, Scalar};
use crate::report::{all_pass, Check};

/// Drops every term of total degree above `order`.
pub(crate) fn truncate(p: &MultiPoly, order: u32) -> MultiPoly {
    MultiPoly::from_terms(
        p.ring(),
        p.vars().clone(),
        p.terms()
            .filter(|(m, _)| m.degree() <= order as u64)
            .map(|(m, c)| (m.0.clone(), c.clone())),
    )
    .expect("coefficients already lie in the ring")
}

/// `f(images)` modulo total degree `order + 1`, when every image has no
/// constant term.
pub(crate) fn compose_truncated(f: &MultiPoly, images: &[MultiPoly], order: u32) -> MultiPoly {
    let vars = images[0].vars().clone();
    let ring = f.ring();
    let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|_| vec![MultiPoly::one(ring, vars.clone())]).collect();
    let mut out = MultiPoly::zero(ring, vars.clone());
    for (m, c) in f.terms() {
        if m.degree() > order as u64 {
            continue;
        }
        let mut term = MultiPoly::constant(ring, vars.clone(), c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = truncate(&powers[i].last().unwrap().mul(&images[i]), order);
                powers[i].push(next);
            }
            term = truncate(&term.mul(&powers[i][e as usize]), order);
        }
        out = out.add(&term);
    }
    out
}

fn xyz(n: usize) -> Arc<[String]> {
    ["X", "Y", "Z"][..n].iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// One-dimensional commutative formal group law `F(X, Y)` known modulo
/// total degree `order + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct FormalGroupLaw {
    #[serde(serialize_with = "crate::fgl::ring_str")]
    ring: BaseRing,
    order: u32,
    series: MultiPoly,
    /// The stored polynomial satisfies the axioms exactly, without
    /// truncation, so products of any degree can be read off it.
    polynomial: bool,
}

impl FormalGroupLaw {
    /// Validates `F ≡ X + Y` mod degree 2, unitality, commutativity and
    /// associativity mod degree `order + 1`.
    pub fn new(ring: BaseRing, order: u32, series: &MultiPoly) -> Result<Self> {
        if order < 1 {
            return Err(Error::OutOfRange("truncation order must be at least 1".into()));
        }
        if series.vars().len() != 2 {
            return Err(Error::Dimension("a formal group law is a series in two variables".into()));
        }
        let series = truncate(&series.change_ring(ring)?.embed(xyz(2), &[0, 1]), order);
        let mut f = FormalGroupLaw {
            ring,
            order,
            series,
            polynomial: false,
        };
        if let Some(c) = f.axiom_checks().into_iter().find(|c| !c.passed()) {
            return Err(Error::HopfAxiom {
                axiom: c.name,
                detail: c.diagnostics.join("; "),
            });
        }
        f.polynomial = f.exactly_associative();
        Ok(f)
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn series(&self) -> &MultiPoly {
        &self.series
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.series.coeff(&[i, j])
    }

    fn exactly_associative(&self) -> bool {
        let deg = self.series.total_degree().unwrap_or(0) as u32;
        if deg > self.order {
            return false;
        }
        // degree of either composite is at most deg^2
        let big = deg * deg;
        let (l, r) = self.associativity_sides(big.max(1));
        l == r
    }

    fn associativity_sides(&self, order: u32) -> (MultiPoly, MultiPoly) {
        let v = xyz(3);
        let x = MultiPoly::var(self.ring, v.clone(), 0);
        let y = MultiPoly::var(self.ring, v.clone(), 1);
        let z = MultiPoly::var(self.ring, v, 2);
        let fxy = compose_truncated(&self.series, &[x.clone(), y.clone()], order);
        let fyz = compose_truncated(&self.series, &[y, z.clone()], order);
        let left = compose_truncated(&self.series, &[fxy, z], order);
        let right = compose_truncated(&self.series, &[x, fyz], order);
        (left, right)
    }

    pub fn axiom_checks(&self) -> Vec<Check> {
        let v = xyz(2);
        let x = MultiPoly::var(self.ring, v.clone(), 0);
        let y = MultiPoly::var(self.ring, v.clone(), 1);
        let zero = MultiPoly::zero(self.ring, v);
        let linear = truncate(&self.series, 1);
        let f = &self.series;
        let swapped = compose_truncated(f, &[y.clone(), x.clone()], self.order);
        let (l, r) = self.associativity_sides(self.order);
        vec![
            Check::from_bool("F = X + Y mod degree 2", linear == x.add(&y), || format!("linear part {linear}")),
            Check::from_bool("F(X, 0) = X", compose_truncated(f, &[x.clone(), zero.clone()], self.order) == x, || {
                "F(X, 0) differs from X".into()
            }),
            Check::from_bool("F(0, Y) = Y", compose_truncated(f, &[zero, y.clone()], self.order) == y, || {
                "F(0, Y) differs from Y".into()
            }),
            Check::from_bool("F(X, Y) = F(Y, X)", swapped == *f, || format!("F(Y, X) = {swapped}")),
            Check::from_bool("associativity", l == r, || format!("F(F(X,Y),Z) - F(X,F(Y,Z)) = {}", l.sub(&r))),
        ]
    }

    pub fn is_valid(&self) -> bool {
        all_pass(&self.axiom_checks())
    }

    /// Formal inverse `ι(T)` with `F(T, ι(T)) = 0`, coefficients of
    /// `T^0..T^order`.
    pub fn inverse_series(&self) -> Vec<Scalar> {
        let n = self.order as usize;
        let t: Arc<[String]> = vec!["T".to_string()].into();
        let ring = self.ring;
        let tvar = MultiPoly::var(ring, t.clone(), 0);
        let mut iota = vec![Scalar::zero(); n + 1];
        iota[1] = ring.neg(&Scalar::one());
        for k in 2..=n {
            let poly = MultiPoly::from_terms(ring, t.clone(), iota.iter().enumerate().map(|(e, c)| (vec![e as u32], c.clone())))
                .expect("ring elements");
            let val = compose_truncated(&self.series, &[tvar.clone(), poly], k as u32);
            iota[k] = ring.sub(&iota[k], &val.coeff(&[k as u32]));
        }
        iota
    }
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(X,Y) = {} mod deg {} over {}", self.series, self.order + 1, self.ring)
    }
}

/// `F(X, Y) = X + Y + λXY`: additive at `λ = 0`, multiplicative at `λ = 1`.
pub fn interpolation_fgl(ring: BaseRing, lambda: &Scalar, order: u32) -> Result<FormalGroupLaw> {
    if order < 2 {
        return Err(Error::OutOfRange(format!("interpolation law needs N >= 2 (got {order})")));
    }
    let lambda = ring.normalize(lambda.clone())?;
    let series = MultiPoly::from_terms(
        ring,
        xyz(2),
        [(vec![1, 0], Scalar::one()), (vec![0, 1], Scalar::one()), (vec![1, 1], lambda)],
    )?;
    FormalGroupLaw::new(ring, order, &series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn interpolation_endpoints() {
        let add = interpolation_fgl(BaseRing::Integers, &int(0), 4).unwrap();
        assert_eq!(add.series().num_terms(), 2);
        assert_eq!(add.coeff(1, 1), int(0));
        assert!(add.is_polynomial());
        let mul = interpolation_fgl(BaseRing::Integers, &int(1), 4).unwrap();
        // (1 + X)(1 + Y) - 1
        assert_eq!(mul.coeff(1, 1), int(1));
        assert_eq!(mul.inverse_series(), vec![int(0), int(-1), int(1), int(-1), int(1)]);
    }

    #[test]
    fn associativity_expansion() {
        // both sides = X+Y+Z+λ(XY+XZ+YZ)+λ²XYZ
        let f = interpolation_fgl(BaseRing::Integers, &int(2), 3).unwrap();
        let (l, r) = f.associativity_sides(3);
        assert_eq!(l, r);
        assert_eq!(l.coeff(&[1, 1, 1]), int(4));
        assert_eq!(l.coeff(&[1, 0, 1]), int(2));
        assert_eq!(l.num_terms(), 7);
    }

    #[test]
    fn truncated_series_law() {
        // X + Y + X^2Y + XY^2 is associative mod degree 4 only
        let v = xyz(2);
        let s = MultiPoly::from_terms(
            BaseRing::Rationals,
            v,
            [(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![2, 1], int(1)), (vec![1, 2], int(1))],
        )
        .unwrap();
        let f = FormalGroupLaw::new(BaseRing::Rationals, 3, &s).unwrap();
        assert!(!f.is_polynomial());
        assert!(FormalGroupLaw::new(BaseRing::Rationals, 5, &s).is_err());
    }

    #[test]
    fn non_commutative_series_is_refused() {
        let s = MultiPoly::from_terms(
            BaseRing::Integers,
            xyz(2),
            [(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![2, 0], int(1))],
        )
        .unwrap();
        assert!(FormalGroupLaw::new(BaseRing::Integers, 3, &s).is_err());
    }

    #[test]
    fn inverse_mod_p() {
        let f = interpolation_fgl(BaseRing::prime_field(3).unwrap(), &int(-1), 3).unwrap();
        // X + Y - XY: ι(T) = -T - T^2 - T^3 ... with λ = -1: ι = -T/(1 - T)
        assert_eq!(f.inverse_series(), vec![int(0), int(2), int(2), int(2)]);
    }
}
