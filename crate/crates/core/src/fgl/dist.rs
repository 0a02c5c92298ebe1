use num_traits::{One, Zero};
use serde::Serialize;

use super::law::{truncate, FormalGroupLaw};
use super::truncated::TruncatedHopf;
use crate::circlehopf::GradedHopfAlgebra;
use crate::env_budget;
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, MultiPoly, Scalar};
use crate::report::Check;

/// Distributions `δ_0..δ_N` on a formal group, dual to `1, T, ..., T^N`.
///
/// `δ_i δ_j = Σ_n [X^i Y^j] F^n δ_n` and `Δδ_n = Σ_{a+b=n} δ_a ⊗ δ_b`.
/// The span of `δ_0..δ_N` is only closed under products up to filtration
/// degree `N`, so `δ_i δ_j` is recorded when `i + j <= N`. For `F = X + Y +
/// λXY` the span of `δ_n, n > N` is an ideal and every product is kept,
/// computed in the quotient.
#[derive(Clone, Debug, Serialize)]
pub struct DistributionAlgebra {
    law: FormalGroupLaw,
    order: u32,
    #[serde(flatten)]
    h: TruncatedHopf,
}

/// Distribution algebra of `law` truncated at `δ_N`.
pub fn distributions(law: &FormalGroupLaw, order: u32) -> Result<DistributionAlgebra> {
    let ring = law.ring();
    if !matches!(ring, BaseRing::Integers | BaseRing::Rationals) {
        return Err(Error::Unsupported(format!("distributions are built over Z or Q (got {ring})")));
    }
    let budget = env_budget(8);
    if order as usize > budget {
        return Err(Error::Budget {
            what: "distribution algebra".into(),
            dimension: order as usize,
            budget,
        });
    }
    let full = law.is_polynomial() && law.series().terms().all(|(m, _)| m.0[0] <= 1 && m.0[1] <= 1);
    if order > law.order() && !law.is_polynomial() {
        return Err(Error::OutOfRange(format!("law known mod degree {} only", law.order() + 1)));
    }
    let n = order as usize;
    let bound = if full { 2 * order } else { order };
    let f = law.series();
    let mut powers = vec![MultiPoly::one(ring, f.vars().clone())];
    for _ in 0..n {
        powers.push(truncate(&powers.last().unwrap().mul(f), bound));
    }
    let mul = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    (full || i + j <= n).then(|| powers.iter().map(|fp| fp.coeff(&[i as u32, j as u32])).collect())
                })
                .collect()
        })
        .collect();
    // ⟨S δ_n, T^m⟩ = ⟨δ_n, ι(T)^m⟩
    let iota = law_inverse(law, order);
    let mut antipode = vec![vec![Scalar::zero(); n + 1]; n + 1];
    let mut iota_pow = vec![Scalar::zero(); n + 1];
    iota_pow[0] = Scalar::one();
    for m in 0..=n {
        for (k, c) in iota_pow.iter().enumerate() {
            antipode[k][m] = c.clone();
        }
        iota_pow = series_mul(ring, &iota_pow, &iota);
    }
    let r = n + 1;
    let mut comul = vec![vec![Scalar::zero(); r * r]; r];
    for (k, row) in comul.iter_mut().enumerate() {
        for a in 0..=k {
            row[a * r + k - a] = Scalar::one();
        }
    }
    Ok(DistributionAlgebra {
        law: law.clone(),
        order,
        h: TruncatedHopf {
            ring,
            symbol: "δ",
            mul,
            comul,
            antipode,
            all_products: full,
        },
    })
}

fn law_inverse(law: &FormalGroupLaw, order: u32) -> Vec<Scalar> {
    let mut iota = law.inverse_series();
    iota.resize(order as usize + 1, Scalar::zero());
    iota
}

fn series_mul(ring: BaseRing, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len();
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}

impl DistributionAlgebra {
    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn ring(&self) -> BaseRing {
        self.law.ring()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.h.rank()
    }

    /// True when products of every pair are recorded.
    pub fn all_products(&self) -> bool {
        self.h.all_products
    }

    /// `δ_i δ_j` in the `δ` basis, when recorded.
    pub fn product(&self, i: usize, j: usize) -> Option<&[Scalar]> {
        self.h.product(i, j)
    }

    /// `Δδ_n` indexed by `a * (N + 1) + b`.
    pub fn coproduct(&self, n: usize) -> &[Scalar] {
        &self.h.comul[n]
    }

    pub fn antipode(&self, n: usize) -> &[Scalar] {
        &self.h.antipode[n]
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        self.h.basis(i)
    }

    /// Bilinear extension of the recorded products; `None` if some needed
    /// product is not recorded.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Option<Vec<Scalar>> {
        self.h.multiply(x, y)
    }

    pub fn axiom_checks(&self) -> Vec<Check> {
        self.h.axiom_checks()
    }

    /// True for `F = X + Y`, where `δ_n` is homogeneous of weight `-n`.
    pub fn is_additive(&self) -> bool {
        self.law.series().num_terms() == 2
    }

    /// `δ_0..δ_{r-1}` as a Hopf algebra over `ring`, when that span is
    /// closed under products after reducing the constants. Named `d0, d1, ...`.
    pub fn restrict(&self, ring: BaseRing, r: usize) -> Result<GradedHopfAlgebra> {
        let weights: Vec<i64> = (0..r as i64).map(|k| if self.is_additive() { -k } else { 0 }).collect();
        self.h.restrict(&format!("Dist_{r}"), ring, r, &weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::fgl::interpolation_fgl;
    use crate::report::all_pass;

    fn factorial(n: i64) -> i64 {
        (1..=n).product()
    }

    #[test]
    fn additive_distributions_are_divided_powers() {
        let law = interpolation_fgl(BaseRing::Integers, &int(0), 6).unwrap();
        let d = distributions(&law, 6).unwrap();
        assert!(all_pass(&d.axiom_checks()));
        let mut pow = d.basis(1);
        for n in 2..=6 {
            pow = d.multiply(&pow, &d.basis(1)).unwrap();
            let mut expect = vec![int(0); 7];
            expect[n] = int(factorial(n as i64));
            assert_eq!(pow, expect);
        }
        // ι(T) = -T, so S δ_n = (-1)^n δ_n
        let mut s3 = vec![int(0); 7];
        s3[3] = int(-1);
        assert_eq!(d.antipode(3), &s3[..]);
    }

    #[test]
    fn multiplicative_small_products() {
        let law = interpolation_fgl(BaseRing::Integers, &int(1), 4).unwrap();
        let d = distributions(&law, 4).unwrap();
        assert!(d.all_products());
        assert!(all_pass(&d.axiom_checks()));
        // [X Y] F = 1, [X Y] F^2 = 2
        assert_eq!(d.product(1, 1).unwrap(), &[int(0), int(1), int(2), int(0), int(0)]);
        // δ_1 δ_3: [X Y^3] F^3 = 3, [X Y^3] F^4 = 4
        assert_eq!(d.product(1, 3).unwrap(), &[int(0), int(0), int(0), int(3), int(4)]);
    }

    #[test]
    fn truncated_law_records_filtered_products_only() {
        let v: std::sync::Arc<[String]> = vec!["X".to_string(), "Y".to_string()].into();
        let terms = [(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![2, 1], int(1)), (vec![1, 2], int(1))];
        let s = MultiPoly::from_terms(BaseRing::Rationals, v, terms).unwrap();
        let law = FormalGroupLaw::new(BaseRing::Rationals, 3, &s).unwrap();
        assert!(!law.is_polynomial());
        let d = distributions(&law, 3).unwrap();
        assert!(d.product(1, 2).is_some());
        assert!(d.product(2, 2).is_none());
        assert!(all_pass(&d.axiom_checks()));
        assert!(distributions(&law, 4).is_err());
    }

    #[test]
    fn mod_p_restriction() {
        let law = interpolation_fgl(BaseRing::Integers, &int(1), 4).unwrap();
        let d = distributions(&law, 4).unwrap();
        let f2 = BaseRing::prime_field(2).unwrap();
        assert_eq!(d.restrict(f2, 4).unwrap().rank(), 4);
        // δ_1 δ_1 = δ_1 + 2δ_2 reduces into span{δ_0, δ_1} mod 2 but not over Z
        assert_eq!(d.restrict(f2, 2).unwrap().rank(), 2);
        assert!(d.restrict(BaseRing::Integers, 2).is_err());
        assert!(d.restrict(f2, 3).is_err());
    }
}
