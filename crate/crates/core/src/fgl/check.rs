use num_integer::binomial;
use serde::Serialize;

use super::dist::distributions;
use super::intvalued::intvalued_structure;
use super::law::interpolation_fgl;
use crate::circlehopf::{additive_truncation, group_algebra, GradedHopfAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{int, BaseRing, ExactMatrix};
use crate::report::Check;

/// One level `p^m` of the comparison.
#[derive(Clone, Debug, Serialize)]
pub struct LevelMatch {
    pub m: u32,
    pub rank: usize,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationReport {
    pub p: u64,
    pub order: u32,
    pub levels: Vec<LevelMatch>,
}

impl InterpolationReport {
    pub fn checks(&self) -> Vec<Check> {
        self.levels
            .iter()
            .flat_map(|l| {
                l.checks.iter().map(move |c| Check {
                    name: format!("p^m = {}: {}", l.rank, c.name),
                    ..c.clone()
                })
            })
            .collect()
    }
}

fn restricted(built: Result<GradedHopfAlgebra>, what: &str) -> std::result::Result<GradedHopfAlgebra, Check> {
    built.map_err(|e| Check::fail(format!("{what} reduces to a Hopf algebra"), e.to_string()))
}

/// Reduces the distributions of the multiplicative and additive laws mod `p`
/// and compares `δ_0..δ_{p^m - 1}` with the duals of `O(μ_{p^m})` and
/// `O(α_{p^m})` for every `p^m <= N`. On the multiplicative side
/// `δ_n ↦ Σ_a C(a, n) (U^a)^*`; on the additive side `δ_n ↦ (T^n)^*`.
pub fn cartier_interpolation_check(p: u64, order: u32) -> Result<InterpolationReport> {
    if !matches!(p, 2 | 3) {
        return Err(Error::OutOfRange(format!("p must be 2 or 3 (got {p})")));
    }
    if !(1..=6).contains(&order) {
        return Err(Error::OutOfRange(format!("N must lie in 1..=6 (got {order})")));
    }
    let fp = BaseRing::prime_field(p)?;
    let n = order.max(2);
    let mult = distributions(&interpolation_fgl(BaseRing::Integers, &int(1), n)?, n)?;
    let add = distributions(&interpolation_fgl(BaseRing::Integers, &int(0), n)?, n)?;
    let iv = intvalued_structure(n)?;
    let mut levels = Vec::new();
    let mut m = 0;
    while (p as u32).pow(m) <= order {
        let r = p.pow(m) as usize;
        let mut checks = Vec::new();
        let mu = group_algebra(fp, r)?.dual()?;
        let alpha = additive_truncation(fp, r as u32)?.dual()?;
        match (restricted(mult.restrict(fp, r), "multiplicative δ"), restricted(iv.restrict(fp, r), "c basis")) {
            (Ok(dm), Ok(dc)) => {
                let psi = ExactMatrix::from_fn(fp, r, r, |a, k| int(binomial(a as i64, k as i64)))?;
                checks.extend(dm.morphism_checks(&psi, &mu));
                checks.push(Check::from_bool("c constants mod p = δ constants", dc.same_constants(&dm), || {
                    "integer-valued basis and distributions differ mod p".into()
                }));
            }
            (a, b) => checks.extend([a.err(), b.err()].into_iter().flatten()),
        }
        match restricted(add.restrict(fp, r), "additive δ") {
            Ok(da) => checks.extend(da.morphism_checks(&ExactMatrix::identity(fp, r), &alpha)),
            Err(c) => checks.push(c),
        }
        levels.push(LevelMatch { m, rank: r, checks });
        m += 1;
    }
    Ok(InterpolationReport { p, order, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_pass;

    #[test]
    fn rank_two_match() {
        let r = cartier_interpolation_check(2, 2).unwrap();
        assert_eq!(r.levels.iter().map(|l| l.rank).collect::<Vec<_>>(), vec![1, 2]);
        assert!(all_pass(&r.checks()), "{:?}", r.checks());
    }

    #[test]
    fn order_one_is_the_unit_case() {
        let r = cartier_interpolation_check(3, 1).unwrap();
        assert_eq!(r.levels.len(), 1);
        assert!(all_pass(&r.checks()));
    }

    #[test]
    fn every_allowed_instance() {
        for p in [2, 3] {
            for n in 1..=6 {
                let r = cartier_interpolation_check(p, n).unwrap();
                assert!(all_pass(&r.checks()), "p={p} N={n}: {:?}", r.checks());
            }
        }
        assert!(cartier_interpolation_check(5, 2).is_err());
        assert!(cartier_interpolation_check(2, 7).is_err());
    }
}
