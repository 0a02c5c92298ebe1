use std::collections::BTreeMap;

use serde::Serialize;

use super::algebra::FPGradedAlgebra;
use super::bar::HochschildSlice;
use super::derham::{truncated_de_rham_homology, DeRhamData};
use crate::complexes::{FilteredComplex, GradedComplex, GroupReport, MixedComplex};
use crate::error::{Error, Result};
use crate::exactalg::BaseRing;
use crate::report::Check;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HCRow {
    pub n: i64,
    pub internal_degree: u32,
    pub group: GroupReport,
    /// Unchanged when the `u`-truncation order grows by one.
    pub stable: bool,
}

/// Degrees `n >= top + 2 - 2U` see every `u`-power that the untruncated
/// product totalization would, so their homology is final.
fn certified_low(top: i64, u_order: usize) -> i64 {
    top + 2 - 2 * u_order as i64
}

fn u_rows(m: &MixedComplex, u_order: usize, d: u32) -> Result<Vec<HCRow>> {
    let Some((_, top)) = m.underlying().support() else {
        return Ok(Vec::new());
    };
    let lo = certified_low(top, u_order);
    Ok(m.u_homology(u_order, lo, top)?
        .into_iter()
        .map(|r| HCRow {
            n: r.degree,
            internal_degree: d,
            group: r.group,
            stable: r.stable,
        })
        .collect())
}

/// Bar-model `HC⁻` in internal degree `d`, over the window where the
/// `U`-truncation is exact.
pub fn hc_minus(alg: &FPGradedAlgebra, u_order: usize, d: u32) -> Result<Vec<HCRow>> {
    let m = HochschildSlice::build(alg, d, None)?.mixed()?;
    u_rows(&m, u_order, d)
}

/// `HC⁻` of the de Rham mixed complex `(Ω, 0, d_dR)`.
pub fn hc_minus_de_rham(alg: &FPGradedAlgebra, u_order: usize, d: u32) -> Result<Vec<HCRow>> {
    let m = DeRhamData::build(alg, d)?.mixed()?;
    u_rows(&m, u_order, d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrRow {
    pub weight: i64,
    pub n: i64,
    pub internal_degree: u32,
    pub group: GroupReport,
}

/// De Rham model of filtered `HC⁻` in one internal degree: the total
/// complex of `(Ω[[u]]/u^U, u·d_dR)` filtered by Hodge weight `q - j` of
/// `u^j Ω^q`.
#[derive(Clone, Debug)]
pub struct FilteredHcMinus {
    pub internal_degree: u32,
    pub u_order: usize,
    pub filtered: FilteredComplex,
    pub graded: GradedComplex,
    pub rows: Vec<GrRow>,
    pub checks: Vec<Check>,
}

fn nonzero(rows: Vec<(i64, GroupReport)>) -> Vec<(i64, GroupReport)> {
    rows.into_iter().filter(|(_, h)| !h.is_zero()).collect()
}

/// Builds the filtered model and checks `gr^i ≅ Ω^{≥i}[2i - q]` for every
/// `i` in `levels`. Needs `i + U - 1 >=` the top form degree.
pub fn filtered_hc_minus_dr_model(
    alg: &FPGradedAlgebra,
    u_order: usize,
    d: u32,
    levels: std::ops::RangeInclusive<i64>,
) -> Result<FilteredHcMinus> {
    if !matches!(alg.ring(), BaseRing::Rationals | BaseRing::PrimeField { .. }) {
        return Err(Error::FieldRequired(alg.ring().to_string()));
    }
    let dr = DeRhamData::build(alg, d)?;
    let top = dr.top_form_degree() as i64;
    let total = dr.mixed()?.total_u_complex(u_order)?;
    let labels: BTreeMap<i64, Vec<i64>> = total
        .ranks()
        .keys()
        .map(|&n| (n, total.weights(n).unwrap().to_vec()))
        .collect();
    let filtered = FilteredComplex::by_labels(&total, &labels)?;
    let graded = filtered.associated_graded()?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for i in levels {
        if i + u_order as i64 - 1 < top {
            return Err(Error::OutOfRange(format!(
                "gr^{i} needs u-order at least {} to contain every form degree",
                top - i + 1
            )));
        }
        let got = match graded.piece(i) {
            Some(c) => nonzero(c.homology_all()?),
            None => Vec::new(),
        };
        let want = truncated_de_rham_homology(alg, i, d)?;
        for (n, g) in &got {
            rows.push(GrRow {
                weight: i,
                n: *n,
                internal_degree: d,
                group: g.clone(),
            });
        }
        checks.push(Check::from_bool(format!("gr^{i} in internal degree {d}"), got == want, || {
            format!("gr^{i} homology {got:?}, truncated de Rham {want:?}")
        }));
    }
    Ok(FilteredHcMinus {
        internal_degree: d,
        u_order,
        filtered,
        graded,
        rows,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub n: i64,
    pub internal_degree: u32,
    pub bar: GroupReport,
    pub de_rham: GroupReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub algebra: String,
    pub u_order: usize,
    pub rows: Vec<ComparisonRow>,
    pub checks: Vec<Check>,
}

/// Compares bar-model `HC⁻` with the underlying object of the filtered de
/// Rham model, per internal degree `d <= max_degree`, on the exact window.
/// Mismatches fail in characteristic 0 and are flagged `not-verified`
/// otherwise.
pub fn comparison_map_check(alg: &FPGradedAlgebra, u_order: usize, max_degree: u32) -> Result<ComparisonReport> {
    if !alg.is_smooth() {
        return Err(Error::Unsupported("comparison implemented for smooth discrete algebras only".into()));
    }
    let char_zero = alg.ring().characteristic() == 0;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for d in 0..=max_degree {
        let bar = hc_minus(alg, u_order, d)?;
        let model = filtered_hc_minus_dr_model(alg, u_order, d, 0..=0)?;
        let underlying = model.filtered.level(model.filtered.start());
        let lo = certified_low(d as i64, u_order);
        let mut mismatches = Vec::new();
        for r in bar.iter().filter(|r| r.n >= lo) {
            let other = underlying.homology(r.n)?;
            if other != r.group {
                mismatches.push(format!("degree {}: bar {} vs de Rham {}", r.n, r.group, other));
            }
            rows.push(ComparisonRow {
                n: r.n,
                internal_degree: d,
                bar: r.group.clone(),
                de_rham: other,
            });
        }
        let name = format!("HC- two-model agreement in internal degree {d}");
        checks.push(if mismatches.is_empty() {
            Check::pass(name)
        } else if char_zero {
            Check::fail(name, mismatches.join("; "))
        } else {
            Check::not_verified(name, format!("mismatch in positive characteristic: {}", mismatches.join("; ")))
        });
    }
    Ok(ComparisonReport {
        algebra: alg.to_string(),
        u_order,
        rows,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_pass;

    fn alg(s: &str) -> FPGradedAlgebra {
        FPGradedAlgebra::parse(s).unwrap()
    }

    #[test]
    fn ground_field_is_a_u_tower() {
        let rows = hc_minus(&alg("Q"), 4, 0).unwrap();
        for r in &rows {
            assert!(r.stable);
            let want = usize::from(r.n <= 0 && r.n % 2 == 0);
            assert_eq!(r.group, GroupReport::free(want), "degree {}", r.n);
        }
        assert_eq!(rows.first().unwrap().n, -6);
    }

    #[test]
    fn line_models_agree_in_degree_one() {
        let a = alg("Q[x]");
        let bar = hc_minus(&a, 4, 1).unwrap();
        let dr = hc_minus_de_rham(&a, 4, 1).unwrap();
        for r in &bar {
            if let Some(s) = dr.iter().find(|s| s.n == r.n) {
                assert_eq!(r.group, s.group, "degree {}", r.n);
            }
        }
        // internal degree 1: only x dx ... survives: HC⁻_1 = Q
        let one = bar.iter().find(|r| r.n == 1).unwrap();
        assert_eq!(one.group, GroupReport::free(1));
    }

    #[test]
    fn stable_window_is_stable() {
        for r in hc_minus(&alg("Q[x,y]"), 3, 2).unwrap() {
            assert!(r.stable, "degree {}", r.n);
        }
    }

    #[test]
    fn graded_pieces_of_the_line() {
        let a = alg("Q[x]");
        for d in 0..=4 {
            let m = filtered_hc_minus_dr_model(&a, 3, d, 0..=2).unwrap();
            assert!(all_pass(&m.checks), "{:?}", m.checks);
        }
        // gr^1 is Q[x]dx in degree 1
        let m = filtered_hc_minus_dr_model(&a, 3, 2, 1..=1).unwrap();
        assert_eq!(m.rows, vec![GrRow { weight: 1, n: 1, internal_degree: 2, group: GroupReport::free(1) }]);
    }

    #[test]
    fn graded_pieces_of_the_point() {
        // u^j has weight -j and degree -2j
        let m = filtered_hc_minus_dr_model(&alg("Q"), 4, 0, -3..=0).unwrap();
        assert!(all_pass(&m.checks));
        let degrees: Vec<(i64, i64)> = m.rows.iter().map(|r| (r.weight, r.n)).collect();
        assert_eq!(degrees, vec![(-3, -6), (-2, -4), (-1, -2), (0, 0)]);
    }

    #[test]
    fn graded_pieces_mod_three() {
        let a = alg("F_3[x]");
        for d in 0..=4 {
            let m = filtered_hc_minus_dr_model(&a, 3, d, 0..=2).unwrap();
            assert!(all_pass(&m.checks), "{:?}", m.checks);
        }
    }

    #[test]
    fn comparison_on_the_line_and_plane() {
        assert!(all_pass(&comparison_map_check(&alg("Q"), 3, 0).unwrap().checks));
        assert!(all_pass(&comparison_map_check(&alg("Q[x]"), 4, 4).unwrap().checks));
        assert!(all_pass(&comparison_map_check(&alg("Q[x,y]"), 3, 3).unwrap().checks));
    }

    #[test]
    fn singular_comparison_is_refused() {
        assert!(comparison_map_check(&alg("Q[x]/(x^2)"), 2, 2).is_err());
    }
}
