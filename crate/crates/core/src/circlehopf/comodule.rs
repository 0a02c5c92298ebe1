use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::hopf::{exterior, GradedHopfAlgebra};
use crate::complexes::{ChainComplex, Degreewise, MixedComplex};
use crate::error::Result;
use crate::exactalg::{int, ExactMatrix};
use crate::report::Check;

/// A left coaction `ρ(x) = Σ_a e_a ⊗ ρ_a(x)` of a Hopf algebra `H` on a
/// chain complex; `comps[a][n] : X_n -> X_{n - |e_a|}`.
struct Coaction {
    comps: Vec<Degreewise>,
}

fn component(c: &Coaction, x: &ChainComplex, a: usize, shift: i64, n: i64) -> ExactMatrix {
    c.comps[a]
        .get(&n)
        .cloned()
        .unwrap_or_else(|| ExactMatrix::zeros(x.ring(), x.rank(n - shift), x.rank(n)))
}

fn degrees(x: &ChainComplex) -> Vec<i64> {
    x.support().map(|(lo, hi)| (lo..=hi).collect()).unwrap_or_default()
}

/// Coassociativity, counit and chain-map conditions, each as matrix
/// identities in every degree.
fn coaction_checks(h: &GradedHopfAlgebra, x: &ChainComplex, c: &Coaction, label: &str) -> Result<Vec<Check>> {
    let n = h.rank();
    let deg: Vec<i64> = h.basis().iter().map(|b| b.degree).collect();
    let d = h.data();
    let ring = x.ring();
    let mut coassoc = None;
    let mut counit = None;
    let mut chain = None;
    for k in degrees(x) {
        for b in 0..n {
            for cc in 0..n {
                // Σ_a Δ(e_a)_{b,c} ρ_a = ρ_c ∘ ρ_b
                let tgt = k - deg[b] - deg[cc];
                let mut lhs = ExactMatrix::zeros(ring, x.rank(tgt), x.rank(k));
                for a in 0..n {
                    let coef = &d.comul[a][b * n + cc];
                    if !coef.is_zero() && deg[a] == deg[b] + deg[cc] {
                        lhs = lhs.add(&component(c, x, a, deg[a], k).scale(coef))?;
                    }
                }
                let rhs = component(c, x, cc, deg[cc], k - deg[b]).mul(&component(c, x, b, deg[b], k))?;
                if lhs != rhs && coassoc.is_none() {
                    coassoc = Some(format!("degree {k}, components ({b}, {cc})"));
                }
            }
        }
        let mut id = ExactMatrix::zeros(ring, x.rank(k), x.rank(k));
        for a in (0..n).filter(|&a| deg[a] == 0) {
            id = id.add(&component(c, x, a, 0, k).scale(&d.counit[a]))?;
        }
        if id != ExactMatrix::identity(ring, x.rank(k)) && counit.is_none() {
            counit = Some(format!("degree {k}"));
        }
        for a in 0..n {
            // d(e_a ⊗ y) = (-1)^{|e_a|} e_a ⊗ dy
            let sign = if deg[a].rem_euclid(2) == 1 { int(-1) } else { int(1) };
            let lhs = x.differential(k - deg[a]).mul(&component(c, x, a, deg[a], k))?.scale(&sign);
            let rhs = component(c, x, a, deg[a], k - 1).mul(&x.differential(k))?;
            if lhs != rhs && chain.is_none() {
                chain = Some(format!("degree {k}, component {a}"));
            }
        }
    }
    let mk = |what: &str, bad: Option<String>| {
        Check::from_bool(format!("{label}: {what}"), bad.is_none(), || bad.clone().unwrap())
    };
    Ok(vec![
        mk("coaction is coassociative", coassoc),
        mk("coaction is counital", counit),
        mk("coaction is a chain map", chain),
    ])
}

/// `ρ(x) = 1* ⊗ x + ε* ⊗ Bx` for the dual exterior algebra.
fn coaction_of(m: &MixedComplex) -> Coaction {
    let x = m.underlying();
    let mut id = Degreewise::new();
    let mut b = Degreewise::new();
    for k in degrees(x) {
        id.insert(k, ExactMatrix::identity(x.ring(), x.rank(k)));
        b.insert(k, m.b_op(k));
    }
    Coaction { comps: vec![id, b] }
}

/// Offsets of the nonzero blocks `X_i ⊗ Y_{n-i}` inside `(X ⊗ Y)_n`, as laid
/// out by `ChainComplex::tensor`.
fn blocks(x: &ChainComplex, y: &ChainComplex, n: i64) -> Vec<(i64, usize)> {
    let Some((lo, hi)) = x.support() else {
        return Vec::new();
    };
    let mut off = 0;
    let mut out = Vec::new();
    for i in lo..=hi {
        let r = x.rank(i) * y.rank(n - i);
        if r > 0 {
            out.push((i, off));
            off += r;
        }
    }
    out
}

/// Tensor coaction `Σ (-1)^{|x'||e_b|} e_a e_b ⊗ x' ⊗ y'`.
fn tensor_coaction(h: &GradedHopfAlgebra, x: &ChainComplex, cx: &Coaction, y: &ChainComplex, cy: &Coaction, xy: &ChainComplex) -> Result<Coaction> {
    let n = h.rank();
    let deg: Vec<i64> = h.basis().iter().map(|b| b.degree).collect();
    let ring = x.ring();
    let mut comps = vec![Degreewise::new(); n];
    for k in degrees(xy) {
        let src = blocks(x, y, k);
        for (c, comp) in comps.iter_mut().enumerate() {
            let tgt_deg = k - deg[c];
            let tgt = blocks(x, y, tgt_deg);
            let mut m = ExactMatrix::zeros(ring, xy.rank(tgt_deg), xy.rank(k));
            for &(i, c0) in &src {
                let j = k - i;
                for a in 0..n {
                    for b in 0..n {
                        let coef = &h.data().mul[a * n + b][c];
                        if coef.is_zero() {
                            continue;
                        }
                        let ti = i - deg[a];
                        let Some(&(_, r0)) = tgt.iter().find(|(t, _)| *t == ti) else {
                            continue;
                        };
                        let sign = if (ti * deg[b]).rem_euclid(2) == 1 { int(-1) } else { int(1) };
                        let block = component(cx, x, a, deg[a], i)
                            .kron(&component(cy, y, b, deg[b], j))?
                            .scale(&(coef * sign));
                        let mut full = ExactMatrix::zeros(ring, m.rows(), m.cols());
                        full.set_block(r0, c0, &block);
                        m = m.add(&full)?;
                    }
                }
            }
            comp.insert(k, m);
        }
    }
    Ok(Coaction { comps })
}

/// `B_X ⊗ 1 + (-1)^{|x|} 1 ⊗ B_Y` on `X ⊗ Y`.
fn leibniz_b(x: &MixedComplex, y: &MixedComplex, xy: &ChainComplex) -> Result<Degreewise> {
    let (ux, uy) = (x.underlying(), y.underlying());
    let mut out = Degreewise::new();
    for k in degrees(xy) {
        let tgt = blocks(ux, uy, k + 1);
        let mut m = ExactMatrix::zeros(xy.ring(), xy.rank(k + 1), xy.rank(k));
        for (i, c0) in blocks(ux, uy, k) {
            let j = k - i;
            if let Some(&(_, r0)) = tgt.iter().find(|(t, _)| *t == i + 1) {
                let blk = x.b_op(i).kron(&ExactMatrix::identity(xy.ring(), uy.rank(j)))?;
                m.set_block(r0, c0, &blk);
            }
            if let Some(&(_, r0)) = tgt.iter().find(|(t, _)| *t == i) {
                let sign = if i.rem_euclid(2) == 1 { int(-1) } else { int(1) };
                let blk = ExactMatrix::identity(xy.ring(), ux.rank(i)).kron(&y.b_op(j))?.scale(&sign);
                m.set_block(r0, c0, &blk);
            }
        }
        out.insert(k, m);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComoduleReport {
    pub samples: usize,
    pub pairs: usize,
    pub checks: Vec<Check>,
}

/// Mixed complexes as strict comodules over the dual exterior algebra
/// (`ε*` primitive in degree -1), and the monoidal structure coming from
/// `ε ↦ ε ⊗ 1 + 1 ⊗ ε`.
pub fn strict_mixed_category_check(samples: &[MixedComplex]) -> Result<ComoduleReport> {
    let mut checks = Vec::new();
    let mut pairs = 0;
    let mut hopf: BTreeMap<String, GradedHopfAlgebra> = BTreeMap::new();
    let mut lambda_for = |m: &MixedComplex| -> Result<GradedHopfAlgebra> {
        let key = m.underlying().ring().to_string();
        if let Some(h) = hopf.get(&key) {
            return Ok(h.clone());
        }
        let h = exterior(m.underlying().ring(), 1, 1)?.dual()?;
        hopf.insert(key, h.clone());
        Ok(h)
    };
    for (s, m) in samples.iter().enumerate() {
        let h = lambda_for(m)?;
        let c = coaction_of(m);
        checks.extend(coaction_checks(&h, m.underlying(), &c, &format!("sample {s}"))?);
        // the coaction is determined by its ε*-component, which gives B back
        let round_trip = degrees(m.underlying()).iter().all(|&k| component(&c, m.underlying(), 1, -1, k) == m.b_op(k));
        checks.push(Check::from_bool(format!("sample {s}: B recovered from the coaction"), round_trip, || {
            "ε*-component differs from B".into()
        }));
    }
    for (i, x) in samples.iter().enumerate() {
        for (j, y) in samples.iter().enumerate().skip(i) {
            if x.underlying().ring() != y.underlying().ring() {
                continue;
            }
            pairs += 1;
            let h = lambda_for(x)?;
            let xy = x.underlying().tensor(y.underlying())?;
            let label = format!("samples {i} ⊗ {j}");
            let rho = tensor_coaction(&h, x.underlying(), &coaction_of(x), y.underlying(), &coaction_of(y), &xy)?;
            checks.extend(coaction_checks(&h, &xy, &rho, &label)?);
            let b = leibniz_b(x, y, &xy)?;
            let matches = degrees(&xy).iter().all(|&k| component(&rho, &xy, 1, -1, k) == b[&k]);
            checks.push(Check::from_bool(format!("{label}: tensor coaction gives B⊗1 + 1⊗B"), matches, || {
                "ε*-component of the tensor coaction differs from the Leibniz formula".into()
            }));
            let mixed = MixedComplex::new(xy.clone(), b);
            checks.push(Check::from_bool(format!("{label}: Leibniz B is a mixed structure"), mixed.is_ok(), || {
                mixed.err().map(|e| e.to_string()).unwrap_or_default()
            }));
        }
    }
    Ok(ComoduleReport {
        samples: samples.len(),
        pairs,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::BaseRing;
    use crate::hochschild::{DeRhamData, FPGradedAlgebra};
    use crate::report::all_pass;

    fn de_rham(s: &str, d: u32) -> MixedComplex {
        DeRhamData::build(&FPGradedAlgebra::parse(s).unwrap(), d).unwrap().mixed().unwrap()
    }

    #[test]
    fn point_and_de_rham_samples() {
        let point = MixedComplex::new(ChainComplex::point(BaseRing::Rationals), Degreewise::new()).unwrap();
        let samples = vec![point, de_rham("Q[x]", 2), de_rham("Q[x,y]", 2)];
        let r = strict_mixed_category_check(&samples).unwrap();
        assert_eq!(r.pairs, 6);
        assert!(all_pass(&r.checks), "{:?}", r.checks.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
    }

    #[test]
    fn non_square_zero_operator_breaks_coassociativity() {
        // X = Q in degrees 0, 1, 2 with B = identity maps: B² != 0
        let ring = BaseRing::Rationals;
        let x = ChainComplex::new(ring, [(0, 1), (1, 1), (2, 1)].into(), Degreewise::new()).unwrap();
        let one = ExactMatrix::identity(ring, 1);
        let c = Coaction {
            comps: vec![
                [(0, one.clone()), (1, one.clone()), (2, one.clone())].into(),
                [(0, one.clone()), (1, one.clone())].into(),
            ],
        };
        let h = exterior(ring, 1, 1).unwrap().dual().unwrap();
        let checks = coaction_checks(&h, &x, &c, "bad").unwrap();
        assert!(!checks[0].passed());
        assert!(checks[1].passed());
    }
}
