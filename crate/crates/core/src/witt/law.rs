//! Universal p-typical Witt polynomials, solved from the ghost equations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use log::debug;
use num_bigint::BigInt;
use serde::Serialize;

use super::intpoly::{IntPoly, MAX_EXP, MAX_VARS};
use crate::error::{Error, Result};
use crate::exactalg::{is_prime, var_names, MultiPoly};

pub const MAX_P: u64 = 7;
pub const MAX_M: usize = 5;

/// Sum, product, negation and Frobenius polynomials for `W_m` at the prime
/// `p`. `sum`/`product` are in `x_0..x_{m-1}, y_0..y_{m-1}`; `negation` and
/// `frobenius` in `x_0..x_{m-1}`; `frobenius` has `m - 1` components.
#[derive(Clone, Debug, Serialize)]
pub struct WittLaw {
    pub p: u64,
    pub m: usize,
    pub sum: Vec<MultiPoly>,
    pub product: Vec<MultiPoly>,
    pub negation: Vec<MultiPoly>,
    pub frobenius: Vec<MultiPoly>,
    #[serde(skip)]
    pub(crate) raw: RawLaw,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct RawLaw {
    pub sum: Vec<IntPoly>,
    pub product: Vec<IntPoly>,
    pub negation: Vec<IntPoly>,
    pub frobenius: Vec<IntPoly>,
}

/// `x_0..x_{m-1}, y_0..y_{m-1}`.
pub fn xy_vars(m: usize) -> Arc<[String]> {
    let mut v = var_names("x", m);
    v.extend(var_names("y", m));
    v.into()
}

pub fn x_vars(m: usize) -> Arc<[String]> {
    var_names("x", m).into()
}

/// `ω_i = Σ_{j≤i} p^j v_j^{p^{i-j}}` for the polynomials `v`.
pub(crate) fn ghost_component(p: u64, v: &[IntPoly], i: usize) -> IntPoly {
    let nvars = v[0].nvars();
    let mut acc = IntPoly::zero(nvars);
    let pb = BigInt::from(p);
    for (j, vj) in v.iter().enumerate().take(i + 1) {
        let e = p.pow((i - j) as u32);
        acc.add_assign_scaled(&vj.pow(e), &pb.pow(j as u32));
    }
    acc
}

/// Solves `Σ_{j≤i} p^j c_j^{p^{i-j}} = target_i` for `c_i`, dividing
/// exactly by `p^i`.
fn solve_next(p: u64, known: &[IntPoly], target: &IntPoly, names: &[String], what: &str) -> Result<IntPoly> {
    let i = known.len();
    let pb = BigInt::from(p);
    let mut rest = target.clone();
    for (j, cj) in known.iter().enumerate() {
        let e = p.pow((i - j) as u32);
        rest.add_assign_scaled(&cj.pow(e), &-pb.pow(j as u32));
    }
    rest.div_exact(&pb.pow(i as u32), names).map_err(|e| match e {
        Error::InexactDivision { divisor, term } => Error::Integrality {
            what: format!("{what}_{i} at p={p}"),
            detail: format!("division by {divisor} fails on term {term}"),
        },
        other => other,
    })
}

fn check_bounds(p: u64, m: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_P || m == 0 || m > MAX_M || 2 * m > MAX_VARS {
        return Err(Error::OutOfRange(format!(
            "Witt truncation p={p}, m={m} outside 2 <= p <= {MAX_P}, 1 <= m <= {MAX_M}"
        )));
    }
    if p.pow(m as u32 - 1) > MAX_EXP as u64 {
        return Err(Error::OutOfRange(format!("exponent p^(m-1) too large for p={p}, m={m}")));
    }
    Ok(())
}

/// Per-prime state, grown on demand.
#[derive(Default)]
struct Growing {
    raw: RawLaw,
    built: usize,
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<Mutex<Growing>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Mutex<Growing>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The Witt law for `(p, m)`. Construction fails with an integrality error
/// if any stage is not divisible by `p^i`; results are cached per prime.
pub fn build_witt_law(p: u64, m: usize) -> Result<Arc<WittLaw>> {
    check_bounds(p, m)?;
    let slot = cache().lock().unwrap().entry(p).or_default().clone();
    let mut g = slot.lock().unwrap();
    while g.built < m {
        extend(p, &mut g)?;
    }
    Ok(Arc::new(assemble(p, m, &g.raw)))
}

fn extend(p: u64, g: &mut Growing) -> Result<()> {
    let i = g.built;
    // variables for the largest truncation; shorter laws ignore the tail
    let half = MAX_M;
    let nv = 2 * half;
    let names: Vec<String> = {
        let mut v = var_names("x", half);
        v.extend(var_names("y", half));
        v
    };
    let xs: Vec<IntPoly> = (0..half).map(|j| IntPoly::var(nv, j)).collect();
    let ys: Vec<IntPoly> = (0..half).map(|j| IntPoly::var(nv, half + j)).collect();
    let wx = ghost_component(p, &xs, i);
    let wy = ghost_component(p, &ys, i);
    let s = solve_next(p, &g.raw.sum, &wx.add(&wy), &names, "S")?;
    let pr = solve_next(p, &g.raw.product, &wx.mul(&wy), &names, "P")?;
    let n = solve_next(p, &g.raw.negation, &wx.neg(), &names, "N")?;
    debug!("witt p={p} i={i}: |S|={} |P|={}", s.num_terms(), pr.num_terms());
    g.raw.sum.push(s);
    g.raw.product.push(pr);
    g.raw.negation.push(n);
    if i >= 1 {
        // F_{i-1} satisfies ghost_{i-1}(F) = ω_i
        let f = solve_next(p, &g.raw.frobenius, &wx, &names, "F")?;
        g.raw.frobenius.push(f);
    }
    g.built += 1;
    Ok(())
}

fn assemble(p: u64, m: usize, raw: &RawLaw) -> WittLaw {
    let half = MAX_M;
    let relabel = |q: &IntPoly, with_y: bool| -> IntPoly { q.restrict(half, m, with_y) };
    let raw = RawLaw {
        sum: raw.sum[..m].iter().map(|q| relabel(q, true)).collect(),
        product: raw.product[..m].iter().map(|q| relabel(q, true)).collect(),
        negation: raw.negation[..m].iter().map(|q| relabel(q, false)).collect(),
        frobenius: raw.frobenius[..m - 1].iter().map(|q| relabel(q, false)).collect(),
    };
    let (xy, x) = (xy_vars(m), x_vars(m));
    WittLaw {
        p,
        m,
        sum: raw.sum.iter().map(|q| q.to_multipoly(xy.clone())).collect(),
        product: raw.product.iter().map(|q| q.to_multipoly(xy.clone())).collect(),
        negation: raw.negation.iter().map(|q| q.to_multipoly(x.clone())).collect(),
        frobenius: raw.frobenius.iter().map(|q| q.to_multipoly(x.clone())).collect(),
        raw,
    }
}

/// Result of re-deriving the ghost identities from a finished law.
#[derive(Clone, Debug, Serialize)]
pub struct NaturalityReport {
    pub p: u64,
    pub m: usize,
    pub failures: Vec<String>,
}

impl WittLaw {
    /// Exact polynomial identities: ghost∘op = ghost-side op for add, mul,
    /// neg and the Frobenius shift, plus the weight identities behind
    /// `gm_action` (Teichmüller multiplication, additivity, and
    /// `F∘[a] = [a^p]∘F`).
    pub fn naturality(&self) -> NaturalityReport {
        let (p, m) = (self.p, self.m);
        let nv = 2 * m;
        let xs: Vec<IntPoly> = (0..m).map(|j| IntPoly::var(nv, j)).collect();
        let ys: Vec<IntPoly> = (0..m).map(|j| IntPoly::var(nv, m + j)).collect();
        let mut failures = Vec::new();
        let xs_only: Vec<IntPoly> = (0..m).map(|j| IntPoly::var(m, j)).collect();
        for i in 0..m {
            let wx = ghost_component(p, &xs, i);
            let wy = ghost_component(p, &ys, i);
            if ghost_component(p, &self.raw.sum, i) != wx.add(&wy) {
                failures.push(format!("ghost(S)_{i} != ghost(x)_{i} + ghost(y)_{i}"));
            }
            if ghost_component(p, &self.raw.product, i) != wx.mul(&wy) {
                failures.push(format!("ghost(P)_{i} != ghost(x)_{i} * ghost(y)_{i}"));
            }
            if ghost_component(p, &self.raw.negation, i) != ghost_component(p, &xs_only, i).neg() {
                failures.push(format!("ghost(N)_{i} != -ghost(x)_{i}"));
            }
            if i + 1 < m && ghost_component(p, &self.raw.frobenius, i) != ghost_component(p, &xs_only, i + 1) {
                failures.push(format!("ghost(F)_{i} != ghost(x)_{}", i + 1));
            }
        }
        // [a] acts by x_j -> a^{p^j} x_j, so each identity below says that
        // a component is weighted homogeneous of the right weight.
        let w_x: Vec<u64> = (0..m).map(|j| p.pow(j as u32)).collect();
        let w_xy: Vec<u64> = w_x.iter().chain(w_x.iter()).copied().collect();
        for i in 0..m {
            let target = p.pow(i as u32);
            if self.raw.sum[i].weighted_degrees(&w_xy) != [target] {
                failures.push(format!("[a] is not additive in component {i}"));
            }
            // P_i([a], x): only monomials free of y_1.. survive; they must be
            // a^{p^i} x_i after substituting y_0 = a
            let teich = self.raw.product[i].teichmuller_left(m);
            if teich != IntPoly::var(m + 1, m).pow(target).mul(&IntPoly::var(m + 1, i)) {
                failures.push(format!("[a]*x != gm_action(a, x) in component {i}"));
            }
        }
        for (i, f) in self.raw.frobenius.iter().enumerate() {
            if f.weighted_degrees(&w_x) != [p.pow(i as u32 + 1)] {
                failures.push(format!("F∘[a] != [a^p]∘F in component {i}"));
            }
        }
        NaturalityReport { p, m, failures }
    }
}

impl IntPoly {
    /// From the `x_0..x_{h-1}, y_0..y_{h-1}` layout to `m` (or `2m`) variables.
    fn restrict(&self, half: usize, m: usize, with_y: bool) -> IntPoly {
        let nv = if with_y { 2 * m } else { m };
        self.remap(nv, |e| {
            debug_assert!(e[m..half].iter().all(|&x| x == 0) && (with_y || e[half..].iter().all(|&x| x == 0)));
            let mut out = e[..m].to_vec();
            if with_y {
                out.extend_from_slice(&e[half..half + m]);
            }
            Some(out)
        })
    }

    /// Substitutes `x = (a, 0, ..., 0)` and renames `y_j -> x_j`; `a` becomes
    /// the last of `m + 1` variables.
    fn teichmuller_left(&self, m: usize) -> IntPoly {
        self.remap(m + 1, |e| {
            if e[1..m].iter().any(|&x| x > 0) {
                return None;
            }
            let mut out = e[m..2 * m].to_vec();
            out.push(e[0]);
            Some(out)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{BaseRing, PolyRing};

    fn show(q: &MultiPoly) -> String {
        q.to_string()
    }

    #[test]
    fn p2_m2_sum_and_product() {
        let law = build_witt_law(2, 2).unwrap();
        assert_eq!(show(&law.sum[0]), "x0 + y0");
        assert_eq!(show(&law.product[0]), "x0*y0");
        // S_1 = x_1 + y_1 - x_0 y_0
        let r = PolyRing::new(BaseRing::Integers, xy_vars(2));
        let (x0, x1, y0, y1) = (r.var(0), r.var(1), r.var(2), r.var(3));
        assert_eq!(law.sum[1], x1.add(&y1).sub(&x0.mul(&y0)));
        // P_1 = x_0^2 y_1 + x_1 y_0^2 + 2 x_1 y_1
        let two = crate::exactalg::int(2);
        let want = x0.pow(2).mul(&y1).add(&x1.mul(&y0.pow(2))).add(&x1.mul(&y1).scale(&two));
        assert_eq!(law.product[1], want);
    }

    #[test]
    fn frobenius_p2() {
        let law = build_witt_law(2, 2).unwrap();
        assert_eq!(law.frobenius.len(), 1);
        // F_0 = x_0^2 + 2 x_1
        assert_eq!(show(&law.frobenius[0]), "2*x1 + x0^2");
    }

    #[test]
    fn odd_negation_is_minus() {
        let law = build_witt_law(3, 3).unwrap();
        for (i, n) in law.negation.iter().enumerate() {
            let r = PolyRing::new(BaseRing::Integers, x_vars(3));
            assert_eq!(*n, r.var(i).neg());
        }
    }

    #[test]
    fn naturality_small() {
        for (p, m) in [(2, 3), (3, 3), (5, 2)] {
            let law = build_witt_law(p, m).unwrap();
            assert!(law.naturality().failures.is_empty(), "p={p} m={m}");
        }
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(build_witt_law(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(build_witt_law(11, 2), Err(Error::OutOfRange(_))));
        assert!(matches!(build_witt_law(2, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(build_witt_law(2, 6), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn prefix_is_stable() {
        let a = build_witt_law(2, 3).unwrap();
        let b = build_witt_law(2, 2).unwrap();
        // same S_1 whichever truncation is asked for first
        assert_eq!(a.sum[1].terms().count(), b.sum[1].terms().count());
        assert!(!a.sum[2].is_zero());
    }
}
