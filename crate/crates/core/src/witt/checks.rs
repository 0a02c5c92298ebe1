//! Kernel enumeration over finite rings and the field-point checks.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::carrier::{Carrier, FiniteRing, ScalarCarrier};
use super::vector::{Witt, WittVector, WittVectorJson};
use crate::error::{Error, Result};
use crate::exactalg::{int, BaseRing, CommRing, ExactMatrix, Scalar};
use crate::report::Check;

/// Maps whose kernels are enumerated. All of them are `gp_map(·, a)` for
/// `a = 1`, `a = 0` and a given `a`.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelMap<E> {
    FrobeniusMinusId,
    Frobenius,
    GpAt(E),
}

impl<E> KernelMap<E> {
    pub fn label(&self) -> &'static str {
        match self {
            KernelMap::FrobeniusMinusId => "frobenius_minus_id",
            KernelMap::Frobenius => "frobenius",
            KernelMap::GpAt(_) => "gp_at",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub ring: String,
    pub p: u64,
    pub m: usize,
    pub map: String,
    pub size: usize,
    pub is_subgroup: bool,
    pub is_cyclic: bool,
    /// Largest additive order of an element.
    pub exponent: usize,
    pub elements: Vec<WittVectorJson>,
}

/// Above this many candidate vectors enumeration is refused.
pub const ENUMERATION_BUDGET: usize = 2_000_000;

fn all_vectors<E: Clone>(elements: &[E], m: usize, first: &E) -> Vec<Vec<E>> {
    let n = elements.len();
    let mut out = Vec::with_capacity(n.pow(m as u32 - 1));
    let mut idx = vec![0usize; m - 1];
    loop {
        let mut v = Vec::with_capacity(m);
        v.push(first.clone());
        v.extend(idx.iter().map(|&i| elements[i].clone()));
        out.push(v);
        let mut k = 0;
        loop {
            if k == m - 1 {
                return out;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Every `w ∈ W_m(R)` with `map(w) = 0`, checked to form a subgroup.
pub fn enumerate_kernel<C>(witt: &Witt<'_, C>, map: &KernelMap<C::Elem>) -> Result<KernelReport>
where
    C: Carrier,
    C::Elem: Send + Sync,
{
    let carrier = witt.carrier();
    let elements = carrier.elements().ok_or(Error::NotFinite)?;
    let m = witt.m();
    let total = elements.len().checked_pow(m as u32).unwrap_or(usize::MAX);
    if total > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: format!("W_{m}({})", carrier.name()),
            dimension: total,
            budget: ENUMERATION_BUDGET,
        });
    }
    let a = match map {
        KernelMap::FrobeniusMinusId => carrier.one(),
        KernelMap::Frobenius => carrier.zero(),
        KernelMap::GpAt(a) => a.clone(),
    };
    let kernel: Vec<WittVector<C::Elem>> = elements
        .par_iter()
        .map(|first| -> Result<Vec<WittVector<C::Elem>>> {
            let mut hits = Vec::new();
            for coords in all_vectors(&elements, m, first) {
                let w = WittVector::new(coords);
                let image = witt.gp_map(&w, &a)?;
                if image.coords.iter().all(|x| carrier.is_zero(x)) {
                    hits.push(w);
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let is_subgroup = kernel.contains(&witt.zero())
        && kernel
            .iter()
            .all(|x| kernel.iter().all(|y| witt.sub(x, y).map(|d| kernel.contains(&d)).unwrap_or(false)));
    let zero = witt.zero();
    let mut exponent = 0;
    for x in &kernel {
        let mut acc = x.clone();
        let mut order = 1;
        while acc != zero {
            acc = witt.add(&acc, x)?;
            order += 1;
            if order > kernel.len() {
                break;
            }
        }
        exponent = exponent.max(order);
    }
    Ok(KernelReport {
        ring: carrier.name(),
        p: witt.p(),
        m,
        map: map.label().into(),
        size: kernel.len(),
        is_subgroup,
        is_cyclic: exponent == kernel.len(),
        exponent,
        elements: kernel.iter().map(|w| witt.to_json(w)).collect(),
    })
}

/// Inverts the ghost map over Q.
pub fn inverse_ghost(p: u64, omega: &[Scalar]) -> Vec<Scalar> {
    let mut lambda: Vec<Scalar> = Vec::with_capacity(omega.len());
    let pb = BigInt::from(p);
    for (i, w) in omega.iter().enumerate() {
        let mut rest = w.clone();
        for (j, l) in lambda.iter().enumerate() {
            let e = p.pow((i - j) as u32) as i32;
            rest -= Scalar::from_integer(pb.pow(j as u32)) * l.pow(e);
        }
        lambda.push(rest / Scalar::from_integer(pb.pow(i as u32)));
    }
    lambda
}

/// `F` and the restriction `R` as maps `Q^m -> Q^{m-1}` in ghost
/// coordinates.
fn ghost_linear_maps(m: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    let q = BaseRing::Rationals;
    let f = ExactMatrix::from_fn(q, m.saturating_sub(1), m, |i, j| int(i64::from(j == i + 1)))?;
    let r = ExactMatrix::from_fn(q, m.saturating_sub(1), m, |i, j| int(i64::from(j == i)))?;
    Ok((f, r))
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointsReport {
    pub p: u64,
    pub m: usize,
    /// Ghost-coordinate basis of `{F(w) = w}`.
    pub fixed_basis: Vec<Vec<String>>,
    /// Ghost-coordinate basis of `ker F`.
    pub kernel_basis: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

fn show_basis(b: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    b.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
}

/// Over Q, `Fix(F)` is the ghost diagonal and `ker F` is the first ghost
/// coordinate. Checked on the ghost-linear maps and, for sample points, on
/// the Witt polynomials themselves.
pub fn char_zero_fixed_points_check(p: u64, m: usize) -> Result<FixedPointsReport> {
    let q = ScalarCarrier(BaseRing::Rationals);
    let witt = Witt::new(&q, p, m)?;
    let law_ok = witt.law().naturality().failures.iter().all(|f| !f.contains("ghost(F)"));
    let (f, r) = ghost_linear_maps(m)?;
    let fixed = f.sub(&r)?.kernel_basis()?;
    let kernel = f.kernel_basis()?;
    let mut checks = vec![Check::from_bool("frobenius is the ghost shift", law_ok, || {
        "ghost(F)_i != ω_{i+1}".into()
    })];
    // the diagonal is one-dimensional and spanned by (1, ..., 1)
    let diag = fixed.len() == 1 && fixed[0].iter().all(|x| *x == fixed[0][0]) && !fixed[0][0].is_zero();
    let all_ga = m == 1 && fixed.len() == 1 && kernel.len() == 1;
    checks.push(Check::from_bool("fixed points are the ghost diagonal", diag || all_ga, || {
        format!("kernel of F - R has basis {:?}", show_basis(&fixed))
    }));
    let first = kernel.len() == 1 && kernel[0].iter().skip(1).all(Zero::is_zero);
    checks.push(Check::from_bool("ker F is the first ghost coordinate", first, || {
        format!("kernel of F has basis {:?}", show_basis(&kernel))
    }));
    if m >= 2 {
        let samples = [int(1), int(2), int(-3), Scalar::new(1.into(), 2.into())];
        let mut bad = Vec::new();
        for c in &samples {
            let w = WittVector::new(inverse_ghost(p, &vec![c.clone(); m]));
            let fw = witt.frobenius(&w)?;
            if fw.coords[..] != w.coords[..m - 1] {
                bad.push(format!("F(w) != w for ghost diagonal {c}"));
            }
            let mut om = vec![Scalar::zero(); m];
            om[0] = c.clone();
            let k = WittVector::new(inverse_ghost(p, &om));
            if witt.frobenius(&k)?.coords.iter().any(|x| !x.is_zero()) {
                bad.push(format!("F(w) != 0 for ghost vector ({c}, 0, ...)"));
            }
        }
        checks.push(if bad.is_empty() {
            Check::pass("Witt polynomials agree at sample points")
        } else {
            Check {
                name: "Witt polynomials agree at sample points".into(),
                verdict: crate::report::Verdict::Fail,
                diagnostics: bad,
            }
        });
    }
    Ok(FixedPointsReport {
        p,
        m,
        fixed_basis: show_basis(&fixed),
        kernel_basis: show_basis(&kernel),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldPointRow {
    pub field: String,
    /// `x^p`, `x^p - x`, `F` or `F - id`.
    pub map: String,
    /// `coordinate` or `witt`.
    pub level: String,
    pub domain_size: usize,
    pub image_size: usize,
    pub kernel_size: usize,
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub p: u64,
    pub m: usize,
    pub rows: Vec<FieldPointRow>,
    pub checks: Vec<Check>,
}

/// Witt-level image statistics are gathered only below this domain size.
const WITT_IMAGE_BUDGET: usize = 20_000;

/// The field points `(0, Q)`, `(1, Q)`, `(0, F_p)`, `(1, F_p)`: over Q the
/// ghost-linear maps `F` and `F - id` from `W^{(m+1)}` to `W^{(m)}` are
/// onto; over `F_{p^k}` (k <= 3) image counts are reported and the exact
/// finite-field facts asserted (Frobenius bijective, `x^p - x` has kernel
/// `F_p`, `|ker(F - id)| = p^m` on `W_m(F_p)`).
pub fn field_point_surjectivity_check(p: u64, m: usize) -> Result<SurjectivityReport> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let (f, r) = ghost_linear_maps(m + 1)?;
    let rank_f = f.rank()?;
    let rank_fr = f.sub(&r)?.rank()?;
    checks.push(Check::from_bool("(0, Q): F onto in ghost coordinates", rank_f == m, || {
        format!("rank {rank_f} < {m}")
    }));
    checks.push(Check::from_bool("(1, Q): F - id onto in ghost coordinates", rank_fr == m, || {
        format!("rank {rank_fr} < {m}")
    }));
    for k in 1..=3u32 {
        let field = FiniteRing::field(p, k)?;
        let q = field.size();
        let elems = field.elements().unwrap();
        let frob: Vec<u32> = elems.iter().map(|x| field.pow(x, p)).collect();
        let asch: Vec<u32> = elems.iter().map(|x| field.sub(&field.pow(x, p), x)).collect();
        for (name, image, kernel_want) in [("x^p", &frob, 1usize), ("x^p - x", &asch, p as usize)] {
            let mut img = image.clone();
            img.sort_unstable();
            img.dedup();
            let kernel = image.iter().filter(|&&y| y == 0).count();
            rows.push(FieldPointRow {
                field: field.name(),
                map: name.into(),
                level: "coordinate".into(),
                domain_size: q,
                image_size: img.len(),
                kernel_size: kernel,
                surjective: img.len() == q,
            });
            checks.push(Check::from_bool(
                format!("{name} on {}: kernel size {kernel_want}", field.name()),
                kernel == kernel_want && img.len() * kernel == q,
                || format!("kernel {kernel}, image {}", img.len()),
            ));
        }
        if q.pow(m as u32) > WITT_IMAGE_BUDGET {
            continue;
        }
        let witt = Witt::new(&field, p, m)?;
        for (name, a) in [("F", 0u32), ("F - id", field.one())] {
            let mut image = Vec::new();
            let mut kernel = 0usize;
            for first in &elems {
                for coords in all_vectors(&elems, m, first) {
                    let y = witt.gp_map(&WittVector::new(coords), &a)?;
                    if y.coords.iter().all(|c| *c == 0) {
                        kernel += 1;
                    }
                    image.push(y.coords);
                }
            }
            image.sort_unstable();
            image.dedup();
            let domain = q.pow(m as u32);
            rows.push(FieldPointRow {
                field: field.name(),
                map: name.into(),
                level: "witt".into(),
                domain_size: domain,
                image_size: image.len(),
                kernel_size: kernel,
                surjective: image.len() == domain,
            });
            let want = if a == 0 { 1 } else { (p as usize).pow(m as u32) };
            checks.push(Check::from_bool(
                format!("{name} on W_{m}({}): kernel size {want}", field.name()),
                kernel == want && image.len() * kernel == domain,
                || format!("kernel {kernel}, image {}", image.len()),
            ));
        }
    }
    Ok(SurjectivityReport { p, m, rows, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artin_schreier_witt_counts() {
        for p in [2u64, 3] {
            let fp = FiniteRing::field(p, 1).unwrap();
            for m in 1..=3 {
                let w = Witt::new(&fp, p, m).unwrap();
                let k = enumerate_kernel(&w, &KernelMap::FrobeniusMinusId).unwrap();
                assert_eq!(k.size, (p as usize).pow(m as u32), "p={p} m={m}");
                assert!(k.is_subgroup && k.is_cyclic);
            }
        }
    }

    #[test]
    fn f4_length_one() {
        let f4 = FiniteRing::field(2, 2).unwrap();
        let w = Witt::new(&f4, 2, 1).unwrap();
        let k = enumerate_kernel(&w, &KernelMap::FrobeniusMinusId).unwrap();
        assert_eq!(k.size, 2);
    }

    #[test]
    fn dual_numbers_frobenius_kernel() {
        let r = FiniteRing::dual_numbers(2).unwrap();
        let w = Witt::new(&r, 2, 1).unwrap();
        let k = enumerate_kernel(&w, &KernelMap::Frobenius).unwrap();
        let coords: Vec<String> = k.elements.iter().map(|e| e.coords[0].clone()).collect();
        assert_eq!(coords, vec!["0", "e"]);
    }

    #[test]
    fn infinite_ring_is_refused() {
        let z = ScalarCarrier(BaseRing::Integers);
        let w = Witt::new(&z, 2, 1).unwrap();
        assert!(matches!(enumerate_kernel(&w, &KernelMap::Frobenius), Err(Error::NotFinite)));
    }

    #[test]
    fn char_zero_degeneration() {
        for m in 1..=3 {
            let r = char_zero_fixed_points_check(2, m).unwrap();
            assert!(r.checks.iter().all(Check::passed), "{:?}", r.checks);
        }
        let r = char_zero_fixed_points_check(3, 2).unwrap();
        assert_eq!(r.fixed_basis, vec![vec!["1", "1"]]);
        assert_eq!(r.kernel_basis, vec![vec!["1", "0"]]);
    }

    #[test]
    fn inverse_ghost_round_trip() {
        let q = ScalarCarrier(BaseRing::Rationals);
        let w = Witt::new(&q, 3, 3).unwrap();
        let om = vec![int(2), int(-7), Scalar::new(5.into(), 3.into())];
        let v = WittVector::new(inverse_ghost(3, &om));
        assert_eq!(w.ghost(&v), om);
    }

    #[test]
    fn field_points() {
        let r = field_point_surjectivity_check(2, 2).unwrap();
        assert!(r.checks.iter().all(Check::passed), "{:?}", r.checks);
        let f2_as = r
            .rows
            .iter()
            .find(|row| row.field == "F_2" && row.map == "x^p - x")
            .unwrap();
        assert_eq!(f2_as.image_size, 1);
        assert!(!f2_as.surjective);
    }
}
