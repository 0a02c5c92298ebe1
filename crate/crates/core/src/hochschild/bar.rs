use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::algebra::{FPGradedAlgebra, Products};
use crate::complexes::{ChainComplex, Degreewise, GroupReport, MixedComplex};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, ExactMatrix, Scalar};

/// Default bound on the rank of one chain group; `HKRLAB_BUDGET` overrides.
pub const DEFAULT_SLICE_BUDGET: usize = 6000;

pub fn slice_budget() -> usize {
    crate::env_budget(DEFAULT_SLICE_BUDGET)
}

/// A basis element `a_0 ⊗ a_1 ⊗ ... ⊗ a_n`; each factor is
/// `(degree, index into the monomial basis of that degree)`.
pub type BarTuple = Vec<(u32, u32)>;

/// Normalized cyclic bar complex `C_n = A ⊗ Ā^{⊗n}` in one internal degree.
#[derive(Clone, Debug)]
pub struct HochschildSlice {
    pub ring: BaseRing,
    pub internal_degree: u32,
    /// Highest chain degree built.
    pub top: usize,
    /// True when every nonzero `C_n` was built (`top >= internal degree`).
    pub full: bool,
    pub bases: Vec<Vec<BarTuple>>,
    /// `b[n] : C_n -> C_{n-1}`; `b[0]` is the zero map to nothing.
    pub b: Vec<ExactMatrix>,
    /// `connes[n] : C_n -> C_{n+1}` for `n < top`.
    pub connes: Vec<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HHRow {
    pub n: i64,
    pub internal_degree: u32,
    pub group: GroupReport,
}

fn enumerate(p: &Products, d: u32, n: usize) -> Vec<BarTuple> {
    fn rec(p: &Products, left: u32, slots: usize, cur: &mut BarTuple, out: &mut Vec<BarTuple>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // every bar factor has degree >= 1
        let max = left.saturating_sub(slots as u32 - 1);
        for k in 1..=max {
            for i in 0..p.dim(k) as u32 {
                cur.push((k, i));
                rec(p, left - k, slots - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for d0 in 0..=d {
        for i in 0..p.dim(d0) as u32 {
            let mut cur = vec![(d0, i)];
            rec(p, d - d0, n, &mut cur, &mut out);
        }
    }
    out
}

/// Rank of `C_n` in internal degree `d`, without enumerating.
fn count(alg: &FPGradedAlgebra, d: u32, n: usize) -> u128 {
    // ways[s] = number of bar words of the current length and total degree s
    let dims: Vec<u128> = (0..=d).map(|k| alg.dim(k as u64) as u128).collect();
    let mut ways = vec![0u128; d as usize + 1];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; d as usize + 1];
        for s in 0..=d as usize {
            if ways[s] == 0 {
                continue;
            }
            for k in 1..=(d as usize - s) {
                next[s + k] = next[s + k].saturating_add(ways[s].saturating_mul(dims[k]));
            }
        }
        ways = next;
    }
    (0..=d as usize).map(|d0| dims[d0].saturating_mul(ways[d as usize - d0])).sum()
}

impl HochschildSlice {
    /// Builds `C_0 .. C_top` in internal degree `d`; `top = None` builds every
    /// nonzero chain group.
    pub fn build(alg: &FPGradedAlgebra, d: u32, top: Option<usize>) -> Result<Self> {
        let full_top = d as usize;
        let top = top.map_or(full_top, |t| t.min(full_top));
        let budget = slice_budget();
        for n in 0..=top {
            let c = count(alg, d, n);
            if c > budget as u128 {
                return Err(Error::Budget {
                    what: format!("Hochschild chain group C_{n} in internal degree {d}"),
                    dimension: c.min(usize::MAX as u128) as usize,
                    budget,
                });
            }
        }
        let ring = alg.ring();
        let mut prods = Products::new(alg, d as u64);
        let bases: Vec<Vec<BarTuple>> = (0..=top).map(|n| enumerate(&prods, d, n)).collect();
        let index: Vec<HashMap<BarTuple, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let mut b = vec![ExactMatrix::zeros(ring, 0, bases[0].len())];
        for n in 1..=top {
            b.push(hochschild_b(ring, &mut prods, &bases[n], &index[n - 1], n)?);
        }
        let mut connes = Vec::new();
        for n in 0..top {
            connes.push(connes_b(ring, &bases[n], &index[n + 1], n)?);
        }
        Ok(HochschildSlice {
            ring,
            internal_degree: d,
            top,
            full: top == full_top,
            bases,
            b,
            connes,
        })
    }

    pub fn rank(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, Vec::len)
    }

    /// The b-complex in degrees `0..=top`.
    pub fn complex(&self) -> Result<ChainComplex> {
        let ranks = (0..=self.top).map(|n| (n as i64, self.rank(n))).collect();
        let diffs: Degreewise = (1..=self.top).map(|n| (n as i64, self.b[n].clone())).collect();
        ChainComplex::new(self.ring, ranks, diffs)
    }

    /// `(C, b, B)`; needs the full slice.
    pub fn mixed(&self) -> Result<MixedComplex> {
        if !self.full {
            return Err(Error::OutOfRange(format!(
                "mixed structure needs the full slice up to degree {}",
                self.internal_degree
            )));
        }
        let bs: Degreewise = self.connes.iter().enumerate().map(|(n, m)| (n as i64, m.clone())).collect();
        MixedComplex::new(self.complex()?, bs)
    }

    /// Checks b² = 0, B² = 0 and bB + Bb = 0 on the stored range.
    pub fn identities_hold(&self) -> Result<bool> {
        for n in 2..=self.top {
            if !self.b[n - 1].mul(&self.b[n])?.is_zero() {
                return Ok(false);
            }
        }
        for n in 0..self.top.saturating_sub(1) {
            if !self.connes[n + 1].mul(&self.connes[n])?.is_zero() {
                return Ok(false);
            }
        }
        // on C_n the identity needs B_{n-1}, b_n, B_n and b_{n+1}
        for n in 0..self.top {
            let bb = self.b[n + 1].mul(&self.connes[n])?;
            let rhs = if n == 0 {
                ExactMatrix::zeros(self.ring, self.rank(n), self.rank(n))
            } else {
                self.connes[n - 1].mul(&self.b[n])?
            };
            if !bb.add(&rhs)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates of a tuple in `C_n`.
    pub fn index_of(&self, n: usize, t: &BarTuple) -> Option<usize> {
        self.bases.get(n)?.iter().position(|x| x == t)
    }
}

fn sign(k: usize) -> Scalar {
    Scalar::from_integer(if k % 2 == 0 { 1.into() } else { (-1).into() })
}

fn accumulate(ring: BaseRing, col: &mut BTreeMap<usize, Scalar>, row: usize, c: &Scalar) {
    let e = col.entry(row).or_insert_with(Scalar::zero);
    *e = ring.add(e, c);
}

fn dense(ring: BaseRing, rows: usize, cols: Vec<BTreeMap<usize, Scalar>>) -> Result<ExactMatrix> {
    let mut data = vec![Scalar::zero(); rows * cols.len()];
    let ncols = cols.len();
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col {
            data[i * ncols + j] = v;
        }
    }
    ExactMatrix::new(ring, rows, ncols, data)
}

/// `b(a_0 ⊗ ... ⊗ a_n) = Σ_{i<n} (-1)^i ... a_i a_{i+1} ... + (-1)^n a_n a_0 ⊗ ...`.
fn hochschild_b(
    ring: BaseRing,
    prods: &mut Products,
    source: &[BarTuple],
    target: &HashMap<BarTuple, usize>,
    n: usize,
) -> Result<ExactMatrix> {
    let mut cols = Vec::with_capacity(source.len());
    for t in source {
        let mut col = BTreeMap::new();
        for i in 0..n {
            let (x, y) = (t[i], t[i + 1]);
            let deg = x.0 + y.0;
            let prod = prods.mul(x, y).to_vec();
            for (k, c) in prod {
                let mut u: BarTuple = Vec::with_capacity(n);
                u.extend_from_slice(&t[..i]);
                u.push((deg, k as u32));
                u.extend_from_slice(&t[i + 2..]);
                let row = target[&u];
                accumulate(ring, &mut col, row, &(c * sign(i)));
            }
        }
        let (x, y) = (t[n], t[0]);
        let deg = x.0 + y.0;
        for (k, c) in prods.mul(x, y).to_vec() {
            let mut u: BarTuple = vec![(deg, k as u32)];
            u.extend_from_slice(&t[1..n]);
            let row = target[&u];
            accumulate(ring, &mut col, row, &(c * sign(n)));
        }
        cols.push(col);
    }
    dense(ring, target.len(), cols)
}

/// `B(a_0 ⊗ ... ⊗ a_n) = Σ_i (-1)^{ni} 1 ⊗ a_i ⊗ ... ⊗ a_n ⊗ a_0 ⊗ ... ⊗ a_{i-1}`;
/// terms with a scalar in a bar slot vanish.
fn connes_b(ring: BaseRing, source: &[BarTuple], target: &HashMap<BarTuple, usize>, n: usize) -> Result<ExactMatrix> {
    let mut cols = Vec::with_capacity(source.len());
    for t in source {
        let mut col = BTreeMap::new();
        if t[0].0 > 0 {
            for i in 0..=n {
                let mut u: BarTuple = vec![(0, 0)];
                u.extend_from_slice(&t[i..]);
                u.extend_from_slice(&t[..i]);
                let row = target[&u];
                accumulate(ring, &mut col, row, &sign(n * i));
            }
        }
        cols.push(col);
    }
    dense(ring, target.len(), cols)
}

/// `HH_n(A)` in internal degree `d` for `0 <= n <= window`.
pub fn hochschild_homology(alg: &FPGradedAlgebra, d: u32, window: usize) -> Result<Vec<HHRow>> {
    let slice = HochschildSlice::build(alg, d, Some(window + 1))?;
    let c = slice.complex()?;
    let mut out = Vec::new();
    for n in 0..=window as i64 {
        out.push(HHRow {
            n,
            internal_degree: d,
            group: c.homology(n)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> FPGradedAlgebra {
        FPGradedAlgebra::parse(s).unwrap()
    }

    fn ranks(rows: &[HHRow]) -> Vec<usize> {
        rows.iter().map(|r| r.group.free_rank).collect()
    }

    #[test]
    fn ground_ring() {
        let a = alg("Q");
        assert_eq!(ranks(&hochschild_homology(&a, 0, 3).unwrap()), vec![1, 0, 0, 0]);
        assert!(hochschild_homology(&a, 2, 2).unwrap().iter().all(|r| r.group.is_zero()));
    }

    #[test]
    fn polynomial_line() {
        let a = alg("Q[x]");
        for d in 1..=5 {
            assert_eq!(ranks(&hochschild_homology(&a, d, 4).unwrap()), vec![1, 1, 0, 0, 0], "d = {d}");
        }
    }

    #[test]
    fn dual_numbers_totals() {
        let a = alg("Q[x]/(x^2)");
        let mut totals = [0usize; 5];
        for d in 0..=6 {
            for r in hochschild_homology(&a, d, 4).unwrap() {
                totals[r.n as usize] += r.group.free_rank;
            }
        }
        assert_eq!(totals, [2, 1, 1, 1, 1]);
    }

    #[test]
    fn dual_numbers_over_z_have_torsion() {
        // b(1⊗x⊗x) = 2 x⊗x, so HH_1 in internal degree 2 is Z/2
        let a = alg("Z[x]/(x^2)");
        let rows = hochschild_homology(&a, 2, 2).unwrap();
        assert_eq!(rows[1].group.torsion, vec![2.into()]);
    }

    #[test]
    fn connes_on_degree_zero() {
        let a = alg("Q[x]");
        let s = HochschildSlice::build(&a, 2, None).unwrap();
        // B(x^2) = 1 ⊗ x^2
        let src = s.index_of(0, &vec![(2, 0)]).unwrap();
        let tgt = s.index_of(1, &vec![(0, 0), (2, 0)]).unwrap();
        let col = s.connes[0].column(src);
        for (i, v) in col.iter().enumerate() {
            assert_eq!(v.is_zero(), i != tgt);
        }
    }

    #[test]
    fn slice_identities() {
        for spec in ["Q[x]", "Q[x,y]", "F_2[x,y(2)]", "Q[x]/(x^3)", "Z[x,y]/(x*y)", "F_3[x,y]/(x^2 - y^2)"] {
            let a = alg(spec);
            for d in 0..=4 {
                let s = HochschildSlice::build(&a, d, None).unwrap();
                assert!(s.identities_hold().unwrap(), "{spec} d = {d}");
                s.mixed().unwrap();
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = alg("Q[x,y,z]");
        let err = HochschildSlice::build(&a, 30, None).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}
