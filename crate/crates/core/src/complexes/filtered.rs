use std::collections::BTreeMap;

use super::chain::{ChainComplex, ChainMap, Degreewise};
use super::homology::GroupReport;
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, ExactMatrix};

/// Weight-graded family of complexes.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedComplex {
    pub pieces: BTreeMap<i64, ChainComplex>,
}

impl GradedComplex {
    /// Splits a weighted complex into its weight pieces.
    pub fn from_weights(c: &ChainComplex) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for w in c.weight_values() {
            pieces.insert(w, c.weight_piece(w)?);
        }
        Ok(GradedComplex { pieces })
    }

    pub fn piece(&self, w: i64) -> Option<&ChainComplex> {
        self.pieces.get(&w)
    }

    /// Sum of the ranks of all pieces in degree `n`.
    pub fn total_rank(&self, n: i64) -> usize {
        self.pieces.values().map(|c| c.rank(n)).sum()
    }

    /// `(weight, degree, group)` for every nonzero homology group.
    pub fn homology_table(&self) -> Result<Vec<(i64, i64, GroupReport)>> {
        let mut out = Vec::new();
        for (&w, c) in &self.pieces {
            for (n, h) in c.homology_all()? {
                if !h.is_zero() {
                    out.push((w, n, h));
                }
            }
        }
        Ok(out)
    }
}

/// Finite decreasing filtration `F^s ⊇ F^{s+1} ⊇ ... ⊇ F^{s+N}` by
/// degreewise split injections; `F^i = F^s` for `i < s` and `F^i = 0` past
/// the top.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    start: i64,
    levels: Vec<ChainComplex>,
    inclusions: Vec<Degreewise>,
}

impl FilteredComplex {
    /// `inclusions[k]` maps `levels[k + 1]` into `levels[k]`.
    pub fn new(start: i64, levels: Vec<ChainComplex>, inclusions: Vec<Degreewise>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidFiltration("empty tower".into()));
        }
        if inclusions.len() + 1 != levels.len() {
            return Err(Error::InvalidFiltration(format!(
                "{} levels need {} transition maps, got {}",
                levels.len(),
                levels.len() - 1,
                inclusions.len()
            )));
        }
        for (k, inc) in inclusions.iter().enumerate() {
            let map = ChainMap::new(levels[k + 1].clone(), levels[k].clone(), inc.clone())
                .map_err(|e| Error::InvalidFiltration(format!("F^{} -> F^{}: {e}", start + k as i64 + 1, start + k as i64)))?;
            for (&n, &r) in levels[k + 1].ranks() {
                if !is_split_injection(&map.component(n), r)? {
                    return Err(Error::InvalidFiltration(format!(
                        "F^{} -> F^{} is not a split injection in degree {n}",
                        start + k as i64 + 1,
                        start + k as i64
                    )));
                }
            }
        }
        Ok(FilteredComplex {
            start,
            levels,
            inclusions,
        })
    }

    /// Filtration by basis labels: `F^i` is spanned by basis elements with
    /// label `>= i`. The differential may not lower labels.
    pub fn by_labels(c: &ChainComplex, labels: &BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        let label = |n: i64| labels.get(&n).map_or(&[][..], Vec::as_slice);
        for (&n, &r) in c.ranks() {
            if label(n).len() != r {
                return Err(Error::Dimension(format!("labels in degree {n}")));
            }
        }
        for (&n, d) in c.differentials() {
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if !num_traits::Zero::is_zero(d.get(i, j)) && label(n - 1)[i] < label(n)[j] {
                        return Err(Error::InvalidFiltration(format!("d_{n} lowers the filtration")));
                    }
                }
            }
        }
        let all: Vec<i64> = labels.values().flatten().copied().collect();
        let (Some(&lo), Some(&hi)) = (all.iter().min(), all.iter().max()) else {
            return FilteredComplex::new(0, vec![c.clone()], Vec::new());
        };
        let ring = c.ring();
        let select = |i: i64, n: i64| -> Vec<usize> { (0..c.rank(n)).filter(|&b| label(n)[b] >= i).collect() };
        let mut levels = Vec::new();
        let mut inclusions = Vec::new();
        for i in lo..=hi {
            let ranks = c.ranks().keys().map(|&n| (n, select(i, n).len())).collect();
            let diffs = c
                .differentials()
                .iter()
                .map(|(&n, d)| (n, d.select_rows(&select(i, n - 1)).select_cols(&select(i, n))))
                .collect();
            levels.push(ChainComplex::new(ring, ranks, diffs)?);
            if i > lo {
                let inc = c
                    .ranks()
                    .keys()
                    .map(|&n| {
                        let (big, small) = (select(i - 1, n), select(i, n));
                        let m = ExactMatrix::from_fn(ring, big.len(), small.len(), |a, b| {
                            ring.from_int(i64::from(big[a] == small[b]))
                        })
                        .expect("0/1 entries");
                        (n, m)
                    })
                    .collect();
                inclusions.push(inc);
            }
        }
        FilteredComplex::new(lo, levels, inclusions)
    }

    /// Filtration of `ambient` by subcomplexes given by spanning columns in
    /// ambient coordinates; `bases[k]` spans `F^{start+k}` in each degree.
    /// `bases[0]` is usually the identity.
    pub fn from_subcomplexes(ambient: &ChainComplex, start: i64, bases: &[Degreewise]) -> Result<Self> {
        let ring = ambient.ring();
        let basis = |k: usize, n: i64| -> ExactMatrix {
            bases[k]
                .get(&n)
                .cloned()
                .unwrap_or_else(|| ExactMatrix::zeros(ring, ambient.rank(n), 0))
        };
        let mut levels = Vec::new();
        for k in 0..bases.len() {
            let ranks = ambient.ranks().keys().map(|&n| (n, basis(k, n).cols())).collect();
            let mut diffs = Degreewise::new();
            for &n in ambient.ranks().keys() {
                let image = ambient.differential(n).mul(&basis(k, n))?;
                let x = basis(k, n - 1)
                    .solve(&image)?
                    .ok_or_else(|| Error::InvalidFiltration(format!("F^{} is not a subcomplex", start + k as i64)))?;
                diffs.insert(n, x);
            }
            levels.push(ChainComplex::new(ring, ranks, diffs)?);
        }
        let mut inclusions = Vec::new();
        for k in 1..bases.len() {
            let mut inc = Degreewise::new();
            for &n in ambient.ranks().keys() {
                let x = basis(k - 1, n)
                    .solve(&basis(k, n))?
                    .ok_or_else(|| Error::InvalidFiltration(format!("F^{} is not nested", start + k as i64)))?;
                inc.insert(n, x);
            }
            inclusions.push(inc);
        }
        FilteredComplex::new(start, levels, inclusions)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Index of the last nonzero-by-construction level.
    pub fn end(&self) -> i64 {
        self.start + self.levels.len() as i64 - 1
    }

    pub fn ring(&self) -> BaseRing {
        self.levels[0].ring()
    }

    /// `F^i` with the conventions for indices outside the stored range.
    pub fn level(&self, i: i64) -> ChainComplex {
        if i <= self.start {
            self.levels[0].clone()
        } else if i > self.end() {
            ChainComplex::zero(self.ring())
        } else {
            self.levels[(i - self.start) as usize].clone()
        }
    }

    /// Transition map `F^{i+1} -> F^i` for stored levels.
    pub fn inclusion(&self, i: i64) -> Option<&Degreewise> {
        let k = i - self.start;
        (k >= 0).then(|| self.inclusions.get(k as usize)).flatten()
    }

    /// Composite inclusion `F^i -> F^start`, degreewise.
    pub fn embedding(&self, i: i64) -> Result<Degreewise> {
        let ring = self.ring();
        let top = self.level(i);
        let k = (i - self.start).clamp(0, self.levels.len() as i64) as usize;
        let mut out = Degreewise::new();
        for &n in self.levels[0].ranks().keys() {
            if k == self.levels.len() {
                out.insert(n, ExactMatrix::zeros(ring, self.levels[0].rank(n), 0));
                continue;
            }
            let mut m = ExactMatrix::identity(ring, top.rank(n));
            for j in (0..k).rev() {
                let inc = self.inclusions[j]
                    .get(&n)
                    .cloned()
                    .unwrap_or_else(|| ExactMatrix::zeros(ring, self.levels[j].rank(n), self.levels[j + 1].rank(n)));
                m = inc.mul(&m)?;
            }
            out.insert(n, m);
        }
        Ok(out)
    }

    /// Quotients `F^i / F^{i+1}`.
    pub fn associated_graded(&self) -> Result<GradedComplex> {
        let ring = self.ring();
        let mut pieces = BTreeMap::new();
        for (k, level) in self.levels.iter().enumerate() {
            let w = self.start + k as i64;
            let Some(inc) = self.inclusions.get(k) else {
                pieces.insert(w, level.clone());
                continue;
            };
            let sub = &self.levels[k + 1];
            let mut proj = BTreeMap::new();
            let mut sect = BTreeMap::new();
            for &n in level.ranks().keys() {
                let iota = inc
                    .get(&n)
                    .cloned()
                    .unwrap_or_else(|| ExactMatrix::zeros(ring, level.rank(n), sub.rank(n)));
                let (p, s) = split_quotient(&iota)?;
                proj.insert(n, p);
                sect.insert(n, s);
            }
            let ranks: BTreeMap<i64, usize> = proj.iter().map(|(&n, p)| (n, p.rows())).collect();
            let mut diffs = Degreewise::new();
            for (&n, s) in &sect {
                if let Some(p) = proj.get(&(n - 1)) {
                    diffs.insert(n, p.mul(&level.differential(n))?.mul(s)?);
                }
            }
            pieces.insert(w, ChainComplex::new(ring, ranks, diffs)?);
        }
        Ok(GradedComplex { pieces })
    }
}

fn is_split_injection(f: &ExactMatrix, r: usize) -> Result<bool> {
    let ring = f.ring();
    if f.cols() != r {
        return Ok(false);
    }
    if r == 0 {
        return Ok(true);
    }
    if ring.is_field() {
        return Ok(f.rank()? == r);
    }
    let inv = f.smith_normal_form()?.invariant_factors();
    Ok(inv.len() == r && inv.iter().all(|x| ring.is_unit(x)))
}

/// For a split injection `ι : A -> B` returns `(P, S)` with `P ι = 0`,
/// `P S = 1`, and `[ι S]` invertible; `P` gives coordinates on `B / ι(A)`.
pub(crate) fn split_quotient(iota: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    let ring = iota.ring();
    let (m, r) = (iota.rows(), iota.cols());
    if r == 0 {
        return Ok((ExactMatrix::identity(ring, m), ExactMatrix::identity(ring, m)));
    }
    if ring.is_field() {
        let id = ExactMatrix::identity(ring, m);
        let aug = ExactMatrix::hstack(ring, m, &[iota, &id])?;
        let extra: Vec<usize> = aug.pivot_columns()?.into_iter().filter(|&c| c >= r).map(|c| c - r).collect();
        let s = id.select_cols(&extra);
        let full = ExactMatrix::hstack(ring, m, &[iota, &s])?;
        let inv = full
            .inverse()?
            .ok_or_else(|| Error::InvalidFiltration("transition map is not injective".into()))?;
        let p = inv.select_rows(&(r..m).collect::<Vec<_>>());
        return Ok((p, s));
    }
    let snf = iota.smith_normal_form()?;
    let rest: Vec<usize> = (r..m).collect();
    Ok((snf.u.select_rows(&rest), snf.u_inv.select_cols(&rest)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;
    const Q: BaseRing = BaseRing::Rationals;

    #[test]
    fn two_step_tower() {
        // Z^2 ⊇ Z ⊇ 0 in degree 0
        let f0 = ChainComplex::concentrated(Z, 0, 2);
        let f1 = ChainComplex::concentrated(Z, 0, 1);
        let inc = Degreewise::from([(0, ExactMatrix::from_i64(Z, &[&[1], &[0]]).unwrap())]);
        let f = FilteredComplex::new(0, vec![f0, f1], vec![inc]).unwrap();
        let gr = f.associated_graded().unwrap();
        assert_eq!(gr.piece(0).unwrap().rank(0), 1);
        assert_eq!(gr.piece(1).unwrap().rank(0), 1);
        assert_eq!(f.level(-3).rank(0), 2);
        assert!(f.level(2).is_zero());
    }

    #[test]
    fn constant_tower() {
        let c = ChainComplex::concentrated(Q, 0, 3);
        let id = Degreewise::from([(0, ExactMatrix::identity(Q, 3))]);
        let f = FilteredComplex::new(0, vec![c.clone(), c.clone()], vec![id]).unwrap();
        let gr = f.associated_graded().unwrap();
        assert!(gr.piece(0).unwrap().is_zero());
        assert_eq!(gr.piece(1).unwrap(), &c);
    }

    #[test]
    fn rejects_non_split_inclusion() {
        let c = ChainComplex::concentrated(Z, 0, 1);
        let two = Degreewise::from([(0, ExactMatrix::from_i64(Z, &[&[2]]).unwrap())]);
        let err = FilteredComplex::new(0, vec![c.clone(), c], vec![two]).unwrap_err();
        assert!(matches!(err, Error::InvalidFiltration(_)));
    }

    // de Rham complex of Q[x] in internal degree <= 3 with d in homological
    // degree 0 -> -1; filtered by form degree.
    #[test]
    fn de_rham_by_form_degree() {
        let n = 3usize;
        let d = ExactMatrix::from_fn(Q, n, n + 1, |i, j| {
            if j == i + 1 {
                crate::exactalg::int(j as i64)
            } else {
                crate::exactalg::int(0)
            }
        })
        .unwrap();
        let c = ChainComplex::new(Q, BTreeMap::from([(0, n + 1), (-1, n)]), Degreewise::from([(0, d)])).unwrap();
        let labels = BTreeMap::from([(0, vec![0; n + 1]), (-1, vec![1; n])]);
        let f = FilteredComplex::by_labels(&c, &labels).unwrap();
        let gr = f.associated_graded().unwrap();
        let g0 = gr.piece(0).unwrap();
        let g1 = gr.piece(1).unwrap();
        assert_eq!((g0.rank(0), g0.rank(-1)), (n + 1, 0));
        assert_eq!((g1.rank(0), g1.rank(-1)), (0, n));
        assert!(g0.differentials().is_empty() && g1.differentials().is_empty());
        for k in [0, -1] {
            assert_eq!(gr.total_rank(k), c.rank(k));
        }
    }

    #[test]
    fn subcomplex_filtration_over_z() {
        // Z -> Z^2 via (1, 0); F^1 = span of the image
        let d = ExactMatrix::from_i64(Z, &[&[1], &[0]]).unwrap();
        let c = ChainComplex::new(Z, BTreeMap::from([(1, 1), (0, 2)]), Degreewise::from([(1, d.clone())])).unwrap();
        let b0 = Degreewise::from([(0, ExactMatrix::identity(Z, 2)), (1, ExactMatrix::identity(Z, 1))]);
        let b1 = Degreewise::from([(0, d), (1, ExactMatrix::identity(Z, 1))]);
        let f = FilteredComplex::from_subcomplexes(&c, 0, &[b0, b1]).unwrap();
        let gr = f.associated_graded().unwrap();
        assert_eq!(gr.piece(0).unwrap().rank(0), 1);
        assert!(gr.piece(1).unwrap().homology_all().unwrap().iter().all(|(_, h)| h.is_zero()));
    }

    #[test]
    fn split_quotient_over_z() {
        let iota = ExactMatrix::from_i64(Z, &[&[1], &[3], &[5]]).unwrap();
        let (p, s) = split_quotient(&iota).unwrap();
        assert!(p.mul(&iota).unwrap().is_zero());
        assert_eq!(p.mul(&s).unwrap(), ExactMatrix::identity(Z, 2));
    }
}
