//! Filtered objects as weight-graded modules over `k[t]`, `t` of weight −1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complexes::{split_quotient, ChainComplex, ChainMap, Degreewise, FilteredComplex, GradedComplex};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, ExactMatrix, Scalar};

/// Graded `k[t]`-module of chain complexes. Weights below `low` repeat the
/// bottom piece with `t` the identity; weights past the stored range are 0.
#[derive(Clone, Debug)]
pub struct ReesModule {
    ring: BaseRing,
    low: i64,
    pieces: Vec<ChainComplex>,
    t: Vec<Degreewise>,
    honest: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub weight: i64,
    pub degree: i64,
    pub rank: usize,
}

impl ReesModule {
    /// `t[k]` is the action `pieces[k + 1] -> pieces[k]`; it must be a chain map.
    pub fn new(ring: BaseRing, low: i64, pieces: Vec<ChainComplex>, t: Vec<Degreewise>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidFiltration("Rees module without pieces".into()));
        }
        if t.len() + 1 != pieces.len() {
            return Err(Error::Dimension(format!("{} pieces need {} t-maps", pieces.len(), pieces.len() - 1)));
        }
        let mut honest = true;
        for (k, m) in t.iter().enumerate() {
            if pieces[k].ring() != ring || pieces[k + 1].ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), pieces[k].ring().to_string()));
            }
            let map = ChainMap::new(pieces[k + 1].clone(), pieces[k].clone(), m.clone())?;
            honest &= map.is_injective()?;
        }
        Ok(ReesModule {
            ring,
            low,
            pieces,
            t,
            honest,
        })
    }

    /// Free module of rank `rank` generated in weight `w` and degree 0.
    pub fn free(ring: BaseRing, w: i64, rank: usize) -> Self {
        ReesModule {
            ring,
            low: w,
            pieces: vec![ChainComplex::concentrated(ring, 0, rank)],
            t: Vec::new(),
            honest: true,
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    /// True iff `t` acts injectively, i.e. the module comes from a filtration.
    pub fn is_honest(&self) -> bool {
        self.honest
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// First weight whose piece is zero.
    pub fn high(&self) -> i64 {
        self.low + self.pieces.len() as i64
    }

    pub fn piece(&self, w: i64) -> ChainComplex {
        if w <= self.low {
            self.pieces[0].clone()
        } else if w >= self.high() {
            ChainComplex::zero(self.ring)
        } else {
            self.pieces[(w - self.low) as usize].clone()
        }
    }

    /// `t : M_{w+1} -> M_w` in degree `n`.
    pub fn t_action(&self, w: i64, n: i64) -> ExactMatrix {
        let (src, tgt) = (self.piece(w + 1), self.piece(w));
        if w < self.low {
            return ExactMatrix::identity(self.ring, tgt.rank(n));
        }
        self.t
            .get((w - self.low) as usize)
            .and_then(|m| m.get(&n).cloned())
            .unwrap_or_else(|| ExactMatrix::zeros(self.ring, tgt.rank(n), src.rank(n)))
    }

    /// Ranks of every nonzero `(weight, degree)` piece in the stored range.
    pub fn rank_table(&self) -> Vec<RankRow> {
        let mut out = Vec::new();
        for (k, c) in self.pieces.iter().enumerate() {
            for (&degree, &rank) in c.ranks() {
                out.push(RankRow {
                    weight: self.low + k as i64,
                    degree,
                    rank,
                });
            }
        }
        out
    }

    /// Fiber at `t = 0`: the cokernel of `t` in each weight.
    pub fn fiber_at_zero(&self) -> Result<GradedComplex> {
        let mut pieces = BTreeMap::new();
        for w in self.low..self.high() {
            let level = self.piece(w);
            let mut proj = BTreeMap::new();
            let mut sect = BTreeMap::new();
            for &n in level.ranks().keys() {
                let image = span_basis(&self.t_action(w, n))?;
                let (p, s) = split_quotient(&image)?;
                proj.insert(n, p);
                sect.insert(n, s);
            }
            let ranks = proj.iter().map(|(&n, p)| (n, p.rows())).collect();
            let mut diffs = Degreewise::new();
            for (&n, s) in &sect {
                if let Some(p) = proj.get(&(n - 1)) {
                    diffs.insert(n, p.mul(&level.differential(n))?.mul(s)?);
                }
            }
            pieces.insert(w, ChainComplex::new(self.ring, ranks, diffs)?);
        }
        Ok(GradedComplex { pieces })
    }

    /// Fiber at `t = 1`: the colimit along `t`, reached at the bottom weight.
    pub fn fiber_at_one(&self) -> ChainComplex {
        self.pieces[0].clone()
    }

    /// The filtration encoded by an honest module.
    pub fn to_filtered(&self) -> Result<FilteredComplex> {
        if !self.honest {
            return Err(Error::InvalidFiltration("t does not act injectively".into()));
        }
        FilteredComplex::new(self.low, self.pieces.clone(), self.t.clone())
    }
}

/// Weight `i` piece `F^i`, with `t` the inclusion `F^{i+1} ⊆ F^i`.
pub fn rees_of(f: &FilteredComplex) -> Result<ReesModule> {
    let pieces: Vec<ChainComplex> = (f.start()..=f.end()).map(|i| f.level(i)).collect();
    let t = (f.start()..f.end()).map(|i| f.inclusion(i).cloned().unwrap_or_default()).collect();
    ReesModule::new(f.ring(), f.start(), pieces, t)
}

/// Split filtration `F^i = ⊕_{w ≥ i} X_w` of a graded complex.
pub fn split_filtration(g: &GradedComplex) -> Result<FilteredComplex> {
    let (Some(&lo), Some(&hi)) = (g.pieces.keys().next(), g.pieces.keys().next_back()) else {
        return Err(Error::InvalidFiltration("empty grading".into()));
    };
    let ring = g.pieces.values().next().unwrap().ring();
    let zero = ChainComplex::zero(ring);
    let mut levels = vec![g.piece(hi).unwrap_or(&zero).clone()];
    let mut inclusions = Vec::new();
    for w in (lo..hi).rev() {
        let x = g.piece(w).unwrap_or(&zero);
        let above = levels.last().unwrap();
        let level = x.direct_sum(above)?;
        let inc = level
            .ranks()
            .keys()
            .map(|&n| {
                let (a, b) = (x.rank(n), above.rank(n));
                let m = ExactMatrix::from_fn(ring, a + b, b, |i, j| ring.from_int(i64::from(i == a + j))).unwrap();
                (n, m)
            })
            .collect();
        inclusions.push(inc);
        levels.push(level);
    }
    levels.reverse();
    inclusions.reverse();
    FilteredComplex::new(lo, levels, inclusions)
}

/// Day convolution: `(F ⊗ G)^n = Σ_{i+j=n} F^i ⊗ G^j` inside `F^s ⊗ G^s`.
pub fn day_tensor(f: &FilteredComplex, g: &FilteredComplex) -> Result<FilteredComplex> {
    if f.ring() != g.ring() {
        return Err(Error::RingMismatch(f.ring().to_string(), g.ring().to_string()));
    }
    let ring = f.ring();
    let (a, b) = (f.level(f.start()), g.level(g.start()));
    let ambient = a.tensor(&b)?;
    let ef: Vec<Degreewise> = (f.start()..=f.end()).map(|i| f.embedding(i)).collect::<Result<_>>()?;
    let eg: Vec<Degreewise> = (g.start()..=g.end()).map(|j| g.embedding(j)).collect::<Result<_>>()?;
    let sub = |e: &Degreewise, n: i64, full: usize| -> ExactMatrix {
        e.get(&n).cloned().unwrap_or_else(|| ExactMatrix::zeros(ring, full, 0))
    };
    let (a_lo, a_hi) = a.support().unwrap_or((0, -1));
    let start = f.start() + g.start();
    let mut bases = Vec::new();
    for n in start..=f.end() + g.end() {
        let mut basis = Degreewise::new();
        for &k in ambient.ranks().keys() {
            let mut cols: Vec<ExactMatrix> = Vec::new();
            for i in f.start()..=f.end() {
                let j = (n - i).max(g.start());
                if j > g.end() {
                    continue;
                }
                let (fi, gj) = (&ef[(i - f.start()) as usize], &eg[(j - g.start()) as usize]);
                // block-diagonal over the summands a_x ⊗ b_{k-x} of the ambient
                let blocks: Vec<(usize, usize, ExactMatrix)> = (a_lo..=a_hi)
                    .filter(|&x| a.rank(x) * b.rank(k - x) > 0)
                    .map(|x| {
                        let m = sub(fi, x, a.rank(x)).kron(&sub(gj, k - x, b.rank(k - x)))?;
                        Ok((m.rows(), m.cols(), m))
                    })
                    .collect::<Result<_>>()?;
                let rows: usize = blocks.iter().map(|b| b.0).sum();
                let ncols: usize = blocks.iter().map(|b| b.1).sum();
                let mut m = ExactMatrix::zeros(ring, rows, ncols);
                let (mut r0, mut c0) = (0, 0);
                for (r, c, blk) in &blocks {
                    m.set_block(r0, c0, blk);
                    r0 += r;
                    c0 += c;
                }
                cols.push(m);
            }
            let refs: Vec<&ExactMatrix> = cols.iter().collect();
            let all = ExactMatrix::hstack(ring, ambient.rank(k), &refs)?;
            basis.insert(k, span_basis(&all)?);
        }
        bases.push(basis);
    }
    FilteredComplex::from_subcomplexes(&ambient, start, &bases)
}

/// Basis of the column span, which must be a direct summand over non-fields.
pub(crate) fn span_basis(m: &ExactMatrix) -> Result<ExactMatrix> {
    let ring = m.ring();
    if ring.is_field() {
        return m.column_space_basis();
    }
    if m.cols() == 0 || m.rows() == 0 {
        return Ok(ExactMatrix::zeros(ring, m.rows(), 0));
    }
    let snf = m.smith_normal_form()?;
    let inv = snf.invariant_factors();
    let r = inv.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
    if inv[..r].iter().any(|x| !ring.is_unit(x)) {
        return Err(Error::InvalidFiltration("span is not a direct summand".into()));
    }
    Ok(snf.u_inv.select_cols(&(0..r).collect::<Vec<_>>()))
}

/// Algebra structure on the degree-0 part of `F^start`, given by structure
/// constants `product[a][b]` in the ambient basis.
#[derive(Clone, Debug)]
pub struct FilteredAlgebraData {
    pub filtered: FilteredComplex,
    pub product: Vec<Vec<Vec<Scalar>>>,
}

impl FilteredAlgebraData {
    pub fn new(filtered: FilteredComplex, product: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let r = filtered.level(filtered.start()).rank(0);
        if product.len() != r || product.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
            return Err(Error::Dimension(format!("structure constants for rank {r}")));
        }
        Ok(FilteredAlgebraData { filtered, product })
    }

    fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let ring = self.filtered.ring();
        let r = x.len();
        let mut out = vec![ring.zero(); r];
        for a in 0..r {
            if num_traits::Zero::is_zero(&x[a]) {
                continue;
            }
            for b in 0..r {
                if num_traits::Zero::is_zero(&y[b]) {
                    continue;
                }
                let c = ring.mul(&x[a], &y[b]);
                for (o, s) in out.iter_mut().zip(&self.product[a][b]) {
                    *o = ring.add(o, &ring.mul(&c, s));
                }
            }
        }
        out
    }

    /// `F^i · F^j ⊆ F^{i+j}` on basis elements; returns the offending pairs.
    pub fn multiplicativity_failures(&self) -> Result<Vec<(i64, i64)>> {
        let f = &self.filtered;
        let ring = f.ring();
        let emb = |i: i64| -> Result<ExactMatrix> {
            let r = f.level(f.start()).rank(0);
            Ok(f.embedding(i)?.remove(&0).unwrap_or_else(|| ExactMatrix::zeros(ring, r, 0)))
        };
        let mut bad = Vec::new();
        for i in f.start()..=f.end() {
            for j in f.start()..=f.end() {
                let (ei, ej, target) = (emb(i)?, emb(j)?, emb(i + j)?);
                let mut ok = true;
                'outer: for a in 0..ei.cols() {
                    for b in 0..ej.cols() {
                        let v = self.multiply(&ei.column(a), &ej.column(b));
                        let col = ExactMatrix::from_columns(ring, v.len(), &[v])?;
                        if target.solve(&col)?.is_none() {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                if !ok {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use proptest::prelude::*;

    const Z: BaseRing = BaseRing::Integers;
    const Q: BaseRing = BaseRing::Rationals;

    fn two_step_z() -> FilteredComplex {
        let f0 = ChainComplex::concentrated(Z, 0, 2);
        let f1 = ChainComplex::concentrated(Z, 0, 1);
        let inc = Degreewise::from([(0, ExactMatrix::from_i64(Z, &[&[1], &[0]]).unwrap())]);
        FilteredComplex::new(0, vec![f0, f1], vec![inc]).unwrap()
    }

    // k^2 ⊇ k ⊇ 0 with a non-coordinate line
    fn two_step_q(slope: i64) -> FilteredComplex {
        let f0 = ChainComplex::concentrated(Q, 0, 2);
        let f1 = ChainComplex::concentrated(Q, 0, 1);
        let inc = Degreewise::from([(0, ExactMatrix::from_i64(Q, &[&[1], &[slope]]).unwrap())]);
        FilteredComplex::new(0, vec![f0, f1], vec![inc]).unwrap()
    }

    fn gr_ranks(g: &GradedComplex, n: i64) -> Vec<(i64, usize)> {
        g.pieces.iter().map(|(&w, c)| (w, c.rank(n))).filter(|x| x.1 > 0).collect()
    }

    #[test]
    fn rees_of_two_step() {
        let r = rees_of(&two_step_z()).unwrap();
        assert!(r.is_honest());
        let ranks: Vec<usize> = (-1..=2).map(|w| r.piece(w).rank(0)).collect();
        assert_eq!(ranks, vec![2, 2, 1, 0]);
        assert_eq!(r.t_action(0, 0), ExactMatrix::from_i64(Z, &[&[1], &[0]]).unwrap());
        assert_eq!(r.t_action(-1, 0), ExactMatrix::identity(Z, 2));
        let g = r.fiber_at_zero().unwrap();
        assert_eq!(gr_ranks(&g, 0), vec![(0, 1), (1, 1)]);
        assert_eq!(r.fiber_at_one().rank(0), 2);
    }

    #[test]
    fn constant_filtration_is_free() {
        let c = ChainComplex::concentrated(Q, 0, 3);
        let id = Degreewise::from([(0, ExactMatrix::identity(Q, 3))]);
        let f = FilteredComplex::new(0, vec![c.clone(), c.clone(), c], vec![id.clone(), id]).unwrap();
        let r = rees_of(&f).unwrap();
        for w in -2..2 {
            assert!(r.t_action(w, 0).is_invertible().unwrap());
        }
        assert_eq!(gr_ranks(&r.fiber_at_zero().unwrap(), 0), vec![(2, 3)]);
    }

    #[test]
    fn de_rham_line_rank_per_weight() {
        // Q[x]·1 ⊕ Q[x]dx up to internal degree 2, form degree filtration
        let d = ExactMatrix::from_i64(Q, &[&[0, 1, 0], &[0, 0, 2]]).unwrap();
        let c = ChainComplex::new(Q, BTreeMap::from([(0, 3), (-1, 2)]), Degreewise::from([(0, d)])).unwrap();
        let labels = BTreeMap::from([(0, vec![0; 3]), (-1, vec![1; 2])]);
        let f = FilteredComplex::by_labels(&c, &labels).unwrap();
        let r = rees_of(&f).unwrap();
        let generators: Vec<usize> = (0..=2).map(|w| r.piece(w).rank(-1).min(1) + r.piece(w).rank(0).min(1)).collect();
        assert_eq!(generators, vec![2, 1, 0]);
    }

    #[test]
    fn free_rank_one() {
        let r = ReesModule::free(Q, 3, 1);
        assert_eq!(gr_ranks(&r.fiber_at_zero().unwrap(), 0), vec![(3, 1)]);
        assert_eq!(r.fiber_at_one().rank(0), 1);
    }

    #[test]
    fn dishonest_module_is_flagged() {
        let c = ChainComplex::concentrated(Q, 0, 1);
        let zero = Degreewise::from([(0, ExactMatrix::zeros(Q, 1, 1))]);
        let r = ReesModule::new(Q, 0, vec![c.clone(), c], vec![zero]).unwrap();
        assert!(!r.is_honest());
        assert!(r.to_filtered().is_err());
        // coker t = whole piece in weight 0
        assert_eq!(gr_ranks(&r.fiber_at_zero().unwrap(), 0), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn split_filtration_fibers() {
        let g = GradedComplex {
            pieces: BTreeMap::from([
                (0, ChainComplex::concentrated(Q, 0, 2)),
                (1, ChainComplex::concentrated(Q, 1, 1)),
                (3, ChainComplex::concentrated(Q, 0, 1)),
            ]),
        };
        let f = split_filtration(&g).unwrap();
        let r = rees_of(&f).unwrap();
        let gr = r.fiber_at_zero().unwrap();
        for (w, c) in &g.pieces {
            assert_eq!(gr.piece(*w).unwrap().ranks(), c.ranks());
        }
        assert!(gr.piece(2).unwrap().is_zero());
        let one = r.fiber_at_one();
        for n in [0, 1] {
            assert_eq!(one.rank(n), g.total_rank(n));
        }
    }

    #[test]
    fn day_tensor_unit() {
        let f = two_step_z();
        let unit = FilteredComplex::new(0, vec![ChainComplex::point(Z)], Vec::new()).unwrap();
        let t = day_tensor(&f, &unit).unwrap();
        assert_eq!((t.start(), t.end()), (0, 1));
        for i in 0..=2 {
            assert_eq!(t.level(i).ranks(), f.level(i).ranks());
        }
    }

    #[test]
    fn day_tensor_two_lines() {
        let t = day_tensor(&two_step_q(2), &two_step_q(-3)).unwrap();
        assert_eq!(gr_ranks(&t.associated_graded().unwrap(), 0), vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn multiplicativity_of_degree_filtration() {
        // Q[x]/(x^3) with F^{-n} = degree <= n
        let c = ChainComplex::concentrated(Q, 0, 3);
        let labels = BTreeMap::from([(0, vec![0, -1, -2])]);
        let f = FilteredComplex::by_labels(&c, &labels).unwrap();
        let mut product = vec![vec![vec![int(0); 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                if a + b < 3 {
                    product[a][b][a + b] = int(1);
                }
            }
        }
        let alg = FilteredAlgebraData::new(f.clone(), product.clone()).unwrap();
        assert!(alg.multiplicativity_failures().unwrap().is_empty());
        // 1·x = x^2 violates it
        product[0][1] = vec![int(0), int(0), int(1)];
        let alg = FilteredAlgebraData::new(f, product).unwrap();
        assert!(!alg.multiplicativity_failures().unwrap().is_empty());
    }

    /// Random filtered complex over Q in degrees 0 and 1 via basis labels.
    fn labelled() -> impl Strategy<Value = FilteredComplex> {
        (1usize..=4, 0usize..=4, 1i64..=4).prop_flat_map(|(r0, r1, len)| {
            (
                proptest::collection::vec(0..len, r0),
                proptest::collection::vec(0..len, r1),
                proptest::collection::vec(-2i64..=2, r0 * r1),
            )
                .prop_map(move |(l0, l1, entries)| {
                    let d = ExactMatrix::from_fn(Q, r0, r1, |i, j| {
                        if l0[i] >= l1[j] {
                            int(entries[i * r1 + j])
                        } else {
                            int(0)
                        }
                    })
                    .unwrap();
                    let c = ChainComplex::new(Q, BTreeMap::from([(0, r0), (1, r1)]), Degreewise::from([(1, d)]))
                        .unwrap();
                    let labels = BTreeMap::from([(0, l0), (1, l1)]);
                    FilteredComplex::by_labels(&c, &labels).unwrap()
                })
        })
    }

    fn graded_tensor(a: &GradedComplex, b: &GradedComplex) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&i, x) in &a.pieces {
            for (&j, y) in &b.pieces {
                let t = x.tensor(y).unwrap();
                for (&n, &r) in t.ranks() {
                    *out.entry((i + j, n)).or_insert(0) += r;
                }
            }
        }
        out
    }

    fn table(g: &GradedComplex) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&w, c) in &g.pieces {
            for (&n, &r) in c.ranks() {
                out.insert((w, n), r);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rees_round_trips(f in labelled()) {
            let r = rees_of(&f).unwrap();
            prop_assert!(r.is_honest());
            prop_assert_eq!(r.fiber_at_zero().unwrap(), f.associated_graded().unwrap());
            prop_assert_eq!(r.fiber_at_one(), f.level(f.start()));
            let back = r.to_filtered().unwrap();
            prop_assert_eq!(back.associated_graded().unwrap(), f.associated_graded().unwrap());
        }

        #[test]
        fn gr_commutes_with_day_tensor(f in labelled(), g in labelled()) {
            let t = day_tensor(&f, &g).unwrap();
            let lhs = table(&t.associated_graded().unwrap());
            let rhs = graded_tensor(&f.associated_graded().unwrap(), &g.associated_graded().unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
