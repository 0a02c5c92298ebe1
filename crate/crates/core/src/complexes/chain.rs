use std::collections::BTreeMap;

use rayon::prelude::*;

use super::homology::{homology_at, GroupReport};
use crate::error::{Error, Result};
use crate::exactalg::{int, BaseRing, ExactMatrix};

/// Degreewise matrices, keyed by homological degree.
pub type Degreewise = BTreeMap<i64, ExactMatrix>;

/// Bounded chain complex of finite free modules, homological grading:
/// `d_n : C_n -> C_{n-1}`. Optional per-basis-element internal weights are
/// preserved by the differential.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    ring: BaseRing,
    ranks: BTreeMap<i64, usize>,
    weights: Option<BTreeMap<i64, Vec<i64>>>,
    diffs: Degreewise,
}

impl ChainComplex {
    /// Checks shapes and d^2 = 0. Differentials between zero modules may be
    /// omitted.
    pub fn new(ring: BaseRing, ranks: BTreeMap<i64, usize>, diffs: Degreewise) -> Result<Self> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut kept = Degreewise::new();
        for (n, d) in diffs {
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), d.ring().to_string()));
            }
            if d.rows() != rank(n - 1) || d.cols() != rank(n) {
                return Err(Error::Dimension(format!(
                    "d_{n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    rank(n - 1),
                    rank(n)
                )));
            }
            if d.rows() > 0 && d.cols() > 0 {
                kept.insert(n, d);
            }
        }
        for (n, d) in &kept {
            if let Some(prev) = kept.get(&(n - 1)) {
                if !prev.mul(d)?.is_zero() {
                    return Err(Error::InvalidComplex(format!("d_{} d_{n} != 0", n - 1)));
                }
            }
        }
        Ok(ChainComplex {
            ring,
            ranks,
            weights: None,
            diffs: kept,
        })
    }

    /// Attaches internal weights; the differential must preserve them.
    pub fn with_weights(mut self, weights: BTreeMap<i64, Vec<i64>>) -> Result<Self> {
        let weights: BTreeMap<i64, Vec<i64>> = weights.into_iter().filter(|(_, w)| !w.is_empty()).collect();
        for (&n, &r) in &self.ranks {
            let len = weights.get(&n).map_or(0, Vec::len);
            if len != r {
                return Err(Error::Dimension(format!("{len} weights for rank {r} in degree {n}")));
            }
        }
        if weights.keys().any(|n| !self.ranks.contains_key(n)) {
            return Err(Error::Dimension("weights outside the support".into()));
        }
        for (n, d) in &self.diffs {
            let (src, tgt) = (&weights[n], &weights[&(n - 1)]);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if !num_traits::Zero::is_zero(d.get(i, j)) && tgt[i] != src[j] {
                        return Err(Error::InvalidComplex(format!(
                            "d_{n} maps weight {} to weight {}",
                            src[j], tgt[i]
                        )));
                    }
                }
            }
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn zero(ring: BaseRing) -> Self {
        ChainComplex {
            ring,
            ranks: BTreeMap::new(),
            weights: None,
            diffs: Degreewise::new(),
        }
    }

    /// Free module of the given rank in a single degree.
    pub fn concentrated(ring: BaseRing, degree: i64, rank: usize) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(degree, rank);
        ChainComplex::new(ring, ranks, Degreewise::new()).expect("no differentials")
    }

    /// The base ring in degree 0.
    pub fn point(ring: BaseRing) -> Self {
        Self::concentrated(ring, 0, 1)
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rank(&self, n: i64) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    /// Smallest and largest degree with a nonzero component.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.ranks.keys().next()?;
        let hi = *self.ranks.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// `d_n`, a zero matrix of the right shape when not stored.
    pub fn differential(&self, n: i64) -> ExactMatrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.ring, self.rank(n - 1), self.rank(n)))
    }

    pub fn differentials(&self) -> &Degreewise {
        &self.diffs
    }

    pub fn weights(&self, n: i64) -> Option<&[i64]> {
        let w = self.weights.as_ref()?;
        Some(w.get(&n).map_or(&[], Vec::as_slice))
    }

    pub fn has_weights(&self) -> bool {
        self.weights.is_some()
    }

    pub fn homology(&self, n: i64) -> Result<GroupReport> {
        let dim = self.rank(n);
        if dim == 0 {
            return Ok(GroupReport::default());
        }
        homology_at(self.ring, dim, &self.differential(n), &self.differential(n + 1))
    }

    /// Homology in degrees `lo..=hi`, computed in parallel.
    pub fn homology_window(&self, lo: i64, hi: i64) -> Result<Vec<(i64, GroupReport)>> {
        (lo..=hi)
            .into_par_iter()
            .map(|n| Ok((n, self.homology(n)?)))
            .collect()
    }

    /// Homology in every degree of the support.
    pub fn homology_all(&self) -> Result<Vec<(i64, GroupReport)>> {
        match self.support() {
            Some((lo, hi)) => self.homology_window(lo, hi),
            None => Ok(Vec::new()),
        }
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(&n, &r)| if n.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// `C[k]_n = C_{n-k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = if k.rem_euclid(2) == 0 { int(1) } else { int(-1) };
        ChainComplex {
            ring: self.ring,
            ranks: self.ranks.iter().map(|(&n, &r)| (n + k, r)).collect(),
            weights: self
                .weights
                .as_ref()
                .map(|w| w.iter().map(|(&n, v)| (n + k, v.clone())).collect()),
            diffs: self.diffs.iter().map(|(&n, d)| (n + k, d.scale(&sign))).collect(),
        }
    }

    /// Sub-complex spanned by basis elements of internal weight `w`.
    pub fn weight_piece(&self, w: i64) -> Result<ChainComplex> {
        let weights = self
            .weights
            .as_ref()
            .ok_or_else(|| Error::InvalidComplex("complex carries no weights".into()))?;
        let idx: BTreeMap<i64, Vec<usize>> = weights
            .iter()
            .map(|(&n, ws)| (n, (0..ws.len()).filter(|&i| ws[i] == w).collect()))
            .collect();
        let sel = |n: i64| idx.get(&n).cloned().unwrap_or_default();
        let ranks = idx.iter().map(|(&n, v)| (n, v.len())).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| (n, d.select_rows(&sel(n - 1)).select_cols(&sel(n))))
            .collect();
        let piece_weights = idx.iter().map(|(&n, v)| (n, vec![w; v.len()])).collect();
        ChainComplex::new(self.ring, ranks, diffs)?.with_weights(piece_weights)
    }

    /// Distinct internal weights present.
    pub fn weight_values(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .weights
            .iter()
            .flat_map(|w| w.values().flatten().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        self.check_ring(other)?;
        let degrees = union_degrees(self, other);
        let ranks = degrees.iter().map(|&n| (n, self.rank(n) + other.rank(n))).collect();
        let mut diffs = Degreewise::new();
        for &n in &degrees {
            let (a, b) = (self.differential(n), other.differential(n));
            let mut d = ExactMatrix::zeros(self.ring, a.rows() + b.rows(), a.cols() + b.cols());
            d.set_block(0, 0, &a);
            d.set_block(a.rows(), a.cols(), &b);
            diffs.insert(n, d);
        }
        let out = ChainComplex::new(self.ring, ranks, diffs)?;
        match (&self.weights, &other.weights) {
            (Some(_), Some(_)) => {
                let w = degrees
                    .iter()
                    .map(|&n| {
                        let mut v = self.weights(n).unwrap().to_vec();
                        v.extend_from_slice(other.weights(n).unwrap());
                        (n, v)
                    })
                    .collect();
                out.with_weights(w)
            }
            _ => Ok(out),
        }
    }

    /// Tensor product with the Koszul sign `d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy`.
    /// Degree `n` is ordered by blocks `C_i ⊗ D_{n-i}` with `i` increasing.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex> {
        self.check_ring(other)?;
        let ring = self.ring;
        let (Some((a_lo, a_hi)), Some((b_lo, b_hi))) = (self.support(), other.support()) else {
            return Ok(ChainComplex::zero(ring));
        };
        let blocks = |n: i64| -> Vec<(i64, usize)> {
            // (i, offset) of each nonzero block C_i ⊗ D_{n-i}
            let mut off = 0;
            let mut out = Vec::new();
            for i in a_lo..=a_hi {
                let r = self.rank(i) * other.rank(n - i);
                if r > 0 {
                    out.push((i, off));
                    off += r;
                }
            }
            out
        };
        let mut ranks = BTreeMap::new();
        for n in a_lo + b_lo..=a_hi + b_hi {
            let r: usize = (a_lo..=a_hi).map(|i| self.rank(i) * other.rank(n - i)).sum();
            ranks.insert(n, r);
        }
        let mut diffs = Degreewise::new();
        for n in a_lo + b_lo..=a_hi + b_hi {
            let (src, tgt) = (blocks(n), blocks(n - 1));
            let rows = ranks.get(&(n - 1)).copied().unwrap_or(0);
            let cols = ranks[&n];
            if rows == 0 || cols == 0 {
                continue;
            }
            let find = |i: i64| tgt.iter().find(|(t, _)| *t == i).map(|&(_, o)| o);
            let mut d = ExactMatrix::zeros(ring, rows, cols);
            for &(i, c0) in &src {
                let j = n - i;
                if let Some(r0) = find(i - 1) {
                    let block = self.differential(i).kron(&ExactMatrix::identity(ring, other.rank(j)))?;
                    d.set_block(r0, c0, &block);
                }
                if let Some(r0) = find(i) {
                    let sign = if i.rem_euclid(2) == 0 { int(1) } else { int(-1) };
                    let block = ExactMatrix::identity(ring, self.rank(i))
                        .kron(&other.differential(j))?
                        .scale(&sign);
                    d.set_block(r0, c0, &block);
                }
            }
            diffs.insert(n, d);
        }
        let out = ChainComplex::new(ring, ranks, diffs)?;
        if let (Some(_), Some(_)) = (&self.weights, &other.weights) {
            let mut w = BTreeMap::new();
            for n in a_lo + b_lo..=a_hi + b_hi {
                let mut v = Vec::new();
                for (i, _) in blocks(n) {
                    for x in self.weights(i).unwrap() {
                        for y in other.weights(n - i).unwrap() {
                            v.push(x + y);
                        }
                    }
                }
                w.insert(n, v);
            }
            return out.with_weights(w);
        }
        Ok(out)
    }

    fn check_ring(&self, other: &ChainComplex) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }
}

fn union_degrees(a: &ChainComplex, b: &ChainComplex) -> Vec<i64> {
    let mut v: Vec<i64> = a.ranks.keys().chain(b.ranks.keys()).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Degree-preserving chain map `f : source -> target`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    maps: Degreewise,
}

impl ChainMap {
    /// Checks shapes and `d f = f d`.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Degreewise) -> Result<Self> {
        source.check_ring(&target)?;
        for (n, f) in &maps {
            if f.rows() != target.rank(*n) || f.cols() != source.rank(*n) {
                return Err(Error::Dimension(format!("f_{n} has the wrong shape")));
            }
        }
        let out = ChainMap { source, target, maps };
        for n in union_degrees(&out.source, &out.target) {
            let lhs = out.target.differential(n).mul(&out.component(n))?;
            let rhs = out.component(n - 1).mul(&out.source.differential(n))?;
            if lhs != rhs {
                return Err(Error::InvalidComplex(format!("not a chain map in degree {n}")));
            }
        }
        Ok(out)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let maps = c
            .ranks
            .iter()
            .map(|(&n, &r)| (n, ExactMatrix::identity(c.ring, r)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn component(&self, n: i64) -> ExactMatrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(self.source.ring, self.target.rank(n), self.source.rank(n)))
    }

    pub fn compose(&self, after: &ChainMap) -> Result<ChainMap> {
        let mut maps = Degreewise::new();
        for n in union_degrees(&self.source, &after.target) {
            maps.insert(n, after.component(n).mul(&self.component(n))?);
        }
        ChainMap::new(self.source.clone(), after.target.clone(), maps)
    }

    /// Degreewise injectivity. Over Z/p^k this needs unit invariant factors.
    pub fn is_injective(&self) -> Result<bool> {
        let ring = self.source.ring;
        for (&n, &r) in &self.source.ranks {
            let f = self.component(n);
            let ok = match ring {
                BaseRing::CyclicRing { .. } => {
                    let inv = f.smith_normal_form()?.invariant_factors();
                    inv.len() == r && inv.iter().all(|x| ring.is_unit(x))
                }
                _ => f.rank()? == r,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mapping cone: `cone(f)_n = A_{n-1} ⊕ B_n`, `d(a, b) = (-da, f a + db)`.
    pub fn cone(&self) -> Result<ChainComplex> {
        let (a, b) = (&self.source, &self.target);
        let ring = a.ring;
        let mut degrees: Vec<i64> = a.ranks.keys().map(|n| n + 1).chain(b.ranks.keys().copied()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let ranks = degrees.iter().map(|&n| (n, a.rank(n - 1) + b.rank(n))).collect();
        let mut diffs = Degreewise::new();
        for &n in &degrees {
            let (ra, rb) = (a.rank(n - 1), b.rank(n));
            let (ta, tb) = (a.rank(n - 2), b.rank(n - 1));
            let mut d = ExactMatrix::zeros(ring, ta + tb, ra + rb);
            d.set_block(0, 0, &a.differential(n - 1).neg());
            d.set_block(ta, 0, &self.component(n - 1));
            d.set_block(ta, ra, &b.differential(n));
            diffs.insert(n, d);
        }
        ChainComplex::new(ring, ranks, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    const Z: BaseRing = BaseRing::Integers;
    const Q: BaseRing = BaseRing::Rationals;

    pub(crate) fn times_two() -> ChainComplex {
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let diffs = Degreewise::from([(1, ExactMatrix::from_i64(Z, &[&[2]]).unwrap())]);
        ChainComplex::new(Z, ranks, diffs).unwrap()
    }

    #[test]
    fn multiplication_by_two() {
        let c = times_two();
        let h = c.homology_window(-1, 2).unwrap();
        assert_eq!(h[1].1.torsion, vec![BigInt::from(2)]);
        assert_eq!(h[1].1.free_rank, 0);
        assert!(h[2].1.is_zero());
        assert!(h[0].1.is_zero() && h[3].1.is_zero());
        assert_eq!(h[1].1.primary_torsion(), vec!["2^1".to_string()]);
    }

    #[test]
    fn zero_differentials_give_ranks() {
        let c = ChainComplex::new(Q, BTreeMap::from([(0, 2), (3, 1)]), Degreewise::new()).unwrap();
        assert_eq!(c.homology(0).unwrap(), GroupReport::free(2));
        assert_eq!(c.homology(3).unwrap(), GroupReport::free(1));
    }

    #[test]
    fn koszul_piece_is_acyclic() {
        // 0 -> Q x^2 -> Q x^3 -> 0, multiplication by x
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let diffs = Degreewise::from([(1, ExactMatrix::from_i64(Q, &[&[1]]).unwrap())]);
        let c = ChainComplex::new(Q, ranks, diffs).unwrap();
        assert!(c.homology_all().unwrap().iter().all(|(_, h)| h.is_zero()));
    }

    #[test]
    fn rejects_nonzero_square() {
        let ranks = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
        let one = ExactMatrix::from_i64(Z, &[&[1]]).unwrap();
        let diffs = Degreewise::from([(1, one.clone()), (2, one)]);
        assert!(matches!(ChainComplex::new(Z, ranks, diffs), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn rejects_bad_shape() {
        let ranks = BTreeMap::from([(0, 1), (1, 2)]);
        let diffs = Degreewise::from([(1, ExactMatrix::from_i64(Z, &[&[1]]).unwrap())]);
        assert!(matches!(ChainComplex::new(Z, ranks, diffs), Err(Error::Dimension(_))));
    }

    #[test]
    fn tensor_of_times_two_with_itself() {
        let c = times_two();
        let t = c.tensor(&c).unwrap();
        assert_eq!(t.rank(0), 1);
        assert_eq!(t.rank(1), 2);
        assert_eq!(t.rank(2), 1);
        let two = vec![BigInt::from(2)];
        assert_eq!(t.homology(0).unwrap().torsion, two);
        assert_eq!(t.homology(1).unwrap().torsion, two);
        assert!(t.homology(2).unwrap().is_zero());
    }

    #[test]
    fn tensor_with_point_is_identity() {
        let c = times_two();
        assert_eq!(ChainComplex::point(Z).tensor(&c).unwrap(), c);
        assert_eq!(c.tensor(&ChainComplex::point(Z)).unwrap(), c);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = times_two();
        let cone = ChainMap::identity(&c).cone().unwrap();
        for (_, h) in cone.homology_window(-2, 3).unwrap() {
            assert!(h.is_zero());
        }
    }

    #[test]
    fn cyclic_ring_homology() {
        // 0 -> Z/4 --2--> Z/4 -> 0: H_0 = Z/2, H_1 = Z/2
        let r = BaseRing::cyclic(2, 2).unwrap();
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let diffs = Degreewise::from([(1, ExactMatrix::from_i64(r, &[&[2]]).unwrap())]);
        let c = ChainComplex::new(r, ranks, diffs).unwrap();
        assert_eq!(c.homology(0).unwrap().torsion, vec![BigInt::from(2)]);
        assert_eq!(c.homology(1).unwrap().torsion, vec![BigInt::from(2)]);
        let id = ChainComplex::concentrated(r, 0, 2);
        assert_eq!(id.homology(0).unwrap(), GroupReport::free(2));
    }

    #[test]
    fn p_local_drops_prime_to_p_torsion() {
        let r = BaseRing::p_local(2).unwrap();
        let ranks = BTreeMap::from([(0, 2), (1, 2)]);
        let diffs = Degreewise::from([(1, ExactMatrix::from_i64(r, &[&[3, 0], &[0, 4]]).unwrap())]);
        let c = ChainComplex::new(r, ranks, diffs).unwrap();
        assert_eq!(c.homology(0).unwrap().torsion, vec![BigInt::from(4)]);
    }

    #[test]
    fn weights_must_be_preserved() {
        let c = times_two();
        let bad = BTreeMap::from([(0, vec![0]), (1, vec![1])]);
        assert!(c.clone().with_weights(bad).is_err());
        let good = BTreeMap::from([(0, vec![3]), (1, vec![3])]);
        let w = c.with_weights(good).unwrap();
        assert_eq!(w.weight_piece(3).unwrap().rank(1), 1);
        assert!(w.weight_piece(2).unwrap().is_zero());
    }

    #[test]
    fn shift_relabels() {
        let c = times_two().shift(2);
        assert_eq!(c.homology(2).unwrap().torsion, vec![BigInt::from(2)]);
        assert_eq!(c.euler_characteristic(), 0);
    }
}
