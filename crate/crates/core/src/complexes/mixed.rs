use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{ChainComplex, Degreewise};
use super::homology::GroupReport;
use crate::error::{Error, Result};
use crate::exactalg::ExactMatrix;

/// Chain complex with a square-zero operator `B_n : M_n -> M_{n+1}`
/// anticommuting with `d`.
#[derive(Clone, Debug)]
pub struct MixedComplex {
    underlying: ChainComplex,
    b: Degreewise,
}

/// One row of a `u`-truncated homology table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UHomologyRow {
    pub degree: i64,
    pub group: GroupReport,
    /// Unchanged when the truncation order grows by one.
    pub stable: bool,
}

impl MixedComplex {
    pub fn new(underlying: ChainComplex, b: Degreewise) -> Result<Self> {
        let c = &underlying;
        let mut kept = Degreewise::new();
        for (n, m) in b {
            if m.ring() != c.ring() {
                return Err(Error::RingMismatch(c.ring().to_string(), m.ring().to_string()));
            }
            if m.rows() != c.rank(n + 1) || m.cols() != c.rank(n) {
                return Err(Error::Dimension(format!("B_{n} has the wrong shape")));
            }
            if m.rows() > 0 && m.cols() > 0 {
                kept.insert(n, m);
            }
        }
        let out = MixedComplex { underlying, b: kept };
        let c = &out.underlying;
        for (&n, m) in &out.b {
            if !out.b_op(n + 1).mul(m)?.is_zero() {
                return Err(Error::InvalidComplex(format!("B_{} B_{n} != 0", n + 1)));
            }
            if let (Some(src), Some(tgt)) = (c.weights(n), c.weights(n + 1)) {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        if !num_traits::Zero::is_zero(m.get(i, j)) && tgt[i] != src[j] + 1 {
                            return Err(Error::InvalidComplex(format!("B_{n} does not raise weight by 1")));
                        }
                    }
                }
            }
        }
        if let Some((lo, hi)) = c.support() {
            for n in lo..=hi {
                let lhs = c.differential(n + 1).mul(&out.b_op(n))?;
                let rhs = out.b_op(n - 1).mul(&c.differential(n))?;
                if !lhs.add(&rhs)?.is_zero() {
                    return Err(Error::InvalidComplex(format!("dB + Bd != 0 in degree {n}")));
                }
            }
        }
        Ok(out)
    }

    pub fn underlying(&self) -> &ChainComplex {
        &self.underlying
    }

    /// `B_n`, zero when not stored.
    pub fn b_op(&self, n: i64) -> ExactMatrix {
        let c = &self.underlying;
        self.b
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(c.ring(), c.rank(n + 1), c.rank(n)))
    }

    /// Total complex of `M[[u]]/u^U` with differential `d + uB`; `u` has
    /// degree -2 and weight -1. Degree `n` is `⊕_{j<U} M_{n+2j}` ordered by
    /// `j`.
    pub fn total_u_complex(&self, u_order: usize) -> Result<ChainComplex> {
        if u_order == 0 {
            return Err(Error::OutOfRange("u-truncation order must be at least 1".into()));
        }
        let c = &self.underlying;
        let ring = c.ring();
        let Some((lo, hi)) = c.support() else {
            return Ok(ChainComplex::zero(ring));
        };
        let u = u_order as i64;
        let t_lo = lo - 2 * (u - 1);
        let blocks = |n: i64| -> Vec<(i64, usize)> {
            let mut off = 0;
            let mut out = Vec::new();
            for j in 0..u {
                out.push((j, off));
                off += c.rank(n + 2 * j);
            }
            out
        };
        let rank = |n: i64| (0..u).map(|j| c.rank(n + 2 * j)).sum::<usize>();
        let mut ranks = BTreeMap::new();
        let mut diffs = Degreewise::new();
        let mut weights = BTreeMap::new();
        for n in t_lo..=hi {
            ranks.insert(n, rank(n));
            if c.weights(n).is_some() {
                let mut w = Vec::new();
                for j in 0..u {
                    w.extend(c.weights(n + 2 * j).unwrap().iter().map(|x| x - j));
                }
                weights.insert(n, w);
            }
            let (rows, cols) = (rank(n - 1), rank(n));
            if rows == 0 || cols == 0 {
                continue;
            }
            let (src, tgt) = (blocks(n), blocks(n - 1));
            let mut d = ExactMatrix::zeros(ring, rows, cols);
            for &(j, c0) in &src {
                let m = n + 2 * j;
                // d keeps the u-power
                d.set_block(tgt[j as usize].1, c0, &c.differential(m));
                // uB lands in the next power
                if j + 1 < u {
                    d.set_block(tgt[j as usize + 1].1, c0, &self.b_op(m));
                }
            }
            diffs.insert(n, d);
        }
        let total = ChainComplex::new(ring, ranks, diffs)?;
        if c.has_weights() {
            total.with_weights(weights)
        } else {
            Ok(total)
        }
    }

    /// Homology of the `U`-truncation in `lo..=hi`, each degree flagged
    /// stable when the `U+1` truncation agrees.
    pub fn u_homology(&self, u_order: usize, lo: i64, hi: i64) -> Result<Vec<UHomologyRow>> {
        let a = self.total_u_complex(u_order)?.homology_window(lo, hi)?;
        let b = self.total_u_complex(u_order + 1)?.homology_window(lo, hi)?;
        Ok(a
            .into_iter()
            .zip(b)
            .map(|((degree, group), (_, next))| UHomologyRow {
                degree,
                stable: group == next,
                group,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, BaseRing, Scalar};

    const Q: BaseRing = BaseRing::Rationals;

    /// Q[x] (degree 0) and Q[x]dx (degree 1) in internal degree <= `n`,
    /// zero d, B = de Rham d, weight = form degree.
    fn de_rham_line(n: usize) -> MixedComplex {
        let ranks = BTreeMap::from([(0, n + 1), (1, n)]);
        let weights = BTreeMap::from([(0, vec![0; n + 1]), (1, vec![1; n])]);
        // x^k -> k x^{k-1} dx; basis x^0..x^n and x^0 dx..x^{n-1} dx
        let b = ExactMatrix::from_fn(Q, n, n + 1, |i, j| {
            if j == i + 1 {
                int(j as i64)
            } else {
                Scalar::from_integer(0.into())
            }
        })
        .unwrap();
        let c = ChainComplex::new(Q, ranks, Degreewise::new())
            .unwrap()
            .with_weights(weights)
            .unwrap();
        MixedComplex::new(c, Degreewise::from([(0, b)])).unwrap()
    }

    #[test]
    fn point_gives_u_tower() {
        let m = MixedComplex::new(ChainComplex::point(Q), Degreewise::new()).unwrap();
        let t = m.total_u_complex(3).unwrap();
        for (n, h) in t.homology_window(-6, 1).unwrap() {
            let want = usize::from(matches!(n, 0 | -2 | -4));
            assert_eq!(h, GroupReport::free(want), "degree {n}");
        }
    }

    #[test]
    fn zero_b_is_sum_of_shifts() {
        let m = MixedComplex::new(ChainComplex::concentrated(Q, 1, 2), Degreewise::new()).unwrap();
        let t = m.total_u_complex(2).unwrap();
        assert_eq!(t.rank(1), 2);
        assert_eq!(t.rank(-1), 2);
        assert_eq!(t.homology(-1).unwrap(), GroupReport::free(2));
    }

    // Two-column totalization by hand: in degree 0 only M_0 contributes
    // (M_2 = 0) and the map to degree -1 is B into the u-column, so H_0 is
    // the kernel of d_dR, the constants.
    #[test]
    fn de_rham_two_columns() {
        let m = de_rham_line(4);
        let rows = m.u_homology(2, -2, 0).unwrap();
        assert_eq!(rows[2].group, GroupReport::free(1));
        assert_eq!(rows[1].group, GroupReport::free(0));
        // u·Q[x] is not yet cut down to constants at order 2
        assert_eq!(rows[0].group, GroupReport::free(5));
        assert!(!rows[0].stable);
        assert!(rows[1].stable && rows[2].stable);
    }

    #[test]
    fn de_rham_stabilizes() {
        let m = de_rham_line(3);
        for u in 2..5usize {
            let lo = -2 * (u as i64 - 2);
            for row in m.u_homology(u, lo, 1).unwrap() {
                assert!(row.stable, "U={u} degree {}", row.degree);
            }
        }
    }

    #[test]
    fn weights_shift_with_u() {
        let m = de_rham_line(1);
        let t = m.total_u_complex(2).unwrap();
        // degree -1 is u·M_1, Hodge weight 1 - 1
        assert_eq!(t.weights(-1).unwrap(), &[0]);
    }

    #[test]
    fn rejects_b_not_square_zero() {
        let ranks = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
        let c = ChainComplex::new(Q, ranks, Degreewise::new()).unwrap();
        let one = ExactMatrix::identity(Q, 1);
        let b = Degreewise::from([(0, one.clone()), (1, one)]);
        assert!(MixedComplex::new(c, b).is_err());
    }

    #[test]
    fn rejects_non_anticommuting() {
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let one = ExactMatrix::identity(Q, 1);
        let c = ChainComplex::new(Q, ranks, Degreewise::from([(1, one.clone())])).unwrap();
        // dB + Bd on M_0 = d_1 B_0 = 1
        assert!(MixedComplex::new(c, Degreewise::from([(0, one)])).is_err());
    }
}
