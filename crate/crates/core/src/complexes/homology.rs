use std::fmt;

use log::warn;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exactalg::{factor, valuation, BaseRing, ExactMatrix, Scalar};
use crate::error::Result;

/// A finitely generated module over the base ring: free part plus cyclic
/// torsion summands (invariant factors, each > 1).
///
/// Over Z/p^k a copy of the ring itself counts as free; torsion entries are
/// the proper summands Z/p^e, e < k.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupReport {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupReport {
    pub fn free(rank: usize) -> Self {
        GroupReport {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Prime-power decomposition of the torsion, as `p^k` strings.
    pub fn primary_torsion(&self) -> Vec<String> {
        let mut out: Vec<(BigInt, u32)> = self.torsion.iter().flat_map(factor).collect();
        out.sort();
        out.into_iter().map(|(p, k)| format!("{p}^{k}")).collect()
    }
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("R/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for GroupReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupReport", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &self.primary_torsion())?;
        st.end()
    }
}

/// Homology at a spot `C_{n+1} --d_in--> C_n --d_out--> C_{n-1}`.
pub(crate) fn homology_at(ring: BaseRing, dim: usize, d_out: &ExactMatrix, d_in: &ExactMatrix) -> Result<GroupReport> {
    match ring {
        BaseRing::Rationals | BaseRing::PrimeField { .. } => {
            let r_out = d_out.rank()?;
            let r_in = d_in.rank()?;
            Ok(GroupReport::free(dim - r_out - r_in))
        }
        BaseRing::Integers => {
            let r_out = d_out.elementary_divisors()?.len();
            let ed_in = d_in.elementary_divisors()?;
            Ok(GroupReport {
                free_rank: dim - r_out - ed_in.len(),
                torsion: ed_in.into_iter().filter(|x| !x.is_one()).collect(),
            })
        }
        BaseRing::PLocalIntegers { p } => {
            let r_out = d_out.elementary_divisors()?.len();
            let ed_in = d_in.elementary_divisors()?;
            let pb = BigInt::from(p);
            let mut torsion = Vec::new();
            let mut dropped = Vec::new();
            for x in &ed_in {
                let v = valuation(x, p);
                if v > 0 {
                    torsion.push(pb.pow(v));
                }
                let rest = x / pb.pow(v);
                if !rest.is_one() {
                    dropped.push(rest);
                }
            }
            if !dropped.is_empty() {
                warn!("discarding prime-to-{p} torsion {dropped:?} over Z_({p})");
            }
            Ok(GroupReport {
                free_rank: dim - r_out - ed_in.len(),
                torsion,
            })
        }
        BaseRing::CyclicRing { p, k } => cyclic_homology_at(p, k, dim, d_out, d_in),
    }
}

/// Over Z/p^k: with K = {x in Z^m : d_out x = 0 mod p^k} and
/// L = im(d_in) + p^k Z^m, the homology is K / L.
fn cyclic_homology_at(p: u64, k: u32, dim: usize, d_out: &ExactMatrix, d_in: &ExactMatrix) -> Result<GroupReport> {
    let n = BigInt::from(p).pow(k);
    if dim == 0 {
        return Ok(GroupReport::default());
    }
    let z = BaseRing::Integers;
    let d_out_z = d_out.change_ring(z)?;
    let d_in_z = d_in.change_ring(z)?;
    // basis of K: columns v_i * c_i where d_out = U^-1 D V^-1
    let s = d_out_z.smith_normal_form()?;
    let mut scale = Vec::with_capacity(dim);
    for i in 0..dim {
        let di = if i < d_out_z.rows().min(dim) {
            s.d.get(i, i).numer().clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            scale.push(BigInt::one());
        } else {
            scale.push(&n / di.gcd(&n));
        }
    }
    // coordinates of generators of L in the K basis: diag(scale)^-1 V^-1 g
    let mut gens: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..d_in_z.cols() {
        gens.push(d_in_z.column(j));
    }
    for i in 0..dim {
        let mut e = vec![Scalar::zero(); dim];
        e[i] = Scalar::from_integer(n.clone());
        gens.push(e);
    }
    let mut coords = Vec::with_capacity(gens.len());
    for g in gens {
        let w = s.v_inv.apply(&g);
        let c: Vec<Scalar> = w
            .iter()
            .zip(&scale)
            .map(|(x, c)| x / Scalar::from_integer(c.clone()))
            .collect();
        debug_assert!(c.iter().all(|x| x.is_integer()), "image lies in the kernel lattice");
        coords.push(c);
    }
    let rel = ExactMatrix::from_columns(z, dim, &coords)?;
    let ed = rel.elementary_divisors()?;
    let mut out = GroupReport::default();
    for x in ed.iter().chain(std::iter::repeat(&BigInt::zero()).take(dim - ed.len())) {
        if x.is_one() {
            continue;
        }
        if x.is_zero() || *x == n {
            // K/L has exponent dividing p^k; full cyclic summands are free
            out.free_rank += 1;
        } else {
            out.torsion.push(x.abs());
        }
    }
    Ok(out)
}
