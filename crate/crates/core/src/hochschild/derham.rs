use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::algebra::FPGradedAlgebra;
use super::bar::{BarTuple, HochschildSlice};
use crate::complexes::{ChainComplex, Degreewise, GroupReport, MixedComplex};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, ExactMatrix, Scalar};

fn require_smooth(alg: &FPGradedAlgebra, what: &str) -> Result<()> {
    if !alg.is_smooth() {
        return Err(Error::Unsupported(format!("{what} implemented for smooth algebras only")));
    }
    Ok(())
}

/// `f · dx_{s_1} ∧ ... ∧ dx_{s_q}` with `s_1 < ... < s_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Form {
    pub monomial: Vec<u32>,
    pub dx: Vec<usize>,
}

/// De Rham complex of a polynomial algebra in one internal degree.
#[derive(Clone, Debug)]
pub struct DeRhamData {
    pub ring: BaseRing,
    pub internal_degree: u32,
    /// `forms[q]` is the basis of `Ω^q` in this internal degree.
    pub forms: Vec<Vec<Form>>,
    /// `d[q] : Ω^q -> Ω^{q+1}`.
    pub d: Vec<ExactMatrix>,
}

fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, q: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, q, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, q, 0, &mut Vec::new(), &mut out);
    out
}

/// Basis of `Ω^q` in internal degree `d`, ordered by the set of `dx`s, then
/// by the coefficient monomial.
pub fn form_basis(alg: &FPGradedAlgebra, q: usize, d: u32) -> Vec<Form> {
    let w = alg.weights();
    let mut out = Vec::new();
    for s in subsets(w.len(), q) {
        let ws: u64 = s.iter().map(|&i| w[i] as u64).sum();
        if ws > d as u64 {
            continue;
        }
        for m in alg.basis_in_degree(d as u64 - ws) {
            out.push(Form {
                monomial: m,
                dx: s.clone(),
            });
        }
    }
    out
}

impl DeRhamData {
    pub fn build(alg: &FPGradedAlgebra, d: u32) -> Result<Self> {
        require_smooth(alg, "de Rham complex")?;
        let ring = alg.ring();
        let n = alg.generators().len();
        let forms: Vec<Vec<Form>> = (0..=n).map(|q| form_basis(alg, q, d)).collect();
        let mut dd = Vec::new();
        for q in 0..n {
            let index: HashMap<&Form, usize> = forms[q + 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
            let mut m = ExactMatrix::zeros(ring, forms[q + 1].len(), forms[q].len());
            for (j, f) in forms[q].iter().enumerate() {
                for i in 0..n {
                    if f.monomial[i] == 0 || f.dx.contains(&i) {
                        continue;
                    }
                    let mut mono = f.monomial.clone();
                    mono[i] -= 1;
                    let before = f.dx.iter().filter(|&&s| s < i).count();
                    let mut dx = f.dx.clone();
                    dx.insert(before, i);
                    let row = index[&Form { monomial: mono, dx }];
                    let c = Scalar::from_integer(f.monomial[i].into());
                    let c = if before % 2 == 0 { c } else { -c };
                    m.add_to(row, j, &c);
                }
            }
            dd.push(m);
        }
        Ok(DeRhamData {
            ring,
            internal_degree: d,
            forms,
            d: dd,
        })
    }

    pub fn rank(&self, q: usize) -> usize {
        self.forms.get(q).map_or(0, Vec::len)
    }

    pub fn top_form_degree(&self) -> usize {
        self.forms.len() - 1
    }

    /// `Ω^{≥i}` with `Ω^q` in homological degree `2i - q`; for `i < 0` this is
    /// the whole complex, shifted.
    pub fn truncation(&self, i: i64) -> Result<ChainComplex> {
        let qmin = i.max(0) as usize;
        let mut ranks = BTreeMap::new();
        let mut diffs = Degreewise::new();
        for q in qmin..self.forms.len() {
            let deg = 2 * i - q as i64;
            ranks.insert(deg, self.rank(q));
            if q > qmin {
                diffs.insert(deg + 1, self.d[q - 1].clone());
            }
        }
        ChainComplex::new(self.ring, ranks, diffs)
    }

    /// `(Ω^*, 0, d_dR)` with `Ω^q` in degree `q` and weight `q`.
    pub fn mixed(&self) -> Result<MixedComplex> {
        let ranks = (0..self.forms.len()).map(|q| (q as i64, self.rank(q))).collect();
        let weights = (0..self.forms.len()).map(|q| (q as i64, vec![q as i64; self.rank(q)])).collect();
        let c = ChainComplex::new(self.ring, ranks, Degreewise::new())?.with_weights(weights)?;
        let b = self.d.iter().enumerate().map(|(q, m)| (q as i64, m.clone())).collect();
        MixedComplex::new(c, b)
    }
}

pub fn de_rham(alg: &FPGradedAlgebra, d: u32) -> Result<DeRhamData> {
    DeRhamData::build(alg, d)
}

/// Homology of `Ω^{≥i}` (degrees `2i - q`) in internal degree `d`, nonzero
/// groups only.
pub fn truncated_de_rham_homology(alg: &FPGradedAlgebra, i: i64, d: u32) -> Result<Vec<(i64, GroupReport)>> {
    let c = DeRhamData::build(alg, d)?.truncation(i)?;
    Ok(c.homology_all()?.into_iter().filter(|(_, h)| !h.is_zero()).collect())
}

fn permutations(q: usize) -> Vec<(Vec<usize>, bool)> {
    // (permutation, is_odd)
    if q == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(q - 1) {
        // insert q-1 at every position; moving it left past k entries adds k inversions
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, q - 1);
            let inv = p.len() - pos;
            out.push((v, odd ^ (inv % 2 == 1)));
        }
    }
    out
}

/// Antisymmetrization `ε_q : Ω^q_d -> C_q` as a matrix into the slice basis.
pub fn hkr_epsilon(alg: &FPGradedAlgebra, slice: &HochschildSlice, q: usize) -> Result<ExactMatrix> {
    require_smooth(alg, "HKR comparison")?;
    let ring = alg.ring();
    let d = slice.internal_degree;
    let forms = form_basis(alg, q, d);
    if q > slice.top {
        return Err(Error::OutOfRange(format!("slice stops at degree {}", slice.top)));
    }
    let w = alg.weights();
    let gen_index = |s: usize| -> (u32, u32) {
        let mut e = vec![0; w.len()];
        e[s] = 1;
        let i = alg.basis_in_degree(w[s] as u64).iter().position(|m| *m == e).unwrap();
        (w[s], i as u32)
    };
    let index: HashMap<&BarTuple, usize> = slice.bases[q].iter().enumerate().map(|(i, t)| (t, i)).collect();
    let perms = permutations(q);
    let mut m = ExactMatrix::zeros(ring, slice.rank(q), forms.len());
    for (j, f) in forms.iter().enumerate() {
        let fd = alg.weighted_degree(&f.monomial) as u32;
        let fi = alg.basis_in_degree(fd as u64).iter().position(|x| *x == f.monomial).unwrap() as u32;
        for (p, odd) in &perms {
            let mut t = vec![(fd, fi)];
            t.extend(p.iter().map(|&k| gen_index(f.dx[k])));
            let row = index[&t];
            let c = Scalar::from_integer(if *odd { (-1).into() } else { 1.into() });
            m.add_to(row, j, &c);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct HkrReport {
    pub q: usize,
    pub internal_degree: u32,
    pub form_rank: usize,
    pub hh: GroupReport,
    /// `b ∘ ε_q = 0`.
    pub cycles: bool,
    /// `ε_q` induces an isomorphism `Ω^q_d ≅ HH_q(A)_d`.
    pub isomorphism: bool,
}

fn boundary_into(slice: &HochschildSlice, q: usize) -> ExactMatrix {
    if q < slice.top {
        slice.b[q + 1].clone()
    } else {
        ExactMatrix::zeros(slice.ring, slice.rank(q), 0)
    }
}

/// Columns of `[ε | b_{q+1}]` span exactly the `q`-cycles and `ε` is
/// injective modulo boundaries.
fn realizes_iso(slice: &HochschildSlice, eps: &ExactMatrix, q: usize) -> Result<bool> {
    let ring = slice.ring;
    let boundaries = boundary_into(slice, q);
    let m = ExactMatrix::hstack(ring, slice.rank(q), &[eps, &boundaries])?;
    let (r_eps, r_b, r_m) = (eps.rank()?, boundaries.rank()?, m.rank()?);
    let cycles = slice.rank(q) - if q == 0 { 0 } else { slice.b[q].rank()? };
    if r_eps != eps.cols() || r_m != r_eps + r_b || r_m != cycles {
        return Ok(false);
    }
    if ring.is_field() || m.cols() == 0 || m.rows() == 0 {
        return Ok(true);
    }
    let inv = m.smith_normal_form()?.invariant_factors();
    Ok(inv.iter().filter(|x| !x.is_zero()).all(|x| ring.is_unit(x)))
}

/// HKR comparison in form degree `q` and internal degree `d`.
pub fn hkr_map(alg: &FPGradedAlgebra, q: usize, d: u32) -> Result<(ExactMatrix, HkrReport)> {
    require_smooth(alg, "HKR comparison")?;
    if matches!(alg.ring(), BaseRing::CyclicRing { .. }) {
        return Err(Error::Unsupported("HKR comparison over Z/p^k".into()));
    }
    let slice = HochschildSlice::build(alg, d, Some(q + 1))?;
    if q > slice.top {
        // C_q = 0 in this internal degree; so is Ω^q
        let rank = form_basis(alg, q, d).len();
        let report = HkrReport {
            q,
            internal_degree: d,
            form_rank: rank,
            hh: GroupReport::default(),
            cycles: true,
            isomorphism: rank == 0,
        };
        return Ok((ExactMatrix::zeros(alg.ring(), 0, rank), report));
    }
    let eps = hkr_epsilon(alg, &slice, q)?;
    let cycles = q == 0 || slice.b[q].mul(&eps)?.is_zero();
    let isomorphism = cycles && realizes_iso(&slice, &eps, q)?;
    let hh = slice.complex()?.homology(q as i64)?;
    let report = HkrReport {
        q,
        internal_degree: d,
        form_rank: eps.cols(),
        hh,
        cycles,
        isomorphism,
    };
    Ok((eps, report))
}

/// Matrix of `ε_{q+1}^{-1} ∘ B ∘ ε_q` on homology, to be compared with
/// `d_dR : Ω^q -> Ω^{q+1}`. Returns `(induced, d_dR)`.
pub fn connes_on_forms(alg: &FPGradedAlgebra, q: usize, d: u32) -> Result<(ExactMatrix, ExactMatrix)> {
    require_smooth(alg, "HKR comparison")?;
    let ring = alg.ring();
    let dr = DeRhamData::build(alg, d)?;
    let expected = if q < dr.d.len() {
        dr.d[q].clone()
    } else {
        ExactMatrix::zeros(ring, dr.rank(q + 1), dr.rank(q))
    };
    let slice = HochschildSlice::build(alg, d, Some(q + 2))?;
    if q + 1 > slice.top {
        return Ok((ExactMatrix::zeros(ring, expected.rows(), expected.cols()), expected));
    }
    let eps_q = hkr_epsilon(alg, &slice, q)?;
    let eps_next = hkr_epsilon(alg, &slice, q + 1)?;
    let image = slice.connes[q].mul(&eps_q)?;
    let boundaries = boundary_into(&slice, q + 1);
    let m = ExactMatrix::hstack(ring, slice.rank(q + 1), &[&eps_next, &boundaries])?;
    let x = m
        .solve(&image)?
        .ok_or_else(|| Error::NoSolution("B ε(ω) is not homologous to a form".into()))?;
    let rows: Vec<usize> = (0..eps_next.cols()).collect();
    Ok((x.select_rows(&rows), expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn alg(s: &str) -> FPGradedAlgebra {
        FPGradedAlgebra::parse(s).unwrap()
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        let odd = p.iter().filter(|x| x.1).count();
        assert_eq!(odd, 3);
        assert!(p.contains(&(vec![1, 0, 2], true)));
        assert!(p.contains(&(vec![1, 2, 0], false)));
    }

    #[test]
    fn poincare_lemma_on_the_line() {
        let a = alg("Q[x]");
        for d in 0..=5 {
            let h = truncated_de_rham_homology(&a, 0, d).unwrap();
            if d == 0 {
                assert_eq!(h, vec![(0, GroupReport::free(1))]);
            } else {
                assert!(h.is_empty(), "d = {d}");
            }
        }
    }

    #[test]
    fn cartier_pattern_mod_p() {
        let a = alg("F_3[x]");
        for d in 0..=7u32 {
            let c = DeRhamData::build(&a, d).unwrap().truncation(0).unwrap();
            let h0 = c.homology(0).unwrap().free_rank;
            assert_eq!(h0, usize::from(d % 3 == 0), "d = {d}");
        }
    }

    #[test]
    fn truncation_of_ground_ring() {
        let a = alg("Q");
        assert!(DeRhamData::build(&a, 0).unwrap().truncation(1).unwrap().is_zero());
    }

    #[test]
    fn de_rham_squares_to_zero() {
        let a = alg("Z[x,y,z(2)]");
        for d in 0..=4 {
            let dr = DeRhamData::build(&a, d).unwrap();
            for q in 1..dr.d.len() {
                assert!(dr.d[q].mul(&dr.d[q - 1]).unwrap().is_zero());
            }
            dr.mixed().unwrap();
        }
    }

    #[test]
    fn hkr_in_degree_zero_is_identity() {
        let a = alg("Q[x,y]");
        let (eps, rep) = hkr_map(&a, 0, 3).unwrap();
        assert_eq!(eps, ExactMatrix::identity(BaseRing::Rationals, 4));
        assert!(rep.isomorphism);
    }

    #[test]
    fn hkr_f2_line() {
        let a = alg("F_2[x]");
        let (_, rep) = hkr_map(&a, 1, 3).unwrap();
        assert_eq!(rep.form_rank, 1);
        assert_eq!(rep.hh, GroupReport::free(1));
        assert!(rep.cycles && rep.isomorphism);
    }

    #[test]
    fn hkr_plane_top_form() {
        let a = alg("Q[x,y]");
        let slice = HochschildSlice::build(&a, 2, Some(3)).unwrap();
        let eps = hkr_epsilon(&a, &slice, 2).unwrap();
        let col = eps.column(0);
        let xy = slice.index_of(2, &vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        let yx = slice.index_of(2, &vec![(0, 0), (1, 1), (1, 0)]).unwrap();
        assert_eq!((col[xy].clone(), col[yx].clone()), (int(1), int(-1)));
        let (_, rep) = hkr_map(&a, 2, 2).unwrap();
        assert!(rep.cycles && rep.isomorphism);
        assert_eq!(rep.hh, GroupReport::free(1));
    }

    #[test]
    fn connes_b_of_x_squared_is_2x_dx() {
        let a = alg("Q[x]");
        let (induced, expected) = connes_on_forms(&a, 0, 2).unwrap();
        assert_eq!(induced, expected);
        assert_eq!(induced.get(0, 0), &int(2));
    }

    #[test]
    fn singular_algebras_are_refused() {
        let a = alg("Q[x]/(x^2)");
        assert!(matches!(hkr_map(&a, 1, 2), Err(Error::Unsupported(_))));
        assert!(DeRhamData::build(&a, 1).is_err());
    }
}
