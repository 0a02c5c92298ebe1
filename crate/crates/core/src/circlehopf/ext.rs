use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::hopf::{BasisElement, GradedHopfAlgebra};
use crate::complexes::{ChainComplex, Degreewise};
use crate::error::{Error, Result};
use crate::exactalg::{BaseRing, ExactMatrix, Scalar};
use crate::report::Check;

/// Finite-rank algebra over a field with an augmentation to the field and
/// a nilpotent augmentation ideal.
#[derive(Clone, Debug)]
pub struct AugmentedAlgebra {
    name: String,
    ring: BaseRing,
    basis: Vec<BasisElement>,
    unit: Vec<Scalar>,
    mul: Vec<Vec<Scalar>>,
    augmentation: Vec<Scalar>,
    left: Vec<ExactMatrix>,
}

impl AugmentedAlgebra {
    pub fn new(
        name: impl Into<String>,
        ring: BaseRing,
        basis: Vec<BasisElement>,
        unit: Vec<Scalar>,
        mul: Vec<Vec<Scalar>>,
        augmentation: Vec<Scalar>,
    ) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::FieldRequired(ring.to_string()));
        }
        let n = basis.len();
        if unit.len() != n || augmentation.len() != n || mul.len() != n * n || mul.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension("augmented algebra constants have the wrong shape".into()));
        }
        let mut left = Vec::with_capacity(n);
        for i in 0..n {
            let cols: Vec<Vec<Scalar>> = (0..n).map(|j| mul[i * n + j].clone()).collect();
            left.push(ExactMatrix::from_columns(ring, n, &cols)?);
        }
        let a = AugmentedAlgebra {
            name: name.into(),
            ring,
            unit: unit.into_iter().map(|x| ring.normalize(x)).collect::<Result<_>>()?,
            augmentation: augmentation.into_iter().map(|x| ring.normalize(x)).collect::<Result<_>>()?,
            mul: left.iter().flat_map(|l| (0..n).map(|j| l.column(j))).collect(),
            basis,
            left,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank();
        let fail = |what: &str| Err(Error::InvalidComplex(format!("{}: {what}", self.name)));
        for i in 0..n {
            if self.product(&self.unit, &self.e(i)) != self.e(i) || self.product(&self.e(i), &self.unit) != self.e(i) {
                return fail("unit law");
            }
            for j in 0..n {
                let ij = &self.mul[i * n + j];
                if self.aug(ij) != self.ring.mul(&self.augmentation[i], &self.augmentation[j]) {
                    return fail("augmentation is not multiplicative");
                }
                for (k, c) in ij.iter().enumerate() {
                    let bi = &self.basis[i];
                    let bj = &self.basis[j];
                    let bk = &self.basis[k];
                    if !c.is_zero() && (bk.degree, bk.weight) != (bi.degree + bj.degree, bi.weight + bj.weight) {
                        return fail("product is not homogeneous");
                    }
                }
                for k in 0..n {
                    if self.product(ij, &self.e(k)) != self.product(&self.e(i), &self.mul[j * n + k]) {
                        return fail("associativity");
                    }
                }
            }
        }
        if !self.aug(&self.unit).is_one() {
            return fail("augmentation of 1 is not 1");
        }
        // nilpotence: I^n = 0 on a basis of I
        let ideal = self.ideal_basis()?;
        let mut power = ideal.clone();
        for _ in 0..n {
            let mut next = Vec::new();
            for u in &power {
                for v in &ideal {
                    let w = self.product(u, v);
                    if !w.iter().all(Zero::is_zero) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return Ok(());
            }
            let m = ExactMatrix::from_columns(self.ring, n, &next)?;
            power = m.column_space_basis()?.transpose().entries().chunks(n).map(<[Scalar]>::to_vec).collect();
        }
        Err(Error::Unsupported(format!("{}: augmentation ideal is not nilpotent", self.name)))
    }

    /// `k[T]/T^N` with `T` in degree 0 and weight 1.
    pub fn truncated_polynomial(ring: BaseRing, order: usize) -> Result<Self> {
        let n = order;
        let basis = (0..n).map(|a| BasisElement::new(format!("T^{a}"), 0, a as i64)).collect();
        let mut mul = vec![vec![Scalar::zero(); n]; n * n];
        for a in 0..n {
            for b in 0..n - a {
                mul[a * n + b][a + b] = Scalar::one();
            }
        }
        let mut unit = vec![Scalar::zero(); n];
        unit[0] = Scalar::one();
        AugmentedAlgebra::new(format!("{ring}[T]/T^{n}"), ring, basis, unit.clone(), mul, unit)
    }

    /// Underlying augmented algebra of a Hopf algebra (augmentation = counit).
    pub fn from_hopf(h: &GradedHopfAlgebra) -> Result<Self> {
        let d = h.data();
        AugmentedAlgebra::new(
            h.name(),
            h.ring(),
            d.basis.clone(),
            d.unit.clone(),
            d.mul.clone(),
            d.counit.clone(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    fn e(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rank()];
        v[i] = Scalar::one();
        v
    }

    fn bideg(&self, i: usize) -> (i64, i64) {
        (self.basis[i].degree, self.basis[i].weight)
    }

    pub fn product(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        let mut out = vec![Scalar::zero(); n];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                for (k, c) in self.mul[i * n + j].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    out[k] += x * y * c;
                }
            }
        }
        out.into_iter().map(|x| self.ring.reduce(x)).collect()
    }

    fn aug(&self, a: &[Scalar]) -> Scalar {
        self.ring.reduce(a.iter().zip(&self.augmentation).map(|(x, y)| x * y).sum())
    }

    /// Homogeneous basis of the augmentation ideal.
    fn ideal_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        let n = self.rank();
        let mut out = Vec::new();
        for idx in self.bidegree_blocks(&[(0, 0)]).into_values() {
            let row = ExactMatrix::new(self.ring, 1, idx.len(), idx.iter().map(|&i| self.augmentation[i].clone()).collect())?;
            for k in row.kernel_basis()? {
                let mut v = vec![Scalar::zero(); n];
                for (c, &i) in k.into_iter().zip(&idx) {
                    v[i] = c;
                }
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Coordinates of the free module with generators in the given
    /// bidegrees, grouped by bidegree.
    fn bidegree_blocks(&self, shifts: &[(i64, i64)]) -> BTreeMap<(i64, i64), Vec<usize>> {
        let n = self.rank();
        let mut out: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (g, &(sd, sw)) in shifts.iter().enumerate() {
            for b in 0..n {
                let (d, w) = self.bideg(b);
                out.entry((sd + d, sw + w)).or_default().push(g * n + b);
            }
        }
        out
    }
}

/// k-matrix of the module map `A^r -> B^{r'}` sending generator `g` to
/// `images[g]`, where `action[b]` is the action of source basis element `b`
/// on one copy of the target algebra.
fn module_map(action: &[ExactMatrix], target_rank: usize, images: &[Vec<Scalar>], ring: BaseRing) -> Result<ExactMatrix> {
    let n_src = action.len();
    let n_tgt = action.first().map_or(0, ExactMatrix::rows);
    let mut cols = Vec::with_capacity(images.len() * n_src);
    for img in images {
        for act in action {
            let mut col = Vec::with_capacity(target_rank * n_tgt);
            for h in 0..target_rank {
                col.extend(act.apply(&img[h * n_tgt..(h + 1) * n_tgt]));
            }
            cols.push(col.into_iter().map(|x| ring.reduce(x)).collect());
        }
    }
    ExactMatrix::from_columns(ring, target_rank * n_tgt, &cols)
}

fn normalize_leading(ring: BaseRing, v: Vec<Scalar>) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()).and_then(|x| ring.inv(x)) {
        Some(inv) => v.iter().map(|x| ring.mul(x, &inv)).collect(),
        None => v,
    }
}

/// Minimal free resolution `… -> P_1 -> P_0 = A -> k` up to a length.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    alg: AugmentedAlgebra,
    /// Bidegree of every generator of `P_s`.
    pub shifts: Vec<Vec<(i64, i64)>>,
    /// `images[s][g]`: image in `P_{s-1}` of generator `g` of `P_s` (s >= 1).
    images: Vec<Vec<Vec<Scalar>>>,
    /// `diffs[s]`: k-matrix of `P_s -> P_{s-1}` (s >= 1).
    diffs: Vec<ExactMatrix>,
}

const DEFAULT_EXT_BUDGET: usize = 4000;

impl MinimalResolution {
    pub fn build(alg: &AugmentedAlgebra, length: usize) -> Result<Self> {
        let budget = crate::env_budget(DEFAULT_EXT_BUDGET);
        let ring = alg.ring;
        let n = alg.rank();
        let ideal = alg.ideal_basis()?;
        let mut shifts = vec![vec![(0, 0)]];
        let mut images = vec![Vec::new()];
        let mut diffs = vec![ExactMatrix::zeros(ring, 0, n)];
        let mut current = ExactMatrix::new(ring, 1, n, alg.augmentation.clone())?;
        for s in 0..length {
            let here = &shifts[s];
            let dim = here.len() * n;
            let blocks = alg.bidegree_blocks(here);
            let mut chosen: Vec<(Vec<Scalar>, (i64, i64))> = Vec::new();
            let act = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
                (0..here.len()).flat_map(|g| alg.product(u, &v[g * n..(g + 1) * n])).collect()
            };
            // kernel per bidegree, then a complement of I·K inside it
            let mut kernel: BTreeMap<(i64, i64), Vec<Vec<Scalar>>> = BTreeMap::new();
            for (beta, idx) in &blocks {
                let sub = current.select_cols(idx);
                let ks: Vec<Vec<Scalar>> = sub
                    .kernel_basis()?
                    .into_iter()
                    .map(|k| {
                        let mut v = vec![Scalar::zero(); dim];
                        for (c, &i) in k.into_iter().zip(idx) {
                            v[i] = c;
                        }
                        v
                    })
                    .collect();
                if !ks.is_empty() {
                    kernel.insert(*beta, ks);
                }
            }
            let mut decomposable: BTreeMap<(i64, i64), Vec<Vec<Scalar>>> = BTreeMap::new();
            for ((kd, kw), ks) in &kernel {
                for u in &ideal {
                    let (ud, uw) = (0..n).find(|&i| !u[i].is_zero()).map(|i| alg.bideg(i)).unwrap();
                    for v in ks {
                        let w = act(u, v);
                        if !w.iter().all(Zero::is_zero) {
                            decomposable.entry((kd + ud, kw + uw)).or_default().push(w);
                        }
                    }
                }
            }
            for (beta, ks) in &kernel {
                let dec = decomposable.remove(beta).unwrap_or_default();
                let all: Vec<Vec<Scalar>> = dec.iter().chain(ks).cloned().collect();
                let m = ExactMatrix::from_columns(ring, dim, &all)?;
                for p in m.pivot_columns()? {
                    if p >= dec.len() {
                        chosen.push((normalize_leading(ring, all[p].clone()), *beta));
                    }
                }
            }
            let next_dim = chosen.len() * n;
            if next_dim > budget {
                return Err(Error::Budget {
                    what: format!("P_{} of the resolution of {}", s + 1, alg.name),
                    dimension: next_dim,
                    budget,
                });
            }
            let imgs: Vec<Vec<Scalar>> = chosen.iter().map(|(v, _)| v.clone()).collect();
            let d = module_map(&alg.left, here.len(), &imgs, ring)?;
            shifts.push(chosen.iter().map(|&(_, b)| b).collect());
            images.push(imgs);
            diffs.push(d.clone());
            current = d;
        }
        Ok(MinimalResolution {
            alg: alg.clone(),
            shifts,
            images,
            diffs,
        })
    }

    pub fn length(&self) -> usize {
        self.shifts.len() - 1
    }

    pub fn rank(&self, s: usize) -> usize {
        self.shifts[s].len()
    }

    /// Lifts of a chain map given on generators of `P_{start}` by its
    /// degree-0 component, for `i = 0..=top`. `action` is how the source
    /// algebra acts on the target (for restriction of scalars along an
    /// algebra map).
    fn lift(
        &self,
        target: &MinimalResolution,
        action: &[ExactMatrix],
        start: usize,
        top: usize,
        first: Vec<Vec<Scalar>>,
    ) -> Result<Vec<Vec<Vec<Scalar>>>> {
        let ring = self.alg.ring;
        let mut maps = vec![first];
        for i in 1..=top {
            let prev = module_map(action, target.rank(i - 1), &maps[i - 1], ring)?;
            let mut cols = Vec::new();
            for img in &self.images[start + i] {
                cols.push(prev.apply(img).into_iter().map(|x| ring.reduce(x)).collect());
            }
            let rhs = ExactMatrix::from_columns(ring, prev.rows(), &cols)?;
            let x = target.diffs[i]
                .solve(&rhs)?
                .ok_or_else(|| Error::NoSolution(format!("chain map lift in degree {i}")))?;
            maps.push((0..x.cols()).map(|j| x.column(j)).collect());
        }
        Ok(maps)
    }

    /// Evaluates the class dual to generator `k` of `P_t` on a vector of
    /// `P_t`.
    fn evaluate(&self, k: usize, v: &[Scalar]) -> Scalar {
        let n = self.alg.rank();
        self.alg.aug(&v[k * n..(k + 1) * n])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    /// Resolution degree.
    pub s: usize,
    /// Homological degree of the dual generator.
    pub internal_degree: i64,
    pub weight: i64,
    /// `s + internal_degree`.
    pub cohomological_degree: i64,
    pub dim: usize,
}

/// `left · right = Σ value_i x_i` over the basis of `Ext^{s+t}` given by
/// the duals of the generators, in order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YonedaProduct {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub value: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtTable {
    pub algebra: String,
    pub degree_bound: usize,
    pub rows: Vec<ExtRow>,
    pub products: Vec<YonedaProduct>,
}

impl ExtTable {
    /// Total dimension per resolution degree `0..=degree_bound`.
    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree_bound + 1];
        for r in &self.rows {
            out[r.s] += r.dim;
        }
        out
    }

    pub fn product(&self, left: (usize, usize), right: (usize, usize)) -> Option<&[String]> {
        self.products
            .iter()
            .find(|p| p.left == left && p.right == right)
            .map(|p| p.value.as_slice())
    }
}

fn rows_from(counts: BTreeMap<(usize, i64, i64), usize>) -> Vec<ExtRow> {
    counts
        .into_iter()
        .map(|((s, t, w), dim)| ExtRow {
            s,
            internal_degree: t,
            weight: w,
            cohomological_degree: s as i64 + t,
            dim,
        })
        .collect()
}

/// `Ext_A(k, k)` up to resolution degree `degree_bound`, from a minimal
/// resolution, with all Yoneda products landing in the range.
pub fn ext_self(alg: &AugmentedAlgebra, degree_bound: usize) -> Result<ExtTable> {
    let res = MinimalResolution::build(alg, degree_bound)?;
    let ring = alg.ring;
    let mut counts = BTreeMap::new();
    for s in 0..=degree_bound {
        for &(t, w) in &res.shifts[s] {
            *counts.entry((s, t, -w)).or_insert(0) += 1;
        }
    }
    let mut products = Vec::new();
    for s in 1..degree_bound {
        for j in 0..res.rank(s) {
            let first = (0..res.rank(s))
                .map(|g| if g == j { alg.unit.clone() } else { vec![Scalar::zero(); alg.rank()] })
                .collect();
            let maps = res.lift(&res, &alg.left, s, degree_bound - s, first)?;
            for t in 1..=degree_bound - s {
                for k in 0..res.rank(t) {
                    let value = maps[t].iter().map(|img| res.evaluate(k, img)).map(|c| ring.reduce(c).to_string()).collect();
                    products.push(YonedaProduct {
                        left: (t, k),
                        right: (s, j),
                        value,
                    });
                }
            }
        }
    }
    products.sort_by_key(|p| (p.left, p.right));
    Ok(ExtTable {
        algebra: alg.name.clone(),
        degree_bound,
        rows: rows_from(counts),
        products,
    })
}

/// Independent oracle: dimensions of `Tor^A_s(k, k)` from the normalized
/// bar complex, dualized to `Ext` bidegrees. Needs a basis whose first
/// element is `1` and whose other elements span the augmentation ideal.
pub fn ext_dims_by_bar(alg: &AugmentedAlgebra, degree_bound: usize) -> Result<Vec<ExtRow>> {
    let n = alg.rank();
    let adapted = alg.unit == alg.e(0) && alg.augmentation == alg.e(0);
    if !adapted {
        return Err(Error::Unsupported("bar oracle needs a basis adapted to the augmentation".into()));
    }
    let budget = crate::env_budget(DEFAULT_EXT_BUDGET);
    let total: usize = (0..=degree_bound + 1).map(|s| (n - 1).pow(s as u32)).sum();
    if total > budget {
        return Err(Error::Budget {
            what: format!("bar complex of {}", alg.name),
            dimension: total,
            budget,
        });
    }
    // tuples of ideal basis indices, grouped by total bidegree
    let mut by_bideg: BTreeMap<(i64, i64), BTreeMap<usize, Vec<Vec<usize>>>> = BTreeMap::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for s in 0..=degree_bound + 1 {
        for t in &layer {
            let b = t.iter().fold((0, 0), |(d, w), &i| (d + alg.bideg(i).0, w + alg.bideg(i).1));
            by_bideg.entry(b).or_default().entry(s).or_default().push(t.clone());
        }
        layer = layer
            .iter()
            .flat_map(|t| (1..n).map(move |i| t.iter().copied().chain([i]).collect()))
            .collect();
    }
    let ring = alg.ring;
    let mut counts = BTreeMap::new();
    for ((bd, bw), tuples) in by_bideg {
        let ranks: BTreeMap<i64, usize> = tuples.iter().map(|(&s, v)| (s as i64, v.len())).collect();
        let mut diffs = Degreewise::new();
        for (&s, src) in &tuples {
            let Some(tgt) = s.checked_sub(1).and_then(|t| tuples.get(&t)) else {
                continue;
            };
            let index: BTreeMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let mut d = ExactMatrix::zeros(ring, tgt.len(), src.len());
            for (c, tup) in src.iter().enumerate() {
                for i in 0..s.saturating_sub(1) {
                    let sign = if i % 2 == 0 { -Scalar::one() } else { Scalar::one() };
                    for (k, x) in alg.mul[tup[i] * n + tup[i + 1]].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let mut merged = tup[..i].to_vec();
                        merged.push(k);
                        merged.extend_from_slice(&tup[i + 2..]);
                        let r = index[&merged];
                        d.add_to(r, c, &(&sign * x));
                    }
                }
            }
            diffs.insert(s as i64, d);
        }
        let cx = ChainComplex::new(ring, ranks, diffs)?;
        for s in 0..=degree_bound {
            let h = cx.homology(s as i64)?;
            if h.free_rank > 0 {
                counts.insert((s, bd, -bw), h.free_rank);
            }
        }
    }
    Ok(rows_from(counts))
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionRow {
    pub from_m: u32,
    pub to_m: u32,
    /// Rank of `Ext^s` restriction per degree `s`.
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub p: u64,
    pub m_max: u32,
    /// `dims[m - 1][s]` for `F_p[T]/T^{p^m}`.
    pub dims: Vec<Vec<usize>>,
    pub transitions: Vec<TransitionRow>,
    /// Image of the last transition map, per degree.
    pub colimit: Vec<usize>,
    pub checks: Vec<Check>,
}

const TOWER_DEGREES: usize = 3;

/// Matrix of `Ext^s_{A_m}(k,k) -> Ext^s_{A_{m+1}}(k,k)` for every `s`, by
/// restriction along `A_{m+1} -> A_m`.
fn restriction_maps(big: &MinimalResolution, small: &MinimalResolution) -> Result<Vec<ExactMatrix>> {
    let ring = big.alg.ring;
    let (nb, ns) = (big.alg.rank(), small.alg.rank());
    // T^i ↦ T^i, or 0 past the truncation
    let action: Vec<ExactMatrix> = (0..nb)
        .map(|b| {
            if b < ns {
                small.alg.left[b].clone()
            } else {
                ExactMatrix::zeros(ring, ns, ns)
            }
        })
        .collect();
    let top = big.length().min(small.length());
    let maps = big.lift(small, &action, 0, top, vec![small.alg.unit.clone()])?;
    let mut out = Vec::new();
    for (s, m) in maps.iter().enumerate() {
        let rows: Vec<Scalar> = (0..big.rank(s))
            .flat_map(|g| (0..small.rank(s)).map(move |k| (g, k)))
            .map(|(g, k)| small.evaluate(k, &m[g]))
            .collect();
        out.push(ExactMatrix::new(ring, big.rank(s), small.rank(s), rows)?);
    }
    Ok(out)
}

/// Ext over `F_p[T]/T^{p^m}` for `m = 1..=m_max` with the restriction
/// maps, and the colimit in degrees `0..=3`.
pub fn ext_colimit_tower(p: u64, m_max: u32) -> Result<TowerReport> {
    if !matches!(p, 2 | 3) || !(2..=3).contains(&m_max) {
        return Err(Error::OutOfRange(format!("tower needs p in {{2, 3}} and 2 <= m_max <= 3 (got p={p}, m_max={m_max})")));
    }
    let ring = BaseRing::prime_field(p)?;
    let mut res = Vec::new();
    for m in 1..=m_max {
        let alg = AugmentedAlgebra::truncated_polynomial(ring, p.pow(m) as usize)?;
        res.push(MinimalResolution::build(&alg, TOWER_DEGREES)?);
    }
    let dims: Vec<Vec<usize>> = res.iter().map(|r| (0..=TOWER_DEGREES).map(|s| r.rank(s)).collect()).collect();
    let mut transitions = Vec::new();
    let mut last = Vec::new();
    for m in 1..m_max {
        let maps = restriction_maps(&res[m as usize], &res[m as usize - 1])?;
        let ranks = maps.iter().map(ExactMatrix::rank).collect::<Result<Vec<_>>>()?;
        transitions.push(TransitionRow {
            from_m: m,
            to_m: m + 1,
            ranks: ranks.clone(),
        });
        last = ranks;
    }
    let colimit = last;
    let mut checks = Vec::new();
    let expected = [1, 1, 0, 0];
    checks.push(Check::from_bool(
        format!("Ext colimit over F_{p}[T]/T^(p^m) is k + k[-1]"),
        colimit == expected,
        || format!("colimit dims {colimit:?}, expected {expected:?}"),
    ));
    let degree_two_dies = transitions.iter().all(|t| t.ranks[2] == 0);
    checks.push(Check::from_bool("degree-2 classes die under restriction", degree_two_dies, || {
        format!("transition ranks {:?}", transitions.iter().map(|t| &t.ranks).collect::<Vec<_>>())
    }));
    Ok(TowerReport {
        p,
        m_max,
        dims,
        transitions,
        colimit,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::super::hopf::exterior;
    use super::*;

    fn fp(p: u64) -> BaseRing {
        BaseRing::prime_field(p).unwrap()
    }

    #[test]
    fn exterior_ext_is_polynomial() {
        let lam = AugmentedAlgebra::from_hopf(&exterior(BaseRing::Rationals, 1, 1).unwrap()).unwrap();
        let t = ext_self(&lam, 5).unwrap();
        assert_eq!(t.dims(), vec![1; 6]);
        for r in &t.rows {
            assert_eq!((r.internal_degree, r.weight, r.cohomological_degree), (r.s as i64, -(r.s as i64), 2 * r.s as i64));
        }
        for a in 1..5 {
            for b in 1..=5 - a {
                assert_eq!(t.product((a, 0), (b, 0)).unwrap(), ["1"]);
            }
        }
    }

    #[test]
    fn dual_numbers_mod_two() {
        let a = AugmentedAlgebra::truncated_polynomial(fp(2), 2).unwrap();
        let t = ext_self(&a, 4).unwrap();
        assert_eq!(t.dims(), vec![1; 5]);
        // v^2 != 0
        assert_eq!(t.product((1, 0), (1, 0)).unwrap(), ["1"]);
    }

    #[test]
    fn longer_truncations_are_two_periodic() {
        for (p, n) in [(2, 4), (3, 3), (3, 9), (5, 5)] {
            let a = AugmentedAlgebra::truncated_polynomial(fp(p), n).unwrap();
            let t = ext_self(&a, 4).unwrap();
            assert_eq!(t.dims(), vec![1; 5]);
            // v^2 = 0, v u = u v generates degree 3, u^2 generates degree 4
            assert_eq!(t.product((1, 0), (1, 0)).unwrap(), ["0"]);
            assert_eq!(t.product((1, 0), (2, 0)).unwrap(), ["1"]);
            assert_eq!(t.product((2, 0), (1, 0)).unwrap(), ["1"]);
            assert_eq!(t.product((2, 0), (2, 0)).unwrap(), ["1"]);
            let weights: Vec<i64> = t.rows.iter().map(|r| r.weight).collect();
            let n = n as i64;
            assert_eq!(weights, vec![0, -1, -n, -n - 1, -2 * n]);
        }
    }

    #[test]
    fn bar_oracle_agrees() {
        let lam = AugmentedAlgebra::from_hopf(&exterior(fp(3), 1, 1).unwrap()).unwrap();
        assert_eq!(ext_dims_by_bar(&lam, 4).unwrap(), ext_self(&lam, 4).unwrap().rows);
        for (p, n) in [(2, 2), (2, 4), (3, 3), (3, 4)] {
            let a = AugmentedAlgebra::truncated_polynomial(fp(p), n).unwrap();
            assert_eq!(ext_dims_by_bar(&a, 3).unwrap(), ext_self(&a, 3).unwrap().rows, "p={p} N={n}");
        }
    }

    #[test]
    fn tower_colimit() {
        for p in [2, 3] {
            let r = ext_colimit_tower(p, 2).unwrap();
            assert_eq!(r.colimit, vec![1, 1, 0, 0]);
            assert!(crate::report::all_pass(&r.checks));
        }
        let r = ext_colimit_tower(2, 3).unwrap();
        assert_eq!(r.transitions.len(), 2);
        assert_eq!(r.transitions[0].ranks, vec![1, 1, 0, 0]);
    }

    #[test]
    fn non_local_algebras_are_refused() {
        // k[Z/3] over Q is semisimple: its augmentation ideal is idempotent
        let g = super::super::hopf::group_algebra(BaseRing::Rationals, 3).unwrap();
        assert!(AugmentedAlgebra::from_hopf(&g).is_err());
    }
}
