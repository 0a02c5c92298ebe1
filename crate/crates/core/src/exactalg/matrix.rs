use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{self, PrimeFieldArith, RatField};
use super::ring::{int, mod_inverse, BaseRing, Scalar};
use super::snf::{smith, IntMat};
use crate::error::{Error, Result};

/// Dense matrix with exact entries in a [`BaseRing`]. Entries are kept in
/// normalized form, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix<{}> {}x{}", self.ring, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `u * m * v = d` with `d` diagonal, `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: ExactMatrix,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub v_inv: ExactMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Scalar> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

impl ExactMatrix {
    pub fn new(ring: BaseRing, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data
            .into_iter()
            .map(|x| ring.normalize(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { ring, rows, cols, data })
    }

    pub(crate) fn from_raw(ring: BaseRing, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ExactMatrix { ring, rows, cols, data }
    }

    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ring,
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_i64(ring: BaseRing, rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|x| x.iter().map(|&v| int(v))).collect();
        Self::new(ring, r, c, data)
    }

    pub fn from_fn(
        ring: BaseRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(ring, rows, cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(ring: BaseRing, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("column length".into()));
        }
        Self::from_fn(ring, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_ring(&self, other: &ExactMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix::from_raw(self.ring, self.cols, self.rows, data)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![Scalar::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        let data = data.into_iter().map(|x| self.ring.reduce(x)).collect();
        Ok(ExactMatrix::from_raw(self.ring, self.rows, other.cols, data))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                self.ring.reduce(acc)
            })
            .collect()
    }

    fn zip_with(&self, other: &ExactMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.ring.reduce(f(a, b)))
            .collect();
        Ok(ExactMatrix::from_raw(self.ring, self.rows, self.cols, data))
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        let data = self.data.iter().map(|x| self.ring.reduce(x * c)).collect();
        ExactMatrix::from_raw(self.ring, self.rows, self.cols, data)
    }

    /// Kronecker product; index (i1, i2) maps to i1 * rows2 + i2.
    pub fn kron(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_ring(other)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![Scalar::zero(); rows * cols];
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if !b.is_zero() {
                            data[(i1 * other.rows + i2) * cols + j1 * other.cols + j2] =
                                self.ring.reduce(a * b);
                        }
                    }
                }
            }
        }
        Ok(ExactMatrix::from_raw(self.ring, rows, cols, data))
    }

    pub fn hstack(ring: BaseRing, rows: usize, blocks: &[&ExactMatrix]) -> Result<ExactMatrix> {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ExactMatrix::zeros(ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            if b.rows != rows || b.ring != ring {
                return Err(Error::Dimension("hstack block shape".into()));
            }
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + off + j] = b.get(i, j).clone();
                }
            }
            off += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(ring: BaseRing, cols: usize, blocks: &[&ExactMatrix]) -> Result<ExactMatrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols || b.ring != ring {
                return Err(Error::Dimension("vstack block shape".into()));
            }
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(ExactMatrix::from_raw(ring, rows, cols, data))
    }

    /// Writes `block` into `self` at the given offset.
    pub(crate) fn set_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub(crate) fn add_to(&mut self, i: usize, j: usize, x: &Scalar) {
        let idx = i * self.cols + j;
        let v = &self.data[idx] + x;
        self.data[idx] = self.ring.reduce(v);
    }

    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        let data = idx.iter().flat_map(|&i| self.row(i)).collect();
        ExactMatrix::from_raw(self.ring, idx.len(), self.cols, data)
    }

    pub fn select_cols(&self, idx: &[usize]) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix::from_raw(self.ring, self.rows, idx.len(), data)
    }

    /// Reinterprets the entries in another ring (e.g. reduction Z -> F_p).
    pub fn change_ring(&self, ring: BaseRing) -> Result<ExactMatrix> {
        ExactMatrix::new(ring, self.rows, self.cols, self.data.clone())
    }

    fn int_rows(&self) -> (IntMat, BigInt) {
        // common denominator; only PLocal entries can carry one
        let mut l = BigInt::one();
        for x in &self.data {
            l = l.lcm(x.denom());
        }
        let m = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        x.numer() * (&l / x.denom())
                    })
                    .collect()
            })
            .collect();
        (m, l)
    }

    fn from_int_rows(ring: BaseRing, m: &IntMat, rows: usize, cols: usize) -> ExactMatrix {
        let data = m
            .iter()
            .flat_map(|r| r.iter().map(|x| ring.reduce(Scalar::from_integer(x.clone()))))
            .collect();
        ExactMatrix::from_raw(ring, rows, cols, data)
    }

    /// Smith normal form over Z, Z_(p) (computed integrally) or Z/p^k
    /// (integer form reduced mod p^k).
    pub fn smith_normal_form(&self) -> Result<SmithForm> {
        if self.ring == BaseRing::Rationals {
            return Err(Error::Unsupported("Smith normal form over Q".into()));
        }
        let (m, l) = self.int_rows();
        let s = smith(m, self.rows, self.cols, true);
        let ring = self.ring;
        let mut d = ExactMatrix::zeros(ring, self.rows, self.cols);
        for (i, x) in s.diag.iter().enumerate() {
            d.data[i * self.cols + i] = ring.reduce(Scalar::new(x.clone(), l.clone()));
        }
        Ok(SmithForm {
            d,
            u: Self::from_int_rows(ring, &s.u, self.rows, self.rows),
            v: Self::from_int_rows(ring, &s.v, self.cols, self.cols),
            u_inv: Self::from_int_rows(ring, &s.u_inv, self.rows, self.rows),
            v_inv: Self::from_int_rows(ring, &s.v_inv, self.cols, self.cols),
        })
    }

    /// Nonzero invariant factors over Z (absolute values), without
    /// accumulating transforms. For Z_(p) the common denominator is cleared
    /// first (it is a unit).
    pub fn elementary_divisors(&self) -> Result<Vec<BigInt>> {
        if !self.ring.is_integral() {
            return Err(Error::Unsupported(format!(
                "integer invariant factors over {}",
                self.ring
            )));
        }
        let (m, _) = self.int_rows();
        let s = smith(m, self.rows, self.cols, false);
        Ok(s.diag.into_iter().filter(|x| !x.is_zero()).map(|x| x.abs()).collect())
    }

    /// Rank over a field; over Z or Z_(p) the rank of the matrix over the
    /// fraction field; over Z/p^k the number of nonzero invariant factors.
    pub fn rank(&self) -> Result<usize> {
        match self.ring {
            BaseRing::Rationals | BaseRing::Integers | BaseRing::PLocalIntegers { .. } => Ok(
                field::rank(&RatField, field::lift_rows(&RatField, &self.data, self.rows, self.cols), self.cols),
            ),
            BaseRing::PrimeField { p } => {
                let f = PrimeFieldArith(p);
                Ok(field::rank(&f, field::lift_rows(&f, &self.data, self.rows, self.cols), self.cols))
            }
            BaseRing::CyclicRing { .. } => {
                let s = self.smith_normal_form()?;
                Ok(s.invariant_factors().len())
            }
        }
    }

    /// Basis of the right kernel. Requires a field.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        match self.ring {
            BaseRing::Rationals => Ok(field::kernel(&RatField, &self.data, self.rows, self.cols)),
            BaseRing::PrimeField { p } => {
                Ok(field::kernel(&PrimeFieldArith(p), &self.data, self.rows, self.cols))
            }
            other => Err(Error::FieldRequired(other.to_string())),
        }
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Result<ExactMatrix> {
        let basis = self.kernel_basis()?;
        ExactMatrix::from_columns(self.ring, self.cols, &basis)
    }

    /// Some X with `self * X = b`, or None when no solution exists in the
    /// ring.
    pub fn solve(&self, b: &ExactMatrix) -> Result<Option<ExactMatrix>> {
        self.check_ring(b)?;
        if b.rows != self.rows {
            return Err(Error::Dimension("solve: row mismatch".into()));
        }
        match self.ring {
            BaseRing::Rationals => Ok(field::solve(&RatField, &self.data, self.rows, self.cols, &b.data, b.cols)
                .map(|x| ExactMatrix::from_raw(self.ring, self.cols, b.cols, x))),
            BaseRing::PrimeField { p } => Ok(field::solve(
                &PrimeFieldArith(p),
                &self.data,
                self.rows,
                self.cols,
                &b.data,
                b.cols,
            )
            .map(|x| ExactMatrix::from_raw(self.ring, self.cols, b.cols, x))),
            _ => self.solve_smith(b),
        }
    }

    fn solve_smith(&self, b: &ExactMatrix) -> Result<Option<ExactMatrix>> {
        let s = self.smith_normal_form()?;
        let ub = s.u.mul(b)?;
        let r = self.rows.min(self.cols);
        let mut y = ExactMatrix::zeros(self.ring, self.cols, b.cols);
        for i in 0..self.rows {
            let di = if i < r { s.d.get(i, i).clone() } else { Scalar::zero() };
            for j in 0..b.cols {
                let c = ub.get(i, j);
                match self.divide(c, &di) {
                    Some(q) => {
                        if i < self.cols {
                            y.data[i * b.cols + j] = q;
                        }
                    }
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(s.v.mul(&y)?))
    }

    /// Some q with d * q = c in the ring.
    fn divide(&self, c: &Scalar, d: &Scalar) -> Option<Scalar> {
        if c.is_zero() {
            return Some(Scalar::zero());
        }
        if d.is_zero() {
            return None;
        }
        match self.ring {
            BaseRing::Integers => {
                let q = c / d;
                q.is_integer().then_some(q)
            }
            BaseRing::PLocalIntegers { .. } => self.ring.normalize(c / d).ok(),
            BaseRing::CyclicRing { p, k } => {
                let n = BigInt::from(p.pow(k));
                let pb = BigInt::from(p);
                let mut dv = d.numer().clone();
                let mut cv = c.numer().clone();
                // strip common powers of p
                while (&dv % &pb).is_zero() {
                    if !(&cv % &pb).is_zero() {
                        return None;
                    }
                    dv /= &pb;
                    cv /= &pb;
                }
                let inv = mod_inverse(&dv.mod_floor(&n), &n)?;
                Some(Scalar::from_integer((cv * inv).mod_floor(&n)))
            }
            _ => self.ring.inv(d).map(|di| self.ring.mul(c, &di)),
        }
    }

    /// Independent columns spanning the column space (field only).
    pub fn column_space_basis(&self) -> Result<ExactMatrix> {
        let pivots = self.pivot_columns()?;
        Ok(self.select_cols(&pivots))
    }

    /// Pivot columns of the row echelon form (field only).
    pub fn pivot_columns(&self) -> Result<Vec<usize>> {
        match self.ring {
            BaseRing::Rationals => {
                let mut m = field::lift_rows(&RatField, &self.data, self.rows, self.cols);
                Ok(field::rref(&RatField, &mut m, self.cols))
            }
            BaseRing::PrimeField { p } => {
                let f = PrimeFieldArith(p);
                let mut m = field::lift_rows(&f, &self.data, self.rows, self.cols);
                Ok(field::rref(&f, &mut m, self.cols))
            }
            other => Err(Error::FieldRequired(other.to_string())),
        }
    }

    pub fn inverse(&self) -> Result<Option<ExactMatrix>> {
        if !self.is_square() {
            return Ok(None);
        }
        let inv = self.solve(&ExactMatrix::identity(self.ring, self.rows))?;
        // a one-sided solution of a square system is two-sided; over Z/p^k
        // and Z the solve only succeeds for unimodular matrices
        Ok(inv)
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.inverse()?.is_some())
    }

    /// Entry-wise conversion to i64 (for display and tests).
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            x.numer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::Integers;
    const Q: BaseRing = BaseRing::Rationals;

    #[test]
    fn snf_hand_example() {
        let m = ExactMatrix::from_i64(Z, &[&[2, 4], &[6, 8]]).unwrap();
        let s = m.smith_normal_form().unwrap();
        assert_eq!(s.d, ExactMatrix::from_i64(Z, &[&[2, 0], &[0, 4]]).unwrap());
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn snf_trivial_cases() {
        let id = ExactMatrix::identity(Z, 3);
        assert_eq!(id.smith_normal_form().unwrap().d, id);
        let zero = ExactMatrix::zeros(Z, 1, 1);
        assert_eq!(zero.smith_normal_form().unwrap().d, zero);
    }

    #[test]
    fn kernel_examples() {
        let f2 = BaseRing::prime_field(2).unwrap();
        let m = ExactMatrix::from_i64(f2, &[&[1, 1]]).unwrap();
        assert_eq!(m.kernel_basis().unwrap(), vec![vec![int(1), int(1)]]);
        assert!(ExactMatrix::identity(Q, 3).kernel_basis().unwrap().is_empty());
        let m = ExactMatrix::from_i64(Q, &[&[1, 2], &[2, 4]]).unwrap();
        let k = m.kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        assert_eq!(&k[0][0] * int(-1), &k[0][1] * int(2));
        assert!(ExactMatrix::identity(Z, 2).kernel_basis().is_err());
    }

    #[test]
    fn solve_over_integers_respects_integrality() {
        let a = ExactMatrix::from_i64(Z, &[&[2]]).unwrap();
        let b = ExactMatrix::from_i64(Z, &[&[3]]).unwrap();
        assert!(a.solve(&b).unwrap().is_none());
        let b = ExactMatrix::from_i64(Z, &[&[6]]).unwrap();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
    }

    #[test]
    fn solve_over_cyclic_ring() {
        let z8 = BaseRing::cyclic(2, 3).unwrap();
        let a = ExactMatrix::from_i64(z8, &[&[2, 0], &[0, 3]]).unwrap();
        let b = ExactMatrix::from_i64(z8, &[&[6], &[1]]).unwrap();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let b = ExactMatrix::from_i64(z8, &[&[1], &[1]]).unwrap();
        assert!(a.solve(&b).unwrap().is_none());
    }
}
