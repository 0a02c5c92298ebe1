//! Row reduction over Q and F_p. F_p work is done on machine words.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::ring::Scalar;

pub(crate) trait FieldArith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn lift(&self, a: &Scalar) -> Self::E;
    fn lower(&self, a: &Self::E) -> Scalar;
}

pub(crate) struct RatField;

impl FieldArith for RatField {
    type E = Scalar;
    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn inv(&self, a: &Scalar) -> Scalar {
        a.recip()
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn lift(&self, a: &Scalar) -> Scalar {
        a.clone()
    }
    fn lower(&self, a: &Scalar) -> Scalar {
        a.clone()
    }
}

pub(crate) struct PrimeFieldArith(pub u64);

impl FieldArith for PrimeFieldArith {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        let mut base = *a;
        let mut e = self.0 - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn lift(&self, a: &Scalar) -> u64 {
        let n = BigInt::from(self.0);
        let num = a.numer().mod_floor(&n).to_u64().unwrap();
        if a.is_integer() {
            num
        } else {
            let den = a.denom().mod_floor(&n).to_u64().unwrap();
            self.mul(&num, &self.inv(&den))
        }
    }
    fn lower(&self, a: &u64) -> Scalar {
        Scalar::from_integer(BigInt::from(*a))
    }
}

/// In-place reduced row echelon form. Returns pivot columns.
pub(crate) fn rref<F: FieldArith>(f: &F, rows: &mut [Vec<F::E>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]);
        for x in rows[r].iter_mut().skip(c) {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank without back-substitution (forward elimination only).
pub(crate) fn rank<F: FieldArith>(f: &F, mut rows: Vec<Vec<F::E>>, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if f.is_zero(&row[c]) {
                continue;
            }
            let factor = f.mul(&row[c], &inv);
            for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn lift_rows<F: FieldArith>(f: &F, data: &[Scalar], rows: usize, cols: usize) -> Vec<Vec<F::E>> {
    (0..rows)
        .map(|i| (0..cols).map(|j| f.lift(&data[i * cols + j])).collect())
        .collect()
}

/// Right kernel basis from the rref of the matrix.
pub(crate) fn kernel<F: FieldArith>(f: &F, data: &[Scalar], rows: usize, cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = lift_rows(f, data, rows, cols);
    let pivots = rref(f, &mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.lift(&Scalar::from_integer(1.into()));
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&m[r][free]);
        }
        basis.push(v.iter().map(|x| f.lower(x)).collect());
    }
    basis
}

/// Some solution X of A X = B, or None.
pub(crate) fn solve<F: FieldArith>(
    f: &F,
    a: &[Scalar],
    rows: usize,
    cols: usize,
    b: &[Scalar],
    bcols: usize,
) -> Option<Vec<Scalar>> {
    let mut aug: Vec<Vec<F::E>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| f.lift(&a[i * cols + j]))
                .chain((0..bcols).map(|j| f.lift(&b[i * bcols + j])))
                .collect()
        })
        .collect();
    let pivots = rref(f, &mut aug, cols + bcols);
    if pivots.iter().any(|&c| c >= cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols * bcols];
    for (r, &pc) in pivots.iter().enumerate() {
        for j in 0..bcols {
            x[pc * bcols + j] = f.lower(&aug[r][cols + j]);
        }
    }
    Some(x)
}
