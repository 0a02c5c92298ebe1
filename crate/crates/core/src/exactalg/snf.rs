//! Integer Smith normal form by repeated minimal-pivot reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type IntMat = Vec<Vec<BigInt>>;

pub(crate) fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Result of the reduction: `u * a * v = d` with `d` diagonal and
/// `d[0] | d[1] | ...`. The inverses are tracked alongside.
pub(crate) struct IntSnf {
    pub diag: Vec<BigInt>,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
}

struct Transforms {
    u: IntMat,
    u_inv: IntMat,
    v: IntMat,
    v_inv: IntMat,
}

impl Transforms {
    fn new(rows: usize, cols: usize) -> Self {
        Transforms {
            u: identity(rows),
            u_inv: identity(rows),
            v: identity(cols),
            v_inv: identity(cols),
        }
    }

    // row_i += q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = (self.u[t].clone(), &mut self.u[i]);
        for (d, s) in dst.iter_mut().zip(src) {
            *d += q * s;
        }
        for row in self.u_inv.iter_mut() {
            let x = q * &row[i];
            row[t] -= x;
        }
    }

    fn row_swap(&mut self, i: usize, t: usize) {
        self.u.swap(i, t);
        for row in self.u_inv.iter_mut() {
            row.swap(i, t);
        }
    }

    fn row_negate(&mut self, t: usize) {
        for x in self.u[t].iter_mut() {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[t] = -&row[t];
        }
    }

    // col_j += q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in self.v.iter_mut() {
            let x = q * &row[t];
            row[j] += x;
        }
        let (src, dst) = (self.v_inv[j].clone(), &mut self.v_inv[t]);
        for (d, s) in dst.iter_mut().zip(src) {
            *d -= q * s;
        }
    }

    fn col_swap(&mut self, j: usize, t: usize) {
        for row in self.v.iter_mut() {
            row.swap(j, t);
        }
        self.v_inv.swap(j, t);
    }
}

/// Smith normal form. When `track` is false the transforms are not
/// accumulated and the returned matrices are empty.
pub(crate) fn smith(mut a: IntMat, rows: usize, cols: usize, track: bool) -> IntSnf {
    let mut tr = if track { Some(Transforms::new(rows, cols)) } else { None };
    let mut t = 0;
    while t < rows.min(cols) {
        // minimal nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != t {
            a.swap(pi, t);
            if let Some(tr) = tr.as_mut() {
                tr.row_swap(pi, t);
            }
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            if let Some(tr) = tr.as_mut() {
                tr.col_swap(pj, t);
            }
        }
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let neg_q = -&q;
                let pivot_row = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row.iter()).skip(t) {
                    *x -= &q * y;
                }
                if let Some(tr) = tr.as_mut() {
                    tr.row_axpy(i, t, &neg_q);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                let neg_q = -&q;
                for row in a.iter_mut().skip(t) {
                    let x = &q * &row[t];
                    row[j] -= x;
                }
                if let Some(tr) = tr.as_mut() {
                    tr.col_axpy(j, t, &neg_q);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/col t into the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(best.0, t);
                    if let Some(tr) = tr.as_mut() {
                        tr.row_swap(best.0, t);
                    }
                } else if best.1 != t {
                    for row in a.iter_mut() {
                        row.swap(best.1, t);
                    }
                    if let Some(tr) = tr.as_mut() {
                        tr.col_swap(best.1, t);
                    }
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(src) {
                        *x += y;
                    }
                    if let Some(tr) = tr.as_mut() {
                        tr.row_axpy(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(tr) = tr.as_mut() {
                tr.row_negate(t);
            }
        }
        t += 1;
    }
    let diag = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    match tr {
        Some(tr) => IntSnf {
            diag,
            u: tr.u,
            u_inv: tr.u_inv,
            v: tr.v,
            v_inv: tr.v_inv,
        },
        None => IntSnf {
            diag,
            u: Vec::new(),
            u_inv: Vec::new(),
            v: Vec::new(),
            v_inv: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &IntMat, b: &IntMat) -> IntMat {
        let n = a.len();
        let k = b.len();
        let c = if k == 0 { 0 } else { b[0].len() };
        (0..n)
            .map(|i| {
                (0..c)
                    .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn transforms_are_consistent() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(a.clone(), 3, 3, true);
        assert_eq!(s.diag, vec![2.into(), 6.into(), 12.into()]);
        let d = mul(&mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(d[i][j], want);
            }
        }
        assert_eq!(mul(&s.u, &s.u_inv), identity(3));
        assert_eq!(mul(&s.v, &s.v_inv), identity(3));
    }
}
