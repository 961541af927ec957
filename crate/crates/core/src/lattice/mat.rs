//! Square matrices over truncated p-adic numbers.

use crate::arith::padic::{max_precision, PAdicNum};
use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Index, IndexMut};

/// An `N × N` matrix over `Q_p`.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat<const N: usize> {
    p: u32,
    e: [[PAdicNum; N]; N],
}

/// 4 × 4 matrices.
pub type Mat4 = Mat<4>;
/// 2 × 2 matrices.
pub type Mat2 = Mat<2>;

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = PAdicNum;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &PAdicNum {
        &self.e[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PAdicNum {
        &mut self.e[i][j]
    }
}

fn det_rec<const N: usize>(m: &Mat<N>, rows: &[usize], cols: &[usize]) -> PAdicNum {
    let p = m.p;
    match rows.len() {
        0 => PAdicNum::one(p, max_precision(p)),
        1 => m.e[rows[0]][cols[0]],
        2 => {
            m.e[rows[0]][cols[0]] * m.e[rows[1]][cols[1]]
                - m.e[rows[0]][cols[1]] * m.e[rows[1]][cols[0]]
        }
        _ => {
            let mut acc = PAdicNum::zero(p);
            let sub_rows = &rows[1..];
            for (k, &c) in cols.iter().enumerate() {
                let a = m.e[rows[0]][c];
                if a.is_exact_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> =
                    cols.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &x)| x).collect();
                let term = a * det_rec(m, sub_rows, &sub_cols);
                acc = if k % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

impl<const N: usize> Mat<N> {
    /// The zero matrix (exact zeros).
    pub fn zero(p: u32) -> Self {
        Mat { p, e: [[PAdicNum::zero(p); N]; N] }
    }

    /// The identity at relative precision `prec`.
    pub fn identity(p: u32, prec: u32) -> Self {
        let mut m = Self::zero(p);
        for i in 0..N {
            m.e[i][i] = PAdicNum::one(p, prec);
        }
        m
    }

    /// Builds a matrix from a grid of entries.
    pub fn from_rows(p: u32, e: [[PAdicNum; N]; N]) -> Self {
        Mat { p, e }
    }

    /// Builds a matrix of integers at relative precision `prec`.
    pub fn from_ints(p: u32, g: [[i64; N]; N], prec: u32) -> Self {
        let mut m = Self::zero(p);
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = PAdicNum::from_int(p, g[i][j], prec);
            }
        }
        m
    }

    /// The elementary matrix with `x` at `(i, j)`.
    pub fn unit_at(p: u32, i: usize, j: usize, x: PAdicNum) -> Self {
        let mut m = Self::zero(p);
        m.e[i][j] = x;
        m
    }

    /// The prime.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The entries as a grid.
    pub fn rows(&self) -> &[[PAdicNum; N]; N] {
        &self.e
    }

    /// Matrix product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.p);
        for i in 0..N {
            for k in 0..N {
                let a = self.e[i][k];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..N {
                    let b = o.e[k][j];
                    if b.is_exact_zero() {
                        continue;
                    }
                    r.e[i][j] = r.e[i][j] + a * b;
                }
            }
        }
        r
    }

    /// Entrywise sum.
    pub fn add(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N {
                r.e[i][j] = self.e[i][j] + o.e[i][j];
            }
        }
        r
    }

    /// Entrywise difference.
    pub fn sub(&self, o: &Self) -> Self {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N {
                r.e[i][j] = self.e[i][j] - o.e[i][j];
            }
        }
        r
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, s: &PAdicNum) -> Self {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N {
                r.e[i][j] = self.e[i][j] * *s;
            }
        }
        r
    }

    /// Multiplies every entry by `p^k`.
    pub fn shift(&self, k: i32) -> Self {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N {
                r.e[i][j] = self.e[i][j].shift(k);
            }
        }
        r
    }

    /// The trace.
    pub fn trace(&self) -> PAdicNum {
        let mut t = PAdicNum::zero(self.p);
        for i in 0..N {
            t = t + self.e[i][i];
        }
        t
    }

    /// The determinant, by cofactor expansion.
    pub fn det(&self) -> PAdicNum {
        let idx: Vec<usize> = (0..N).collect();
        det_rec(self, &idx, &idx)
    }

    /// The adjugate (transposed cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let mut r = Self::zero(self.p);
        if N == 1 {
            r.e[0][0] = PAdicNum::one(self.p, max_precision(self.p));
            return r;
        }
        for i in 0..N {
            for j in 0..N {
                let rows: Vec<usize> = (0..N).filter(|&t| t != j).collect();
                let cols: Vec<usize> = (0..N).filter(|&t| t != i).collect();
                let c = det_rec(self, &rows, &cols);
                r.e[i][j] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        r
    }

    /// The inverse via the adjugate; fails when the determinant is zero.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.adjugate().scale(&d.inv()?))
    }

    /// The transpose.
    pub fn transpose(&self) -> Self {
        let mut r = *self;
        for i in 0..N {
            for j in 0..N {
                r.e[i][j] = self.e[j][i];
            }
        }
        r
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { *self };
        let mut e = k.unsigned_abs();
        let prec = max_precision(self.p);
        let mut acc = Self::identity(self.p, prec);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// True when every entry of `self - o` is zero at tracked precision.
    pub fn eq_at_prec(&self, o: &Self) -> bool {
        (0..N).all(|i| (0..N).all(|j| self.e[i][j].eq_at_prec(&o.e[i][j])))
    }

    /// True when `self - o` has every entry of valuation at least `k`.
    pub fn congruent(&self, o: &Self, k: i32) -> Result<bool> {
        for i in 0..N {
            for j in 0..N {
                if !(self.e[i][j] - o.e[i][j]).val_at_least(k)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl<const N: usize> fmt::Debug for Mat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.e {
            let s: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", s.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Determinant by the permutation expansion, as an independent oracle.
    fn perm_det(g: [[i64; 4]; 4]) -> i64 {
        let mut total = 0;
        let idx = [0usize, 1, 2, 3];
        for a in idx {
            for b in idx {
                for c in idx {
                    for d in idx {
                        let perm = [a, b, c, d];
                        let mut seen = [false; 4];
                        if perm.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                            continue;
                        }
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| perm[i] > perm[j])
                            .count();
                        let sign = if inversions % 2 == 0 { 1 } else { -1 };
                        total += sign * (0..4).map(|i| g[i][perm[i]]).product::<i64>();
                    }
                }
            }
        }
        total
    }

    #[test]
    fn det_and_inverse() {
        let g = [[2, 1, 0, 0], [0, 1, 5, 0], [1, 0, 1, 3], [0, 0, 1, 1]];
        let m = Mat4::from_ints(3, g, 20);
        assert_eq!(m.det(), PAdicNum::from_int(3, perm_det(g), 20));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).eq_at_prec(&Mat4::identity(3, 20)));
        assert!(inv.mul(&m).eq_at_prec(&Mat4::identity(3, 20)));
    }

    #[test]
    fn mat2_inverse() {
        let m = Mat2::from_ints(2, [[3, 2], [1, 1]], 10);
        assert!(m.inverse().unwrap().mul(&m).eq_at_prec(&Mat2::identity(2, 10)));
    }
}
