//! Affine congruence systems over `Q_p`: find all `w ∈ Q_p^n` with
//! `v(Σ_j a_ij w_j + c_i) ≥ m_i` for every row `i`.
//!
//! The solver scales each row to an integrality condition and performs a
//! Smith-style elimination (full pivoting on the entry of least valuation,
//! unimodular row and column operations). In the diagonal coordinates
//! `y = V w` the conditions decouple into `d_k y_k + b_k ∈ Z_p`, so the solution
//! set is a particular point plus a lattice spanned by the columns of `V^{-1}`
//! at explicit levels.

use crate::arith::padic::{max_precision, PAdicNum};
use crate::error::{Error, Result};

/// Inexact zeros left after elimination must be known to vanish at least to
/// this absolute level; otherwise the decision is reported as imprecise.
pub const DEFAULT_ZERO_FLOOR: i32 = 12;

/// One affine condition `v(coeffs · w + constant) ≥ min_val`.
#[derive(Clone, Debug)]
pub struct Constraint {
    /// Coefficients of the unknowns.
    pub coeffs: Vec<PAdicNum>,
    /// Constant term.
    pub constant: PAdicNum,
    /// Required minimum valuation.
    pub min_val: i32,
}

/// A system of affine valuation conditions in `n` unknowns.
#[derive(Clone, Debug)]
pub struct CongruenceSystem {
    /// The prime.
    pub p: u32,
    /// Number of unknowns.
    pub n: usize,
    /// The conditions.
    pub rows: Vec<Constraint>,
    /// Absolute level below which a residual inexact zero is an error.
    pub zero_floor: i32,
}

/// The affine family of solutions: `w = w0 + Σ_k t_k G_k` with
/// `t_k ∈ p^{level_k} Z_p`, or `t_k ∈ Q_p` when the level is `None`.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    p: u32,
    particular: Vec<PAdicNum>,
    generators: Vec<Vec<PAdicNum>>,
    levels: Vec<Option<i32>>,
    coords: Vec<Vec<PAdicNum>>,
}

impl CongruenceSystem {
    /// An empty system in `n` unknowns.
    pub fn new(p: u32, n: usize) -> Self {
        CongruenceSystem { p, n, rows: Vec::new(), zero_floor: DEFAULT_ZERO_FLOOR }
    }

    /// Appends a condition.
    pub fn push(&mut self, coeffs: Vec<PAdicNum>, constant: PAdicNum, min_val: i32) {
        debug_assert_eq!(coeffs.len(), self.n);
        self.rows.push(Constraint { coeffs, constant, min_val });
    }

    /// True when `w` satisfies every condition.
    pub fn satisfied_by(&self, w: &[PAdicNum]) -> Result<bool> {
        for row in &self.rows {
            let mut acc = row.constant;
            for (a, x) in row.coeffs.iter().zip(w) {
                acc = acc + *a * *x;
            }
            if !acc.val_at_least(row.min_val)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn lowest(a: &[Vec<PAdicNum>], k: usize) -> Option<(usize, usize, i32)> {
    let mut best: Option<(usize, usize, i32)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
            if let Some(v) = x.valuation() {
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
    }
    best
}

fn residual_check(x: &PAdicNum, floor: i32) -> Result<()> {
    if x.is_zero() && !x.is_exact_zero() && x.val_bound() < floor {
        return Err(Error::PrecisionExhausted(format!(
            "eliminated coefficient known only modulo p^{}",
            x.val_bound()
        )));
    }
    Ok(())
}

/// Solves the system; `Ok(None)` means infeasible.
pub fn solve_congruences(sys: &CongruenceSystem) -> Result<Option<SolutionSet>> {
    let p = sys.p;
    let n = sys.n;
    let prec = max_precision(p);
    let mut a: Vec<Vec<PAdicNum>> = sys
        .rows
        .iter()
        .map(|r| r.coeffs.iter().map(|x| x.shift(-r.min_val)).collect())
        .collect();
    let mut b: Vec<PAdicNum> = sys.rows.iter().map(|r| r.constant.shift(-r.min_val)).collect();
    let m = a.len();
    let one = PAdicNum::one(p, prec);
    let zero = PAdicNum::zero(p);
    // w = C y and y = V w.
    let mut c: Vec<Vec<PAdicNum>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect()).collect();
    let mut v = c.clone();
    let mut rank = 0;
    while rank < m.min(n) {
        let Some((pi, pj, _)) = lowest(&a, rank) else { break };
        let k = rank;
        a.swap(k, pi);
        b.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in c.iter_mut() {
                row.swap(k, pj);
            }
            v.swap(k, pj);
        }
        let d = a[k][k];
        let dinv = d.inv()?;
        for i in k + 1..m {
            if a[i][k].is_exact_zero() {
                continue;
            }
            let f = a[i][k] * dinv;
            a[i][k] = zero;
            for j in k + 1..n {
                let t = f * a[k][j];
                a[i][j] = a[i][j] - t;
            }
            b[i] = b[i] - f * b[k];
        }
        for j in k + 1..n {
            if a[k][j].is_exact_zero() {
                continue;
            }
            let g = a[k][j] * dinv;
            a[k][j] = zero;
            for row in c.iter_mut() {
                row[j] = row[j] - g * row[k];
            }
            let (head, tail) = v.split_at_mut(j);
            for (vk, vj) in head[k].iter_mut().zip(tail[0].iter()) {
                *vk = *vk + g * *vj;
            }
        }
        rank += 1;
    }
    for row in a.iter().skip(rank) {
        for x in row.iter().skip(rank) {
            residual_check(x, sys.zero_floor)?;
        }
    }
    for bi in b.iter().skip(rank) {
        if !bi.val_at_least(0)? {
            return Ok(None);
        }
    }
    let mut y0 = vec![zero; n];
    let mut levels = vec![None; n];
    for k in 0..rank {
        let d = a[k][k];
        y0[k] = -(b[k] * d.inv()?);
        levels[k] = Some(-d.valuation().expect("pivot is nonzero"));
    }
    let particular: Vec<PAdicNum> = (0..n)
        .map(|i| (0..n).fold(zero, |acc, k| if y0[k].is_exact_zero() { acc } else { acc + c[i][k] * y0[k] }))
        .collect();
    let generators: Vec<Vec<PAdicNum>> = (0..n).map(|k| (0..n).map(|i| c[i][k]).collect()).collect();
    Ok(Some(SolutionSet { p, particular, generators, levels, coords: v }))
}

impl SolutionSet {
    /// The particular solution `w0`.
    pub fn particular(&self) -> &[PAdicNum] {
        &self.particular
    }

    /// Homogeneous generators `G_k`.
    pub fn generators(&self) -> &[Vec<PAdicNum>] {
        &self.generators
    }

    /// Level of each generator (`None` for an unconstrained direction).
    pub fn levels(&self) -> &[Option<i32>] {
        &self.levels
    }

    /// True when every direction is constrained (the set is bounded).
    pub fn is_bounded(&self) -> bool {
        self.levels.iter().all(|l| l.is_some())
    }

    /// The point `w0 + Σ_k p^{level_k} s_k G_k` (with `s_k` taken as is for
    /// unconstrained directions).
    pub fn point(&self, s: &[PAdicNum]) -> Vec<PAdicNum> {
        let mut w = self.particular.clone();
        for (k, g) in self.generators.iter().enumerate() {
            if s[k].is_exact_zero() {
                continue;
            }
            let t = match self.levels[k] {
                Some(l) => s[k].shift(l),
                None => s[k],
            };
            for (wi, gi) in w.iter_mut().zip(g) {
                *wi = *wi + t * *gi;
            }
        }
        w
    }

    /// Decides whether `w` belongs to the solution set.
    pub fn contains(&self, w: &[PAdicNum]) -> Result<bool> {
        let diff: Vec<PAdicNum> = w.iter().zip(&self.particular).map(|(a, b)| *a - *b).collect();
        for (k, row) in self.coords.iter().enumerate() {
            let Some(l) = self.levels[k] else { continue };
            let yk = row.iter().zip(&diff).fold(PAdicNum::zero(self.p), |acc, (x, y)| acc + *x * *y);
            if !yk.val_at_least(l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> PAdicNum {
        PAdicNum::from_int(2, n, 20)
    }

    #[test]
    fn empty_system_is_everything() {
        let sys = CongruenceSystem::new(2, 2);
        let sol = solve_congruences(&sys).unwrap().unwrap();
        assert!(!sol.is_bounded());
        assert!(sol.contains(&[int(5), PAdicNum::from_ratio(2, 1, 8, 20).unwrap()]).unwrap());
    }

    #[test]
    fn two_x_zero_mod_four() {
        let mut sys = CongruenceSystem::new(2, 1);
        sys.push(vec![int(1)], PAdicNum::zero(2), 0);
        sys.push(vec![int(2)], PAdicNum::zero(2), 2);
        let sol = solve_congruences(&sys).unwrap().unwrap();
        let members: Vec<i64> = (0..4).filter(|&x| sol.contains(&[int(x)]).unwrap()).collect();
        assert_eq!(members, vec![0, 2]);
    }

    #[test]
    fn infeasible_detected() {
        let mut sys = CongruenceSystem::new(2, 1);
        sys.push(vec![int(1)], PAdicNum::zero(2), 0);
        sys.push(vec![int(2)], int(1), 1);
        assert!(solve_congruences(&sys).unwrap().is_none());
    }
}
