//! Hereditary orders in `M_4(Q_p)` described by entry-valuation grids.
//!
//! An order is the set of matrices whose `(i, j)` entry has valuation at least
//! `L[i][j]`; its Jacobson radical is given by a second grid `R`. Powers of the
//! radical are again grids, obtained by the min-plus product.

use super::mat::Mat4;
use crate::error::{Error, Result};

/// Integer valuation grid.
pub type Grid = [[i32; 4]; 4];

/// Upper bound on the filtration index reported by [`OrderSpec::u_level`].
pub const MAX_U_LEVEL: u32 = 64;

/// A hereditary order with its radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    /// Label for reports.
    pub name: String,
    /// Entry-valuation lower bounds for members.
    pub lower: Grid,
    /// Entry-valuation lower bounds for the Jacobson radical.
    pub radical: Grid,
    /// The period `e` (with `𝔓^e = p·𝔄`).
    pub period: u32,
}

/// The min-plus product of two grids (valuation grid of the product lattice).
pub fn min_plus(a: &Grid, b: &Grid) -> Grid {
    let mut r = [[i32::MAX; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                r[i][j] = r[i][j].min(a[i][k] + b[k][j]);
            }
        }
    }
    r
}

impl OrderSpec {
    /// Builds and validates an order: multiplicative closure, identity
    /// admissibility, the radical being a two-sided ideal, and `𝔓^e = p·𝔄`.
    pub fn new(name: &str, lower: Grid, radical: Grid, period: u32) -> Result<Self> {
        let o = OrderSpec { name: name.into(), lower, radical, period };
        if min_plus(&lower, &lower) != lower {
            return Err(Error::InvalidParameter(format!("{name}: grid is not multiplicatively closed")));
        }
        for (i, row) in lower.iter().enumerate() {
            if row[i] > 0 {
                return Err(Error::InvalidParameter(format!("{name}: identity is not a member")));
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                if radical[i][j] < lower[i][j] {
                    return Err(Error::InvalidParameter(format!("{name}: radical exceeds the order")));
                }
            }
        }
        if min_plus(&lower, &radical) != radical || min_plus(&radical, &lower) != radical {
            return Err(Error::InvalidParameter(format!("{name}: radical is not an ideal")));
        }
        let mut shifted = lower;
        for row in shifted.iter_mut() {
            for x in row.iter_mut() {
                *x += 1;
            }
        }
        if o.radical_power(period as i32) != shifted {
            return Err(Error::InvalidParameter(format!("{name}: period mismatch")));
        }
        Ok(o)
    }

    /// The standard minimal order `I_m`, lower-triangular modulo `p`.
    pub fn standard_minimal() -> Self {
        let mut l = [[0; 4]; 4];
        let mut r = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                l[i][j] = if i > j { 1 } else { 0 };
                r[i][j] = if i >= j { 1 } else { 0 };
            }
        }
        Self::new("I_m", l, r, 4).expect("standard minimal order")
    }

    /// The period-two order `𝔄₄` attached to the middle family.
    pub fn middle() -> Self {
        let l = [[0, 0, -1, -1], [1, 0, 0, -1], [1, 1, 0, 0], [2, 1, 1, 0]];
        let r = [[1, 0, 0, -1], [1, 1, 0, 0], [2, 1, 1, 0], [2, 2, 1, 1]];
        Self::new("A_4", l, r, 2).expect("middle order")
    }

    /// The maximal order attached to the biquadratic family, the conjugate of
    /// `M_4(Z_p)` by `diag(1, p, p², p³)`.
    pub fn biquadratic() -> Self {
        let mut l = [[0; 4]; 4];
        let mut r = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                l[i][j] = i as i32 - j as i32;
                r[i][j] = l[i][j] + 1;
            }
        }
        Self::new("A_M", l, r, 1).expect("biquadratic order")
    }

    /// The grid of `𝔓^n` for any integer `n` (with `𝔓^0 = 𝔄`).
    pub fn radical_power(&self, n: i32) -> Grid {
        let e = self.period as i32;
        let (q, rem) = (n.div_euclid(e), n.rem_euclid(e));
        let mut g = self.lower;
        for _ in 0..rem {
            g = min_plus(&g, &self.radical);
        }
        for row in g.iter_mut() {
            for x in row.iter_mut() {
                *x += q;
            }
        }
        g
    }

    /// Membership of `m` in the lattice with grid `g`.
    pub fn in_grid(m: &Mat4, g: &Grid) -> Result<bool> {
        for i in 0..4 {
            for j in 0..4 {
                if !m[(i, j)].val_at_least(g[i][j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Membership in the order.
    pub fn in_order(&self, m: &Mat4) -> Result<bool> {
        Self::in_grid(m, &self.lower)
    }

    /// The largest `n ≤ MAX_U_LEVEL` with `m ∈ U^n = I + 𝔓^n` (where `U^0` is
    /// the unit group of the order), or `None` when `m` is not a unit of the order.
    /// The identity lies in every `U^n` and reports the cap `MAX_U_LEVEL`.
    pub fn u_level(&self, m: &Mat4) -> Result<Option<u32>> {
        if !self.in_order(m)? {
            return Ok(None);
        }
        if m.det().val_at_least(1)? {
            return Ok(None);
        }
        let p = m.p();
        let one = Mat4::identity(p, crate::arith::padic::max_precision(p));
        let diff = m.sub(&one);
        let mut n = 0;
        while n < MAX_U_LEVEL {
            match Self::in_grid(&diff, &self.radical_power(n as i32 + 1)) {
                Ok(true) => n += 1,
                Ok(false) => break,
                // Every tracked digit of m - 1 vanishes: the level holds up to precision.
                Err(Error::PrecisionExhausted(_)) => return Ok(Some(MAX_U_LEVEL)),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_validate() {
        for o in [OrderSpec::standard_minimal(), OrderSpec::middle(), OrderSpec::biquadratic()] {
            assert_eq!(o.radical_power(o.period as i32), o.radical_power(0).map(|r| r.map(|x| x + 1)));
        }
    }

    #[test]
    fn identity_level_zero() {
        let one = Mat4::identity(2, 20);
        assert_eq!(OrderSpec::middle().u_level(&one).unwrap(), Some(MAX_U_LEVEL));
        let beta_like = Mat4::from_ints(2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [4, 0, 0, 1]], 20);
        assert_eq!(OrderSpec::middle().u_level(&beta_like).unwrap(), Some(1));
        assert!(OrderSpec::middle().in_order(&one).unwrap());
    }

    #[test]
    fn non_closed_grid_rejected() {
        let l = [[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]];
        assert!(OrderSpec::new("bad", l, l, 1).is_err());
    }
}
