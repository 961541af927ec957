//! Coset points of the period integral and the reductions that shrink their
//! number without changing any finite sum.
//!
//! A Shalika point is `α(r, h, x) = shalika_embed(r, h, x)`. Two exact
//! identities govern the dependence on `h` and `x`:
//!
//! * `α(r, h k, x) = α(r, h, x) · (k ⊗ I₂)` for `k ∈ GL(2, O)`;
//! * `α(r, h, x + t) = α(r, h, x) · κ` where `κ − 1` has entries
//!   `−h₁₁h₁₂, −h₁₂², h₁₁², h₁₁h₁₂` (times `t ϖ^r / det h`) at positions
//!   `(1,2), (1,4), (3,2), (3,4)`.
//!
//! Whenever the right factor lies in `U¹` and pairs trivially with `β` under
//! the trace, `W` is unchanged, because `W(g j) = W(g) Λ(j)` and
//! `Λ = ψ_β` on `U¹`. The plan below uses this only when the pairing
//! vanishes identically in the free variables, which is checked from `β`.

use crate::arith::padic::{ppow, PAdicNum};
use crate::error::{Error, Result};
use crate::lattice::gl2::{gl2_order, gl2_reps, shalika_embed};
use crate::lattice::mat::{Mat2, Mat4};
use crate::strata::family::Family;
use serde::{Deserialize, Serialize};

/// One point of the period sum: torus exponent, an integer lift of `h` and
/// the nilpotent coordinate `x = x_num · p^{x_shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetPoint {
    /// Torus exponent `r` of `g = diag(p^r, 1) h`.
    pub r: i32,
    /// `[h₁₁, h₁₂, h₂₁, h₂₂]` as nonnegative integers.
    pub h: [u64; 4],
    /// Integer part of `x`.
    pub x_num: u64,
    /// Power of `p` multiplying `x_num`.
    pub x_shift: i32,
}

impl CosetPoint {
    /// The Shalika point `α(r, h, x)` at relative precision `prec`.
    pub fn alpha(&self, p: u32, prec: u32) -> Mat4 {
        let h = h_matrix(p, &self.h, prec);
        let x = PAdicNum::from_int(p, self.x_num as i64, prec).shift(self.x_shift);
        shalika_embed(self.r, &h, &x)
    }
}

/// The integer tuple `h` as a matrix at relative precision `prec`.
pub fn h_matrix(p: u32, h: &[u64; 4], prec: u32) -> Mat2 {
    Mat2::from_ints(p, [[h[0] as i64, h[1] as i64], [h[2] as i64, h[3] as i64]], prec)
}

/// `v_p(n)` for `n ≠ 0`.
pub(crate) fn vint(p: u32, mut n: u64) -> Option<i32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p as u64 == 0 {
        n /= p as u64;
        v += 1;
    }
    Some(v)
}

/// Right-invariance data in the `h` variable: `W(α(r, hk, x)) = W(α(r, h, x))`
/// for `k` in `K(n) = {k ∈ GL(2, O) : k₁₁ ≡ k₂₂ ≡ 1 (p), k₂₁ ≡ 0 (p^n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HReduction {
    /// The level `n`.
    pub level: u32,
}

/// `K(n)` for the family, or `None` when `k ⊗ I₂` does not land in `U¹` for
/// such a subgroup or `ψ_β` does not vanish on it.
pub fn h_reduction(fam: &Family) -> Result<Option<HReduction>> {
    let r = &fam.order.radical;
    let l11 = r[0][0].max(r[1][1]);
    let l22 = r[2][2].max(r[3][3]);
    let l12 = r[0][2].max(r[1][3]);
    let l21 = r[2][0].max(r[3][1]);
    if l11 > 1 || l22 > 1 || l12 > 0 {
        return Ok(None);
    }
    let b = &fam.beta;
    // tr(β (k ⊗ I₂ − 1)) pairs k₁₁ − 1, k₂₂ − 1, k₁₂, k₂₁ with these sums.
    let pairings = [
        b[(0, 0)] + b[(1, 1)],
        b[(2, 2)] + b[(3, 3)],
        b[(2, 0)] + b[(3, 1)],
        b[(0, 2)] + b[(1, 3)],
    ];
    if pairings.iter().any(|s| !s.is_exact_zero()) {
        return Ok(None);
    }
    Ok(Some(HReduction { level: l21.max(1) as u32 }))
}

/// A complete set of representatives of `GL(2, O) / K(n)`:
/// `[[a, 0], [c, d]]` with `a, d ∈ [1, p)`, `c ∈ [0, p^n)`, and
/// `[[c, e], [b, 0]]` with `b, e ∈ [1, p)`, `c ∈ pZ/p^n`.
pub fn h_transversal(p: u32, n: u32) -> Vec<[u64; 4]> {
    let pp = p as u64;
    let q = ppow(p, n);
    let mut out = Vec::new();
    for a in 1..pp {
        for c in 0..q {
            for d in 1..pp {
                out.push([a, 0, c, d]);
            }
        }
    }
    for c in (0..q).step_by(p as usize) {
        for e in 1..pp {
            for b in 1..pp {
                out.push([c, e, b, 0]);
            }
        }
    }
    out
}

/// The `h` representatives used at level `M`: the transversal of `K(n)` when
/// the reduction applies and `M ≥ n`, else all of `GL(2, Z/p^M)`. Both give
/// the same uniform average of any function of `h` that is right
/// `K(n)`-invariant and depends on `h` modulo `p^M`.
pub fn h_points(fam: &Family, level: u32, reduce: bool) -> Result<(Vec<[u64; 4]>, bool)> {
    if reduce {
        if let Some(hr) = h_reduction(fam)? {
            if level >= hr.level {
                return Ok((h_transversal(fam.p, hr.level), true));
            }
        }
    }
    let reps = gl2_reps(fam.p, level)?;
    debug_assert_eq!(reps.len() as u64, gl2_order(fam.p, level));
    Ok((reps, false))
}

/// True when the trace pairing of `β` with the `x`-translation factor
/// vanishes for every `h`: `β₂₁ (−h₁₁h₁₂) + β₄₁ (−h₁₂²) + β₂₃ h₁₁² + β₄₃ h₁₁h₁₂ = 0`.
pub fn x_reduction_applies(fam: &Family) -> bool {
    let b = &fam.beta;
    b[(3, 0)].is_exact_zero() && b[(1, 2)].is_exact_zero() && (b[(1, 0)] - b[(3, 2)]).is_exact_zero()
}

/// The smallest `m` with `W(α(r, h, x + t)) = W(α(r, h, x))` for all `v(t) ≥ m`
/// guaranteed by the translation identity.
pub fn x_invariance_level(fam: &Family, r: i32, h: &[u64; 4]) -> Result<i32> {
    let p = fam.p;
    let rad = &fam.order.radical;
    let (h11, h12) = (vint(p, h[0]), vint(p, h[1]));
    let terms = [
        ((0, 1), h11.zip(h12).map(|(a, b)| a + b)),
        ((0, 3), h12.map(|b| 2 * b)),
        ((2, 1), h11.map(|a| 2 * a)),
        ((2, 3), h11.zip(h12).map(|(a, b)| a + b)),
    ];
    let mut m = i32::MIN;
    for ((i, j), v) in terms {
        if let Some(v) = v {
            m = m.max(rad[i][j] - r - v);
        }
    }
    if m == i32::MIN {
        return Err(Error::InvalidParameter("h is not invertible".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_mod(a: u64, q: u64) -> Option<u64> {
        (1..q).find(|&x| (a * x) % q == 1)
    }

    /// Membership of `h⁻¹ g` in `K(n)` modulo `p^n`.
    fn same_coset(p: u32, n: u32, h: &[u64; 4], g: &[u64; 4]) -> bool {
        let q = ppow(p, n);
        let det = (h[0] * h[3] + q * q - (h[1] * h[2]) % q) % q;
        let di = inv_mod(det, q).unwrap();
        let hi = [(h[3] * di) % q, ((q - h[1]) * di) % q, ((q - h[2]) * di) % q, (h[0] * di) % q];
        let k = [
            (hi[0] * g[0] + hi[1] * g[2]) % q,
            (hi[0] * g[1] + hi[1] * g[3]) % q,
            (hi[2] * g[0] + hi[3] * g[2]) % q,
            (hi[2] * g[1] + hi[3] * g[3]) % q,
        ];
        let pp = p as u64;
        k[0] % pp == 1 && k[3] % pp == 1 && k[2] == 0
    }

    #[test]
    fn transversal_is_complete_and_disjoint() {
        for (p, n) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2), (2, 3)] {
            let t = h_transversal(p, n);
            let reps = gl2_reps(p, n).unwrap();
            let q = ppow(p, n);
            let pp = p as u64;
            // |K(n) mod p^n| = p^{n-1} (for k₁₁) · p^{n-1} (k₂₂) · p^n (k₁₂).
            let ksize = pp.pow(n - 1) * pp.pow(n - 1) * q;
            assert_eq!(t.len() as u64 * ksize, reps.len() as u64, "p={p} n={n}");
            for g in &reps {
                let hits = t.iter().filter(|h| same_coset(p, n, h, g)).count();
                assert_eq!(hits, 1, "p={p} n={n} g={g:?}");
            }
        }
    }
}
