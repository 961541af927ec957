//! Random elements of the groups attached to a family: `N(4, F)`, `U¹`, `𝐉`,
//! and Shalika points. Used by the property suites and randomized checks.

use super::family::Family;
use super::whittaker::unipotent;
use crate::arith::ff::FFElem;
use crate::arith::padic::{ppow, PAdicNum};
use crate::error::Result;
use crate::lattice::gl2::shalika_embed;
use crate::lattice::mat::{Mat2, Mat4};
use rand::Rng;

/// Digits drawn for the unit part of random p-adic numbers.
const SAMPLE_DIGITS: u32 = 12;

/// A random element `p^v · n` with `0 ≤ n < p^SAMPLE_DIGITS` at precision `prec`.
pub fn random_padic<R: Rng>(p: u32, prec: u32, v: i32, rng: &mut R) -> PAdicNum {
    let n = rng.gen_range(0..ppow(p, SAMPLE_DIGITS.min(prec)));
    PAdicNum::from_int(p, n as i64, prec).shift(v)
}

/// A random unit of `Z_p`.
pub fn random_unit<R: Rng>(p: u32, prec: u32, rng: &mut R) -> PAdicNum {
    loop {
        let x = random_padic(p, prec, 0, rng);
        if x.valuation() == Some(0) {
            return x;
        }
    }
}

/// A random `u ∈ N(4, F)` with every entry in `P^lo`.
pub fn random_unipotent<R: Rng>(p: u32, prec: u32, lo: i32, rng: &mut R) -> Mat4 {
    let w: Vec<PAdicNum> = (0..6).map(|_| random_padic(p, prec, lo, rng)).collect();
    unipotent(p, prec, &w)
}

/// A random element of `U^n = 1 + 𝔓^n` (`n ≥ 1`).
pub fn random_u<R: Rng>(fam: &Family, n: i32, rng: &mut R) -> Mat4 {
    let grid = fam.order.radical_power(n);
    let mut m = Mat4::identity(fam.p, fam.prec);
    for (i, row) in grid.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = m[(i, j)] + random_padic(fam.p, fam.prec, v, rng);
        }
    }
    m
}

/// A random nonzero residue of `k_E`.
pub fn random_residue<R: Rng>(fam: &Family, rng: &mut R) -> FFElem {
    let q = fam.field.size() as u64;
    fam.field.gen_pow(rng.gen_range(0..q - 1))
}

/// A random `Π^k T(ē) z ∈ 𝐉` with `k ∈ [k_lo, k_hi]`, returned with `k`, `ē`
/// and `z ∈ U¹`.
pub fn random_j<R: Rng>(fam: &Family, k_lo: i32, k_hi: i32, rng: &mut R) -> Result<(Mat4, i32, FFElem, Mat4)> {
    let k = rng.gen_range(k_lo..=k_hi);
    let e = random_residue(fam, rng);
    let z = random_u(fam, 1, rng);
    let j = fam.power_pow(k)?.mul(fam.teichmuller_matrix(&e)?).mul(&z);
    Ok((j, k, e, z))
}

/// A random Shalika point `α(r, h, x)` with `r ∈ [r_lo, r_hi]`, `h ∈ GL(2, O)`
/// and `x ∈ P^{x_lo}`.
pub fn random_shalika_point<R: Rng>(fam: &Family, r_lo: i32, r_hi: i32, x_lo: i32, rng: &mut R) -> Mat4 {
    let (p, prec) = (fam.p, fam.prec);
    let h = loop {
        let e = [0, 1, 2, 3].map(|_| random_padic(p, prec, 0, rng));
        let h = Mat2::from_rows(p, [[e[0], e[1]], [e[2], e[3]]]);
        if h.det().valuation() == Some(0) {
            break h;
        }
    };
    let r = rng.gen_range(r_lo..=r_hi);
    shalika_embed(r, &h, &random_padic(p, prec, x_lo, rng))
}
