//! The explicit Whittaker function `W(u Π^k j) = ψ₄(u) Λ(Π^k j)`, the Bessel
//! function on `𝐉`, and membership tests.
//!
//! To evaluate `W(g)` the power `k` is read off `v(det g)`. Writing
//! `w = u^{-1} ∈ N(4, F)` with six unknown entries, the matrix
//! `m = Π^{-k} w g` depends affinely on `w`; the conditions `m ∈ 𝔄` form a
//! congruence system whose solutions are a lattice coset. On that coset the
//! residue of `m` modulo `𝔓` is an affine function of the lattice
//! coordinates modulo `p`, and `m ∈ J` asks this residue to be a nonzero
//! element of the image of `k_E`. That is a linear system over `F_p`. Any
//! solution yields a witness, and the value does not depend on the choice.

use super::family::{digit, Family};
use crate::arith::cyclo::{CycNum, Root};
use crate::arith::ff::FFElem;
use crate::arith::padic::PAdicNum;
use crate::arith::psi::psi_f;
use crate::error::{Error, Result};
use crate::lattice::congruence::{solve_congruences, CongruenceSystem};
use crate::lattice::mat::Mat4;
use rand::Rng;

/// Positions of the six entries of a strictly upper triangular matrix, in the
/// order used for the unknowns.
pub const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `ψ₄(u) = ψ_F(u₁₂ + u₂₃ + u₃₄)` for `u ∈ N(4, F)`.
pub fn psi4(u: &Mat4) -> Result<Root> {
    psi_f(&(u[(0, 1)] + u[(1, 2)] + u[(2, 3)]))
}

/// The unipotent matrix `1 + Σ w_ab E_ab`.
pub fn unipotent(p: u32, prec: u32, w: &[PAdicNum]) -> Mat4 {
    let mut m = Mat4::identity(p, prec);
    for (k, &(a, b)) in UPPER.iter().enumerate() {
        m[(a, b)] = w[k];
    }
    m
}

/// A decomposition `g = u · Π^k · T(ē) · z` with `u ∈ N(4, F)`, `z ∈ U¹`.
#[derive(Clone, Debug)]
pub struct TypeDecomposition {
    /// Power of `Π`.
    pub k: i32,
    /// Residue coordinates of the `O_E^×` part relative to the family basis.
    pub unit_coords: Vec<u32>,
    /// The residue `ē ∈ k_E^×`.
    pub residue: FFElem,
    /// The `U¹` part.
    pub z: Mat4,
    /// The unipotent part `u`.
    pub u: Mat4,
}

/// A support witness together with the value of `W`.
#[derive(Clone, Debug)]
pub struct Witness {
    /// Power of `Π`.
    pub k: i32,
    /// Entries of `w = u^{-1}` in the order of [`UPPER`].
    pub w: [PAdicNum; 6],
    /// Residue coordinates of the unit part.
    pub unit_coords: Vec<u32>,
    /// The residue of the unit part.
    pub residue: FFElem,
    /// `z = T(ē)^{-1} Π^{-k} w g ∈ U¹`.
    pub z: Mat4,
    /// `W(g)`.
    pub value: Root,
}

impl Witness {
    /// The decomposition of `g` determined by the witness.
    pub fn decomposition(&self, fam: &Family) -> Result<TypeDecomposition> {
        let u = unipotent(fam.p, fam.prec, &self.w).inverse()?;
        Ok(TypeDecomposition {
            k: self.k,
            unit_coords: self.unit_coords.clone(),
            residue: self.residue,
            z: self.z,
            u,
        })
    }
}

/// Solutions over `F_p` of `Σ_c x_c col_c = rhs`, as a particular solution and a
/// kernel basis; `None` when inconsistent. Columns are given as two blocks
/// which are concatenated.
pub fn solve_mod_p(
    p: u32,
    block_a: &[Vec<u32>],
    block_b: &[Vec<u32>],
    rhs: &[u32],
) -> Result<Option<(Vec<u32>, Vec<Vec<u32>>)>> {
    let pp = p as u64;
    let ncols = block_a.len() + block_b.len();
    let nrows = rhs.len();
    let col = |c: usize| -> &Vec<u32> {
        if c < block_a.len() {
            &block_a[c]
        } else {
            &block_b[c - block_a.len()]
        }
    };
    let mut a: Vec<Vec<u64>> =
        (0..nrows).map(|r| (0..ncols).map(|c| col(c)[r] as u64 % pp).collect()).collect();
    let mut b: Vec<u64> = rhs.iter().map(|&x| x as u64 % pp).collect();
    let inv = |x: u64| -> u64 {
        let mut r = 1u64;
        let mut base = x % pp;
        let mut e = pp - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % pp;
            }
            base = base * base % pp;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(r) = (row..nrows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(row, r);
        b.swap(row, r);
        let f = inv(a[row][c]);
        for x in a[row].iter_mut() {
            *x = *x * f % pp;
        }
        b[row] = b[row] * f % pp;
        for r2 in 0..nrows {
            if r2 != row && a[r2][c] != 0 {
                let g = a[r2][c];
                for c2 in 0..ncols {
                    a[r2][c2] = (a[r2][c2] + (pp - g) * a[row][c2]) % pp;
                }
                b[r2] = (b[r2] + (pp - g) * b[row]) % pp;
            }
        }
        pivots.push(c);
        row += 1;
    }
    if b[row..].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    let mut x = vec![0u32; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r] as u32;
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = ((pp - a[r][free]) % pp) as u32;
        }
        kernel.push(v);
    }
    Ok(Some((x, kernel)))
}

/// Choice of witness among the admissible ones.
pub trait WitnessChoice {
    /// Picks the combination of kernel vectors to add to the particular
    /// solution (must keep the unit part nonzero) and the lifts of residues.
    fn kernel_coeffs(&mut self, p: u32, n: usize) -> Vec<u32>;
    /// Extra lattice coordinates beyond the residue digits.
    fn higher_digits(&mut self, p: u32) -> u64;
}

/// The canonical choice: no kernel additions, no higher digits.
pub struct Canonical;

impl WitnessChoice for Canonical {
    fn kernel_coeffs(&mut self, _p: u32, n: usize) -> Vec<u32> {
        vec![0; n]
    }
    fn higher_digits(&mut self, _p: u32) -> u64 {
        0
    }
}

/// Uniformly random admissible choices.
pub struct RandomChoice<'a, R: Rng>(pub &'a mut R);

impl<R: Rng> WitnessChoice for RandomChoice<'_, R> {
    fn kernel_coeffs(&mut self, p: u32, n: usize) -> Vec<u32> {
        (0..n).map(|_| self.0.gen_range(0..p)).collect()
    }
    fn higher_digits(&mut self, p: u32) -> u64 {
        self.0.gen_range(0..(p as u64).pow(3))
    }
}

/// Full evaluation with an explicit witness choice. `det_val` may carry the
/// known valuation of `det g`.
pub fn whittaker_witness_with(
    fam: &Family,
    g: &Mat4,
    det_val: Option<i32>,
    choice: &mut dyn WitnessChoice,
) -> Result<Option<Witness>> {
    let p = fam.p;
    let prec = fam.prec;
    let dv = match det_val {
        Some(v) => v,
        None => g.det().valuation().ok_or(Error::DivisionByZero)?,
    };
    let Some(k) = fam.k_from_det_val(dv) else { return Ok(None) };
    let pm = fam.power_pow(-k)?;
    let pg = pm.mul(g);
    // Coefficient matrices C_ab = Π^{-k} E_ab g.
    let mut coef = [Mat4::zero(p); 6];
    for (t, &(a, b)) in UPPER.iter().enumerate() {
        for i in 0..4 {
            let x = pm[(i, a)];
            if x.is_exact_zero() {
                continue;
            }
            for j in 0..4 {
                let y = g[(b, j)];
                if !y.is_exact_zero() {
                    coef[t][(i, j)] = x * y;
                }
            }
        }
    }
    let lower = &fam.order.lower;
    let mut sys = CongruenceSystem::new(p, 6);
    for i in 0..4 {
        for j in 0..4 {
            let row: Vec<PAdicNum> = (0..6).map(|t| coef[t][(i, j)]).collect();
            sys.push(row, pg[(i, j)], lower[i][j]);
        }
    }
    let Some(sol) = solve_congruences(&sys)? else { return Ok(None) };
    if !sol.is_bounded() {
        return Err(Error::Invariant("the map w -> Π^-k w g must be injective".into()));
    }
    let combine = |w: &[PAdicNum]| -> Mat4 {
        let mut m = pg;
        for (t, x) in w.iter().enumerate() {
            if !x.is_exact_zero() {
                m = m.add(&coef[t].scale(x));
            }
        }
        m
    };
    let w0 = sol.particular().to_vec();
    let m0 = combine(&w0);
    let positions = &fam.residue_positions;
    let digits_of = |m: &Mat4| -> Result<Vec<u32>> {
        positions.iter().map(|&(i, j)| digit(&m[(i, j)], lower[i][j])).collect()
    };
    let r0 = digits_of(&m0)?;
    let mut gens_scaled = Vec::with_capacity(6);
    let mut neg_cols = Vec::with_capacity(6);
    for (t, gk) in sol.generators().iter().enumerate() {
        let l = sol.levels()[t].expect("bounded");
        let scaled: Vec<PAdicNum> = gk.iter().map(|x| x.shift(l)).collect();
        let mut lin = Mat4::zero(p);
        for (s, x) in scaled.iter().enumerate() {
            if !x.is_exact_zero() {
                lin = lin.add(&coef[s].scale(x));
            }
        }
        let d = digits_of(&lin)?;
        neg_cols.push(d.iter().map(|&x| (p - x) % p).collect::<Vec<u32>>());
        gens_scaled.push(scaled);
    }
    let f = fam.residue_degree as usize;
    let Some((part, kernel)) = solve_mod_p(p, &fam.basis_digits, &neg_cols, &r0)? else {
        return Ok(None);
    };
    // Choose a solution with nonzero unit part.
    let coeffs = choice.kernel_coeffs(p, kernel.len());
    let add = |base: &[u32], v: &[u32], c: u32| -> Vec<u32> {
        base.iter().zip(v).map(|(&x, &y)| ((x as u64 + c as u64 * y as u64) % p as u64) as u32).collect()
    };
    let mut x = part.clone();
    for (v, &c) in kernel.iter().zip(&coeffs) {
        x = add(&x, v, c);
    }
    if x[..f].iter().all(|&t| t == 0) {
        match kernel.iter().find(|v| v[..f].iter().any(|&t| t != 0)) {
            Some(v) => x = add(&x, v, 1),
            None => return Ok(None),
        }
    }
    let mu = x[..f].to_vec();
    let mut w = w0.clone();
    for (t, gs) in gens_scaled.iter().enumerate() {
        let s = x[f + t] as u64 + p as u64 * choice.higher_digits(p);
        if s == 0 {
            continue;
        }
        let sv = PAdicNum::from_int(p, s as i64, prec);
        for (wi, gi) in w.iter_mut().zip(gs) {
            *wi = *wi + sv * *gi;
        }
    }
    let m = combine(&w);
    let residue = fam.residue_of_coords(&mu);
    let z = fam.teichmuller_inverse(&residue)?.mul(&m);
    if !fam.in_u1(&z)? {
        return Err(Error::Invariant("residue stage produced z outside U^1".into()));
    }
    let psi_u = psi_f(&(w[0] + w[3] + w[5]))?.inv();
    let value = psi_u
        .mul(&fam.lambda_power.pow(k as i64))
        .mul(&fam.chi.eval(&residue)?)
        .mul(&fam.psi_beta_unchecked(&z)?);
    let warr: [PAdicNum; 6] = w.try_into().expect("six entries");
    Ok(Some(Witness { k, w: warr, unit_coords: mu, residue, z, value }))
}

/// `W(g)` with its canonical witness, or `None` off the support.
pub fn whittaker_witness(fam: &Family, g: &Mat4) -> Result<Option<Witness>> {
    whittaker_witness_with(fam, g, None, &mut Canonical)
}

/// `W(g)` as a root of unity, or `None` for the value 0.
pub fn whittaker_root(fam: &Family, g: &Mat4, det_val: Option<i32>) -> Result<Option<Root>> {
    Ok(whittaker_witness_with(fam, g, det_val, &mut Canonical)?.map(|w| w.value))
}

/// `W(g)` as a cyclotomic number.
pub fn whittaker_value(fam: &Family, g: &Mat4) -> Result<CycNum> {
    Ok(match whittaker_root(fam, g, None)? {
        Some(r) => CycNum::from_root(r),
        None => CycNum::zero(),
    })
}

/// Decides `m ∈ J`; returns the unit residue coordinates and `z = T(ē)^{-1} m`.
pub fn j_membership(fam: &Family, m: &Mat4) -> Result<Option<(Vec<u32>, Mat4)>> {
    if !fam.order.in_order(m)? {
        return Ok(None);
    }
    if m.det().val_at_least(1)? {
        return Ok(None);
    }
    let Some(e) = fam.residue_in_image(m)? else { return Ok(None) };
    let z = fam.teichmuller_inverse(&e)?.mul(m);
    if !fam.in_u1(&z)? {
        return Err(Error::Invariant("residue in image but z outside U^1".into()));
    }
    Ok(Some((fam.coords_of_residue(&e), z)))
}

/// `Λ` on a decomposition: `Λ(Π)^k χ(ē) ψ_β(z)`.
pub fn lambda_eval(fam: &Family, dec: &TypeDecomposition) -> Result<Root> {
    Ok(fam
        .lambda_power
        .pow(dec.k as i64)
        .mul(&fam.chi.eval(&dec.residue)?)
        .mul(&fam.psi_beta(&dec.z)?))
}

/// The Bessel function on `𝐉`, which equals `Λ` for these one-dimensional types.
pub fn bessel_value(fam: &Family, j: &Mat4) -> Result<Root> {
    let dv = j.det().valuation().ok_or(Error::DivisionByZero)?;
    let k = fam
        .k_from_det_val(dv)
        .ok_or_else(|| Error::NotMember("determinant valuation excludes 𝐉".into()))?;
    let m = fam.power_pow(-k)?.mul(j);
    let Some((coords, z)) = j_membership(fam, &m)? else {
        return Err(Error::NotMember("element is not in 𝐉".into()));
    };
    let residue = fam.residue_of_coords(&coords);
    Ok(fam
        .lambda_power
        .pow(k as i64)
        .mul(&fam.chi.eval(&residue)?)
        .mul(&fam.psi_beta_unchecked(&z)?))
}
