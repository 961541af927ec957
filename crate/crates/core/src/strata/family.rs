//! The three families of minimax supercuspidals: parameters, simple strata,
//! residue-field data and the extended type `Λ` on the power element.
//!
//! Every family has `J = O_E^× U¹` with `U¹ = 1 + 𝔓`, and `𝐉 = Π^Z J` for a
//! power element `Π` (`β` for the simple and middle families, `ϖ·I` for the
//! biquadratic family). An element of `J` is written `T(ē)·z` with `T(ē)` the
//! Teichmüller lift of its residue `ē ∈ k_E^×` and `z ∈ U¹`, and
//! `Λ(Π^k T(ē) z) = Λ(Π)^k χ(ē) ψ_β(z)`.

use crate::arith::cyclo::Root;
use crate::arith::ff::{FFElem, FiniteField, MultChar};
use crate::arith::padic::{max_precision, PAdicNum};
use crate::arith::psi::{psi_f, teichmuller};
use crate::arith::tame::TameChar;
use crate::error::{Error, Result};
use crate::lattice::mat::Mat4;
use crate::lattice::order::OrderSpec;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// The three families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Depth 1/4, `E/F` totally ramified.
    Simple,
    /// Depth 1/2, `e = f = 2`.
    Middle,
    /// Depth 1, `E/F` unramified.
    Biquadratic,
}

/// Family parameters. Characters are given by their exponent relative to the
/// fixed generator of the relevant residue field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    /// `β_v` with `v` the Teichmüller lift of the residue `v`, `φ` on `F_p^×`.
    Simple {
        /// Residue of `v` (nonzero mod p).
        v: i64,
        /// Exponent of `φ`.
        phi: u64,
        /// `Λ(β_v)`.
        zeta: Root,
    },
    /// `f = X² − dX − c`, `χ` on `F_p[X]/(f̄)`.
    Middle {
        /// Constant coefficient parameter.
        c: i64,
        /// Linear coefficient parameter.
        d: i64,
        /// Exponent of `χ`.
        chi: u64,
        /// `Λ(β_f)`.
        zeta: Root,
    },
    /// `f_M = X⁴ − bX² − a`, `χ_M` on `F_p[X]/(f̄_M)`.
    Biquadratic {
        /// Constant coefficient parameter.
        a: i64,
        /// Quadratic coefficient parameter.
        b: i64,
        /// Exponent of `χ_M`.
        chi: u64,
        /// `Λ(β_{f_M})`.
        zeta: Root,
    },
}

/// A tame character `η` by exponent of `η_μ` on `F_p^×` and value at `ϖ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistSpec {
    /// Exponent of `η_μ` relative to the generator of `F_p^×`.
    pub mu: u64,
    /// `η(ϖ)`.
    pub at_pi: Root,
}

/// A family member together with an optional tame twist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    /// The prime.
    pub p: u32,
    /// Family parameters.
    pub params: FamilyParams,
    /// Optional tame twist `η`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistSpec>,
}

impl FamilySpec {
    /// The family kind.
    pub fn kind(&self) -> FamilyKind {
        match self.params {
            FamilyParams::Simple { .. } => FamilyKind::Simple,
            FamilyParams::Middle { .. } => FamilyKind::Middle,
            FamilyParams::Biquadratic { .. } => FamilyKind::Biquadratic,
        }
    }

    /// `ζ = Λ(β)`.
    pub fn zeta(&self) -> Root {
        match &self.params {
            FamilyParams::Simple { zeta, .. }
            | FamilyParams::Middle { zeta, .. }
            | FamilyParams::Biquadratic { zeta, .. } => *zeta,
        }
    }

    /// The same family without twist.
    pub fn untwisted(&self) -> FamilySpec {
        FamilySpec { twist: None, ..self.clone() }
    }

    /// The twist as a tame character (trivial when absent).
    pub fn twist_char(&self) -> Result<TameChar> {
        match &self.twist {
            None => TameChar::trivial(self.p),
            Some(t) => TameChar::from_exponent(self.p, t.mu, t.at_pi),
        }
    }
}

/// The constructed stratum with all tables needed for evaluation.
pub struct Family {
    /// The input parameters.
    pub spec: FamilySpec,
    /// The prime.
    pub p: u32,
    /// Working relative precision.
    pub prec: u32,
    /// `β`.
    pub beta: Mat4,
    /// The hereditary order `𝔄`.
    pub order: OrderSpec,
    /// `v(det β)`.
    pub det_beta_val: i32,
    /// Residue degree `f` of `E/F`.
    pub residue_degree: u32,
    /// `k_E`.
    pub field: Arc<FiniteField>,
    /// `χ` (or `φ`) on `k_E^×`.
    pub chi: MultChar,
    /// `ζ`.
    pub zeta: Root,
    /// The power element `Π` and its inverse.
    pub power: Mat4,
    /// `Π^{-1}`.
    pub power_inv: Mat4,
    /// `v(det Π)`.
    pub power_det_val: i32,
    /// `Λ(Π)`.
    pub lambda_power: Root,
    /// The element `Y` generating `O_E` over `O_F` modulo the scalars
    /// (`1` simple, `σ_f` middle, `σ` biquadratic).
    pub generator: Mat4,
    /// O_F-basis matrices of `O_E` used for unit coordinates.
    pub basis: Vec<Mat4>,
    /// Positions `(i, j)` carrying `𝔄/𝔓`, i.e. where the radical bound is `L + 1`.
    pub residue_positions: Vec<(usize, usize)>,
    /// Residue digits of each basis matrix at the residue positions.
    pub basis_digits: Vec<Vec<u32>>,
    teich: Vec<Mat4>,
    teich_inv: Vec<Mat4>,
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Family({:?})", self.spec)
    }
}

fn unit_int(p: u32, v: i64, what: &str) -> Result<()> {
    if v.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be a unit")));
    }
    Ok(())
}

/// Residue digit of entry `x` at level `l`, requiring `v(x) ≥ l`.
pub(crate) fn digit(x: &PAdicNum, l: i32) -> Result<u32> {
    x.digit_at(l)
}

impl Family {
    /// Builds the family at the largest supported precision.
    pub fn new(spec: &FamilySpec) -> Result<Arc<Self>> {
        Self::with_precision(spec, max_precision(spec.p))
    }

    /// Builds the family at relative precision `prec`.
    pub fn with_precision(spec: &FamilySpec, prec: u32) -> Result<Arc<Self>> {
        let p = spec.p;
        if !matches!(p, 2 | 3 | 5 | 7 | 11 | 13) {
            return Err(Error::InvalidParameter(format!("unsupported prime {p}")));
        }
        if prec < 6 || prec > max_precision(p) {
            return Err(Error::InvalidParameter(format!(
                "precision {prec} outside [6, {}]",
                max_precision(p)
            )));
        }
        let int = |n: i64| PAdicNum::from_int(p, n, prec);
        let one = PAdicNum::one(p, prec);
        let pi_pow = |k: i32| PAdicNum::uniformizer_pow(p, k, prec);
        let mut beta = Mat4::zero(p);
        beta[(1, 0)] = one;
        beta[(2, 1)] = one;
        beta[(3, 2)] = one;
        let ident = Mat4::identity(p, prec);
        let (order, field, chi_exp, zeta, generator, basis);
        match &spec.params {
            FamilyParams::Simple { v, phi, zeta: z } => {
                unit_int(p, *v, "v")?;
                let vt = teichmuller(p, v.rem_euclid(p as i64) as u32, prec)?;
                beta[(0, 3)] = vt.shift(1).inv()?;
                order = OrderSpec::standard_minimal();
                field = FiniteField::prime(p)?;
                chi_exp = *phi;
                zeta = *z;
                generator = ident;
                basis = vec![ident];
            }
            FamilyParams::Middle { c, d, chi, zeta: z } => {
                unit_int(p, *c, "c")?;
                let m = [(-c).rem_euclid(p as i64) as u32, (-d).rem_euclid(p as i64) as u32, 1];
                field = FiniteField::new(p, &m).map_err(|_| {
                    Error::InvalidParameter(format!("X^2 - {d}X - {c} is reducible mod {p}"))
                })?;
                beta[(0, 3)] = int(*c).shift(-2);
                beta[(2, 3)] = int(*d).shift(-1);
                order = OrderSpec::middle();
                chi_exp = *chi;
                zeta = *z;
                generator = beta.mul(&beta).shift(1);
                basis = vec![ident.scale(&int(*c)), generator];
            }
            FamilyParams::Biquadratic { a, b, chi, zeta: z } => {
                if p == 2 {
                    return Err(Error::InvalidParameter(
                        "biquadratic family requires p odd: over F_2 every X^4 - bX^2 - a is a square"
                            .into(),
                    ));
                }
                let m = [
                    (-a).rem_euclid(p as i64) as u32,
                    0,
                    (-b).rem_euclid(p as i64) as u32,
                    0,
                    1,
                ];
                field = FiniteField::new(p, &m).map_err(|_| {
                    Error::InvalidParameter(format!("X^4 - {b}X^2 - {a} is reducible mod {p}"))
                })?;
                beta[(0, 3)] = int(*a).shift(-4);
                beta[(2, 3)] = int(*b).shift(-2);
                order = OrderSpec::biquadratic();
                chi_exp = *chi;
                zeta = *z;
                generator = beta.shift(1);
                let s2 = generator.mul(&generator);
                basis = vec![ident, generator, s2, s2.mul(&generator)];
            }
        }
        let kind = spec.kind();
        let (power, power_inv) = match kind {
            FamilyKind::Biquadratic => (ident.scale(&pi_pow(1)), ident.scale(&pi_pow(-1))),
            _ => (beta, beta.inverse()?),
        };
        let det_beta_val = beta.det().valuation().ok_or(Error::Invariant("det β = 0".into()))?;
        let power_det_val = power.det().valuation().ok_or(Error::Invariant("det Π = 0".into()))?;
        let residue_positions: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| order.radical[i][j] == order.lower[i][j] + 1)
            .collect();
        let mut basis_digits = Vec::new();
        for bm in &basis {
            let mut row = Vec::new();
            for &(i, j) in &residue_positions {
                row.push(digit(&bm[(i, j)], order.lower[i][j])?);
            }
            basis_digits.push(row);
        }
        let chi = MultChar::new(field.clone(), chi_exp);
        let residue_degree = field.degree();
        let mut fam = Family {
            spec: spec.clone(),
            p,
            prec,
            beta,
            order,
            det_beta_val,
            residue_degree,
            field,
            chi,
            zeta,
            power,
            power_inv,
            power_det_val,
            lambda_power: Root::one(),
            generator,
            basis,
            residue_positions,
            basis_digits,
            teich: Vec::new(),
            teich_inv: Vec::new(),
        };
        fam.build_teichmuller()?;
        fam.lambda_power = match kind {
            FamilyKind::Biquadratic => {
                // ϖ = σ β^{-1}, so Λ(ϖ) = Λ(σ) ζ^{-1} with σ ∈ O_E^×.
                let sigma = fam.generator;
                fam.lambda_on_j(&sigma)?.mul(&zeta.inv())
            }
            _ => zeta,
        };
        Ok(Arc::new(fam))
    }

    /// The family kind.
    pub fn kind(&self) -> FamilyKind {
        self.spec.kind()
    }

    /// `Σ a_i B_i` for integer coordinates `a_i`.
    pub fn embed_coords(&self, coords: &[PAdicNum]) -> Mat4 {
        let mut m = Mat4::zero(self.p);
        for (x, b) in coords.iter().zip(&self.basis) {
            m = m.add(&b.scale(x));
        }
        m
    }

    /// The residue `ē ∈ k_E` of `Σ μ_i B_i` for residue coordinates `μ`.
    pub fn residue_of_coords(&self, mu: &[u32]) -> FFElem {
        let p = self.p as u64;
        match self.spec.params {
            FamilyParams::Middle { c, .. } => {
                let cr = c.rem_euclid(p as i64) as u64;
                self.field.elem(&[((mu[0] as u64 * cr) % p) as u32, mu[1]])
            }
            _ => self.field.elem(mu),
        }
    }

    /// Residue coordinates `μ` (relative to the basis) of an element of `k_E`.
    pub fn coords_of_residue(&self, e: &FFElem) -> Vec<u32> {
        let p = self.p as i64;
        match self.spec.params {
            FamilyParams::Middle { c, .. } => {
                let cinv = PAdicNum::from_int(self.p, c, 4).inv().expect("c is a unit").residue().expect("unit") as i64;
                vec![((e.coeffs[0] as i64 * cinv) % p) as u32, e.coeffs[1]]
            }
            _ => e.coeffs[..self.residue_degree as usize].to_vec(),
        }
    }

    fn build_teichmuller(&mut self) -> Result<()> {
        let q = self.field.size() as i64;
        let g = self.field.generator();
        let mu = self.coords_of_residue(&g);
        let coords: Vec<PAdicNum> = mu.iter().map(|&x| PAdicNum::from_int(self.p, x as i64, self.prec)).collect();
        let mut x = self.embed_coords(&coords);
        let mut iterations = 0;
        loop {
            let y = x.pow(q)?;
            if y.eq_at_prec(&x) {
                break;
            }
            x = y;
            iterations += 1;
            if iterations > 4 * self.prec + 8 {
                return Err(Error::Invariant("Teichmüller iteration did not converge".into()));
            }
        }
        let n = (q - 1) as usize;
        let mut table = Vec::with_capacity(n);
        let mut acc = Mat4::identity(self.p, self.prec);
        for _ in 0..n {
            table.push(acc);
            acc = acc.mul(&x);
        }
        if !acc.eq_at_prec(&Mat4::identity(self.p, self.prec)) {
            return Err(Error::Invariant("Teichmüller generator has the wrong order".into()));
        }
        let inv: Vec<Mat4> = (0..n).map(|k| table[(n - k) % n]).collect();
        self.teich = table;
        self.teich_inv = inv;
        Ok(())
    }

    /// The Teichmüller lift `T(e)` (a matrix in `O_E^×`) of `e ∈ k_E^×`.
    pub fn teichmuller_matrix(&self, e: &FFElem) -> Result<&Mat4> {
        Ok(&self.teich[self.field.dlog(e)? as usize])
    }

    /// `T(e)^{-1}`.
    pub fn teichmuller_inverse(&self, e: &FFElem) -> Result<&Mat4> {
        Ok(&self.teich_inv[self.field.dlog(e)? as usize])
    }

    /// `ψ_β(z) = ψ_F(tr(β(z − 1)))`, for `z` already known to lie in `U¹`.
    pub fn psi_beta_unchecked(&self, z: &Mat4) -> Result<Root> {
        let mut t = PAdicNum::zero(self.p);
        for i in 0..4 {
            for k in 0..4 {
                let b = self.beta[(i, k)];
                if b.is_exact_zero() {
                    continue;
                }
                let zk = if k == i { z[(k, i)] - PAdicNum::one(self.p, self.prec) } else { z[(k, i)] };
                t = t + b * zk;
            }
        }
        psi_f(&t)
    }

    /// `ψ_β(z)` for `z ∈ U¹`.
    pub fn psi_beta(&self, z: &Mat4) -> Result<Root> {
        if !self.in_u1(z)? {
            return Err(Error::NotMember("z is not in U^1".into()));
        }
        self.psi_beta_unchecked(z)
    }

    /// Membership in `U¹ = 1 + 𝔓`.
    pub fn in_u1(&self, z: &Mat4) -> Result<bool> {
        let d = z.sub(&Mat4::identity(self.p, self.prec));
        OrderSpec::in_grid(&d, &self.order.radical)
    }

    /// The residue of `m ∈ 𝔄` in `k_E` when `m̄` lies in the image of `k_E^×`
    /// in `𝔄/𝔓`; `None` otherwise.
    pub fn residue_in_image(&self, m: &Mat4) -> Result<Option<FFElem>> {
        let digits: Vec<u32> = self
            .residue_positions
            .iter()
            .map(|&(i, j)| digit(&m[(i, j)], self.order.lower[i][j]))
            .collect::<Result<_>>()?;
        let f = self.residue_degree as usize;
        let p = self.p;
        // Solve Σ μ_i basis_digits[i] = digits over F_p.
        let cols: Vec<Vec<u32>> = self.basis_digits.clone();
        let sol = crate::strata::whittaker::solve_mod_p(p, &cols, &[], &digits)?;
        match sol {
            None => Ok(None),
            Some((mu, _)) => {
                let mu = mu[..f].to_vec();
                if mu.iter().all(|&x| x == 0) {
                    return Ok(None);
                }
                Ok(Some(self.residue_of_coords(&mu)))
            }
        }
    }

    /// `Λ(m)` for `m ∈ J`: `χ(m̄) ψ_β(T(m̄)^{-1} m)`.
    pub fn lambda_on_j(&self, m: &Mat4) -> Result<Root> {
        if !self.order.in_order(m)? {
            return Err(Error::NotMember("element is not in the order".into()));
        }
        let e = self
            .residue_in_image(m)?
            .ok_or_else(|| Error::NotMember("residue is not in k_E^×".into()))?;
        let z = self.teichmuller_inverse(&e)?.mul(m);
        Ok(self.chi.eval(&e)?.mul(&self.psi_beta(&z)?))
    }

    /// `Π^k` (with `Π^{-1}` for negative `k`).
    pub fn power_pow(&self, k: i32) -> Result<Mat4> {
        if k >= 0 {
            self.power.pow(k as i64)
        } else {
            self.power_inv.pow(-(k as i64))
        }
    }

    /// The uniformizer exponent `k` of an element of `𝐉` from `v(det g)`, or
    /// `None` when `v(det g)` is not a multiple of `v(det Π)`.
    pub fn k_from_det_val(&self, det_val: i32) -> Option<i32> {
        if det_val % self.power_det_val == 0 {
            Some(det_val / self.power_det_val)
        } else {
            None
        }
    }
}
