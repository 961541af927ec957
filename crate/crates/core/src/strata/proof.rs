//! Closed-form decompositions of Shalika points on the support of the
//! Whittaker function.
//!
//! For a Shalika point `α = shalika_embed(r, h, x)` lying in `N(4, F) 𝐉`, the
//! period computations for the middle and biquadratic families write
//! `α = u · Y · z` with `u ∈ N(4, F)`, `Y ∈ 𝐉` an explicit element of `E^×`
//! and `z ∈ U¹`, each entry given by a rational expression in `h`, `x` and
//! the unit coordinates. This module rebuilds `u`, `Y` and `z` from those
//! expressions, checks the product against `α` exactly, checks `z ∈ U¹`,
//! compares `ψ₄(u)` and `ψ_β(z)` with their stated values, and compares the
//! resulting value of `W(α)` with the generic evaluator.

use super::family::{Family, FamilyKind, FamilyParams};
use super::whittaker::{bessel_value, psi4, whittaker_root};
use crate::arith::cyclo::Root;
use crate::arith::padic::PAdicNum;
use crate::arith::psi::psi_f;
use crate::error::{Error, Result};
use crate::lattice::gl2::shalika_embed;
use crate::lattice::mat::{Mat2, Mat4};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The proof cases, named by family and by the index of the partial
/// integral (`T₀`, `T₁`, `T₂`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofCase {
    /// Middle family, `r = 0`, Iwahori representatives.
    MiddleT0,
    /// Middle family, `r = −2`, Bruhat representatives.
    MiddleT1,
    /// Biquadratic family, `r = 0`, Iwahori representatives.
    BiquadraticT0,
    /// Biquadratic family, `r = −2`, Iwahori representatives.
    BiquadraticT1,
    /// Biquadratic family, `r = −4`, Bruhat representatives.
    BiquadraticT2,
}

impl ProofCase {
    /// All five cases.
    pub const ALL: [ProofCase; 5] = [
        ProofCase::MiddleT0,
        ProofCase::MiddleT1,
        ProofCase::BiquadraticT0,
        ProofCase::BiquadraticT1,
        ProofCase::BiquadraticT2,
    ];

    /// The family the case belongs to.
    pub fn family(self) -> FamilyKind {
        match self {
            ProofCase::MiddleT0 | ProofCase::MiddleT1 => FamilyKind::Middle,
            _ => FamilyKind::Biquadratic,
        }
    }

    /// The torus exponent `r` of the Shalika point.
    pub fn r(self) -> i32 {
        match self {
            ProofCase::MiddleT0 | ProofCase::BiquadraticT0 => 0,
            ProofCase::MiddleT1 | ProofCase::BiquadraticT1 => -2,
            ProofCase::BiquadraticT2 => -4,
        }
    }

    /// Number of free unit coordinates.
    pub fn unit_count(self) -> usize {
        match self {
            ProofCase::MiddleT0 | ProofCase::BiquadraticT0 | ProofCase::BiquadraticT1 => 2,
            ProofCase::MiddleT1 | ProofCase::BiquadraticT2 => 1,
        }
    }
}

/// The variables of one proof case.
///
/// `units` holds `(x₀, x₁)` for middle `T₀`, `x₁` for middle `T₁`, `(x₀, x₂)`
/// for biquadratic `T₀`, `(x₂, v)` for biquadratic `T₁` (with `v` the unit
/// congruent to `h₂₂`) and `x₂` for biquadratic `T₂`.
#[derive(Clone, Debug)]
pub struct ProofParams {
    /// `h = [[h₁₁, h₁₂], [h₂₁, h₂₂]]`.
    pub h: [PAdicNum; 4],
    /// The nilpotent coordinate.
    pub x: PAdicNum,
    /// Unit coordinates.
    pub units: Vec<PAdicNum>,
}

/// Outcome of the individual checks of one decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCheck {
    /// `u · Y · z = α` at working precision, with at least the required
    /// number of certified digits.
    pub identity: bool,
    /// `z ∈ U¹`.
    pub z_in_u1: bool,
    /// `ψ₄(u)` equals its stated value.
    pub psi4: bool,
    /// `ψ_β(z)` equals its stated value.
    pub psi_beta: bool,
    /// The generic evaluator returns `ψ₄(u) Λ(Y) ψ_β(z)` at `α`.
    pub whittaker: bool,
}

impl ProofCheck {
    /// True when every check passed.
    pub fn holds(&self) -> bool {
        self.identity && self.z_in_u1 && self.psi4 && self.psi_beta && self.whittaker
    }
}

/// Minimum absolute precision of `u · Y · z − α` required for the identity.
pub const CERTIFIED_DIGITS: i32 = 6;

struct Ctx {
    p: u32,
    prec: u32,
    /// `(c, d)` or `(a, b)`.
    c0: PAdicNum,
    c1: PAdicNum,
}

impl Ctx {
    fn new(fam: &Family, case: ProofCase) -> Result<Ctx> {
        if fam.kind() != case.family() {
            return Err(Error::InvalidParameter(format!(
                "{case:?} needs a {:?} family, got {:?}",
                case.family(),
                fam.kind()
            )));
        }
        let (c0, c1) = match fam.spec.params {
            FamilyParams::Middle { c, d, .. } => (c, d),
            FamilyParams::Biquadratic { a, b, .. } => (a, b),
            FamilyParams::Simple { .. } => unreachable!("checked above"),
        };
        let int = |n: i64| PAdicNum::from_int(fam.p, n, fam.prec);
        Ok(Ctx { p: fam.p, prec: fam.prec, c0: int(c0), c1: int(c1) })
    }

    fn pi(&self, k: i32) -> PAdicNum {
        PAdicNum::uniformizer_pow(self.p, k, self.prec)
    }

    fn ident(&self) -> Mat4 {
        Mat4::identity(self.p, self.prec)
    }
}

fn div(a: PAdicNum, b: PAdicNum) -> Result<PAdicNum> {
    a.checked_div(&b)
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("proof constraint violated: {what}")))
    }
}

fn in_p(x: PAdicNum, k: i32) -> Result<bool> {
    x.val_at_least(k)
}

fn is_unit(x: PAdicNum) -> Result<bool> {
    Ok(x.val_at_least(0)? && !x.val_at_least(1)?)
}

/// Checks that `params` satisfy the constraints of `case`.
pub fn validate_params(fam: &Family, case: ProofCase, params: &ProofParams) -> Result<()> {
    let cx = Ctx::new(fam, case)?;
    let [h11, h12, h21, h22] = params.h;
    let x = params.x;
    let (c0, c1) = (cx.c0, cx.c1);
    require(params.units.len() == case.unit_count(), "number of unit coordinates")?;
    for e in params.h {
        require(in_p(e, 0)?, "h has integral entries")?;
    }
    let det = h11 * h22 - h12 * h21;
    require(is_unit(det)?, "h is invertible over O")?;
    match case {
        ProofCase::MiddleT0 => {
            let (x0, x1) = (params.units[0], params.units[1]);
            require(in_p(x0, 0)? && in_p(x1, 0)?, "x0, x1 integral")?;
            let n = x0 * x0 * c0 + x0 * x1 * c1 - x1 * x1;
            let s = x0 * c0 + x1 * c1;
            require(is_unit(n)?, "x0^2 c + x0 x1 d - x1^2 is a unit")?;
            require(is_unit(s)?, "x0 c + x1 d is a unit")?;
            require(h12.is_exact_zero(), "h12 = 0")?;
            require(in_p(h21 - x1 * cx.pi(1), 2)?, "h21 in (x1 + P) p")?;
            require(in_p(h22 - s, 1)?, "h22 in x0 c + x1 d + P")?;
            require(in_p(h11 - div(n * c0, s)?, 1)?, "h11 in N c / (x0 c + x1 d) + P")?;
            require(in_p(x, 1)?, "x in P")?;
        }
        ProofCase::MiddleT1 => {
            let x1 = params.units[0];
            require(is_unit(x1)?, "x1 is a unit")?;
            require(is_unit(c1)?, "d is a unit")?;
            require(h11.is_exact_zero(), "h11 = 0")?;
            require(in_p(h21 + div(c0 * x1, c1)?, 1)?, "h21 in -c x1 / d + P")?;
            require(in_p(h12 + div(c0 * c0 * x1, c1)?, 1)?, "h12 in -c^2 x1 / d + P")?;
            require(in_p(x, 1)?, "x in P")?;
        }
        ProofCase::BiquadraticT0 => {
            let (x0, x2) = (params.units[0], params.units[1]);
            require(in_p(x0, 0)? && in_p(x2, 0)?, "x0, x2 integral")?;
            let n = x0 * x0 + x0 * x2 * c1 - x2 * x2 * c0;
            let s = x0 + x2 * c1;
            require(is_unit(n)?, "x0^2 + x0 x2 b - x2^2 a is a unit")?;
            require(is_unit(s)?, "x0 + x2 b is a unit")?;
            require(h12.is_exact_zero(), "h12 = 0")?;
            require(in_p(h21 - x2 * cx.pi(2), 3)?, "h21 in (x2 + P) p^2")?;
            require(in_p(h22 - s, 1)?, "h22 in x0 + x2 b + P")?;
            require(in_p(h11 - div(n, s)?, 1)?, "h11 in N / (x0 + x2 b) + P")?;
            require(in_p(x, 2)?, "x in P^2")?;
        }
        ProofCase::BiquadraticT1 => {
            let (x2, v) = (params.units[0], params.units[1]);
            require(is_unit(x2)? && is_unit(v)?, "x2, v are units")?;
            require(h12.is_exact_zero(), "h12 = 0")?;
            require(in_p(h21 - x2 * cx.pi(1), 2)?, "h21 in (x2 + P) p")?;
            require(in_p(h22 - v, 1)?, "h22 in v + P")?;
            require(in_p(h11 + div(x2 * x2 * c0, v)?, 1)?, "h11 in -x2^2 a / v + P")?;
            require(in_p(x, 2)?, "x in P^2")?;
        }
        ProofCase::BiquadraticT2 => {
            let x2 = params.units[0];
            require(is_unit(x2)?, "x2 is a unit")?;
            require(h11.is_exact_zero(), "h11 = 0")?;
            require(in_p(h21 - x2, 1)?, "h21 in x2 + P")?;
            require(in_p(h12 - x2 * c0, 1)?, "h12 in x2 a + P")?;
            require(in_p(x, 2)?, "x in P^2")?;
        }
    }
    Ok(())
}

fn rand_int<R: Rng>(cx: &Ctx, rng: &mut R, lo: i32) -> PAdicNum {
    let m = crate::arith::padic::ppow(cx.p, cx.prec);
    PAdicNum::from_parts(cx.p, lo, rng.gen_range(0..m), cx.prec)
}

fn rand_unit<R: Rng>(cx: &Ctx, rng: &mut R) -> PAdicNum {
    loop {
        let x = rand_int(cx, rng, 0);
        if x.valuation() == Some(0) {
            return x;
        }
    }
}

/// Draws random parameters satisfying the constraints of `case`.
pub fn sample_params<R: Rng>(fam: &Family, case: ProofCase, rng: &mut R) -> Result<ProofParams> {
    let cx = Ctx::new(fam, case)?;
    let (c0, c1) = (cx.c0, cx.c1);
    let zero = PAdicNum::zero(cx.p);
    let params = match case {
        ProofCase::MiddleT0 => loop {
            let (x0, x1) = (rand_int(&cx, rng, 0), rand_int(&cx, rng, 0));
            let n = x0 * x0 * c0 + x0 * x1 * c1 - x1 * x1;
            let s = x0 * c0 + x1 * c1;
            if !(is_unit(n)? && is_unit(s)?) {
                continue;
            }
            let h21 = (x1 + rand_int(&cx, rng, 1)) * cx.pi(1);
            let h22 = s + rand_int(&cx, rng, 1);
            let h11 = div(n * c0, s)? + rand_int(&cx, rng, 1);
            break ProofParams { h: [h11, zero, h21, h22], x: rand_int(&cx, rng, 1), units: vec![x0, x1] };
        },
        ProofCase::MiddleT1 => {
            if !is_unit(c1)? {
                return Err(Error::InvalidParameter("middle T1 needs d to be a unit".into()));
            }
            let x1 = rand_unit(&cx, rng);
            let h21 = -div(c0 * x1, c1)? + rand_int(&cx, rng, 1);
            let h12 = -div(c0 * c0 * x1, c1)? + rand_int(&cx, rng, 1);
            let h22 = rand_int(&cx, rng, 0);
            ProofParams { h: [zero, h12, h21, h22], x: rand_int(&cx, rng, 1), units: vec![x1] }
        }
        ProofCase::BiquadraticT0 => loop {
            let (x0, x2) = (rand_int(&cx, rng, 0), rand_int(&cx, rng, 0));
            let n = x0 * x0 + x0 * x2 * c1 - x2 * x2 * c0;
            let s = x0 + x2 * c1;
            if !(is_unit(n)? && is_unit(s)?) {
                continue;
            }
            let h21 = (x2 + rand_int(&cx, rng, 1)) * cx.pi(2);
            let h22 = s + rand_int(&cx, rng, 1);
            let h11 = div(n, s)? + rand_int(&cx, rng, 1);
            break ProofParams { h: [h11, zero, h21, h22], x: rand_int(&cx, rng, 2), units: vec![x0, x2] };
        },
        ProofCase::BiquadraticT1 => {
            let (x2, v) = (rand_unit(&cx, rng), rand_unit(&cx, rng));
            let h21 = (x2 + rand_int(&cx, rng, 1)) * cx.pi(1);
            let h22 = v + rand_int(&cx, rng, 1);
            let h11 = -div(x2 * x2 * c0, v)? + rand_int(&cx, rng, 1);
            ProofParams { h: [h11, zero, h21, h22], x: rand_int(&cx, rng, 2), units: vec![x2, v] }
        }
        ProofCase::BiquadraticT2 => {
            let x2 = rand_unit(&cx, rng);
            let h21 = x2 + rand_int(&cx, rng, 1);
            let h12 = x2 * c0 + rand_int(&cx, rng, 1);
            let h22 = rand_int(&cx, rng, 0);
            ProofParams { h: [zero, h12, h21, h22], x: rand_int(&cx, rng, 2), units: vec![x2] }
        }
    };
    Ok(params)
}

/// The closed-form pieces of one decomposition.
#[derive(Clone, Debug)]
pub struct ProofDecomposition {
    /// The Shalika point `α`.
    pub alpha: Mat4,
    /// `u ∈ N(4, F)`.
    pub u: Mat4,
    /// `Y ∈ 𝐉`.
    pub y: Mat4,
    /// `z ∈ U¹`.
    pub z: Mat4,
    /// Stated value of `ψ₄(u)`.
    pub stated_psi4: Root,
    /// Stated value of `ψ_β(z)`.
    pub stated_psi_beta: Root,
}

/// Builds `u`, `Y`, `z` and the stated character values from the closed-form
/// entry lists. The parameters are validated first.
pub fn build_decomposition(fam: &Family, case: ProofCase, params: &ProofParams) -> Result<ProofDecomposition> {
    validate_params(fam, case, params)?;
    let cx = Ctx::new(fam, case)?;
    let p = cx.p;
    let [h11, h12, h21, h22] = params.h;
    let x = params.x;
    let (c0, c1) = (cx.c0, cx.c1);
    let w = cx.pi(1);
    let w2 = cx.pi(2);
    let ident = cx.ident();
    let mut u = ident;
    let mut z = ident;
    let mut stated_psi4 = Root::one();
    let mut stated_psi_beta = Root::one();
    // σ_f (middle) or σ (biquadratic) is the family generator.
    let sig = fam.generator;
    let y = match case {
        ProofCase::MiddleT0 => {
            let (c, d) = (c0, c1);
            let (x0, x1) = (params.units[0], params.units[1]);
            let n = x0 * x0 * c + x0 * x1 * d - x1 * x1;
            let s = x0 * c + x1 * d;
            let t = div(-(x1 * c), h22 * w)?;
            u[(0, 2)] = t;
            u[(1, 3)] = t;
            let z11 = div(h21 * x1 * c * (s - h22) + h11 * h22 * s * w, h22 * c * n * w)?;
            z[(0, 0)] = z11;
            z[(1, 1)] = z11;
            z[(0, 1)] = div(h11 * x * x1 * (s - h22), h22 * n * w)?;
            let z13 = div(x1 * (s - h22), n * w)?;
            z[(0, 2)] = z13;
            z[(1, 3)] = z13;
            let z31 = div(h21 * c * (h22 * x0 - x1 * x1) - h11 * h22 * x1 * w, h22 * c * n)?;
            z[(2, 0)] = z31;
            z[(3, 1)] = z31;
            z[(2, 1)] = div(h11 * x * (h22 * x0 - x1 * x1), h22 * n)?;
            let z33 = div(h22 * x0 - x1 * x1, n)?;
            z[(2, 2)] = z33;
            z[(3, 3)] = z33;
            ident.scale(&(x0 * c)).add(&sig.scale(&x1))
        }
        ProofCase::MiddleT1 => {
            let (c, d) = (c0, c1);
            let x1 = params.units[0];
            let cd2 = c + d * d;
            let t = div(-(c * (h21 * d + x1 * cd2)), h21 * d * d * w)?;
            u[(0, 2)] = t;
            u[(1, 3)] = t;
            let q = h21 * d + x1 * c;
            let z11 = div(-(h21 * d), x1 * c)?;
            z[(0, 0)] = z11;
            z[(1, 1)] = z11;
            let z13 = div(-(h22 * d), x1 * c)?;
            z[(0, 2)] = z13;
            z[(1, 3)] = z13;
            z[(0, 3)] = div(-(h12 * x * d), x1 * c * w2)?;
            let z31 = div(-(cd2 * q * w), x1 * c * c * d)?;
            z[(2, 0)] = z31;
            z[(3, 1)] = z31;
            z[(2, 3)] = div(-(h12 * x * cd2 * q), h21 * x1 * c * c * d * w)?;
            let z33 = div(-(h12 * h21 * d * d + h22 * cd2 * q * w), h21 * x1 * c * c * d)?;
            z[(2, 2)] = z33;
            z[(3, 3)] = z33;
            let unit = ident.scale(&(-div(cd2, d)?)).add(&sig).scale(&x1);
            fam.beta.mul(&fam.beta).mul(&unit)
        }
        ProofCase::BiquadraticT0 => {
            let (a, b) = (c0, c1);
            let (x0, x2) = (params.units[0], params.units[1]);
            let n = x0 * x0 + x0 * x2 * b - x2 * x2 * a;
            let s = x0 + x2 * b;
            let w4 = cx.pi(4);
            let den = n * (h22 * x0 * w2 - h21 * x2 * a);
            let t = div(h11 * x2 * a, h21 * x2 * a - h22 * x0 * w2)?;
            u[(0, 2)] = t;
            u[(1, 3)] = t;
            let z11 = div(h11 * h22 * x0 * s * w4 + h21 * x2 * a * (h21 * x2 * a - h22 * x0 * w2), den * w2)?;
            z[(0, 0)] = z11;
            z[(1, 1)] = z11;
            let m = h21 * x2 * a + h11 * s * w2 - h22 * x0 * w2;
            z[(0, 1)] = div(h11 * x * x2 * a * m, den * w2)?;
            let z13 = div(h22 * x2 * a * m, den * w2)?;
            z[(0, 2)] = z13;
            z[(1, 3)] = z13;
            let z31 = div(x0 * (h21 * h22 * x0 * w2 - h21 * h21 * a * x2 - h11 * h22 * x2 * w4), den)?;
            z[(2, 0)] = z31;
            z[(3, 1)] = z31;
            let k = h22 * x0 * x0 * w2 - x2 * a * (h21 * x0 + h11 * x2 * w2);
            z[(2, 1)] = div(h11 * x * k, den)?;
            let z33 = div(h22 * k, den)?;
            z[(2, 2)] = z33;
            z[(3, 3)] = z33;
            let s2 = sig.mul(&sig);
            ident.scale(&x0).add(&s2.scale(&x2))
        }
        ProofCase::BiquadraticT1 => {
            let (a, b) = (c0, c1);
            let x2 = params.units[0];
            let w3 = cx.pi(3);
            let w4 = cx.pi(4);
            let q = h11 + x2 * b * w;
            u[(0, 1)] = div(-(x * q), h21 * w2)?;
            let t = div(q, h21 * w2)?;
            u[(0, 2)] = t;
            u[(1, 3)] = t;
            u[(0, 3)] = div(-(x * b * q), h21 * w4)?;
            u[(2, 3)] = div(x * (q - h21 * b), h21 * w2)?;
            let z11 = div(h21, x2 * w)?;
            z[(0, 0)] = z11;
            z[(1, 1)] = z11;
            z[(0, 1)] = div(x * b * (h21 - x2 * w), x2 * w3)?;
            let z13 = div(h22, x2 * w)?;
            z[(0, 2)] = z13;
            z[(1, 3)] = z13;
            z[(0, 3)] = div(h22 * x * (h21 * b - q), h21 * x2 * w3)?;
            let z31 = div(b * (h21 - x2 * w) * w, x2 * a)?;
            z[(2, 0)] = z31;
            z[(3, 1)] = z31;
            z[(2, 1)] = div(x * b * b * (h21 - x2 * w), x2 * a * w)?;
            z[(2, 3)] = div(h22 * x * b * (h21 * b - q), h21 * x2 * a * w)?;
            let z33 = div(h22 * (h21 * b - q) * w, h21 * x2 * a)?;
            z[(2, 2)] = z33;
            z[(3, 3)] = z33;
            let phase = psi_f(&(b * x * cx.pi(-2)))?;
            stated_psi_beta = phase;
            stated_psi4 = phase.inv();
            let s2 = sig.mul(&sig);
            ident.scale(&(-b)).add(&s2).scale(&div(x2, w)?)
        }
        ProofCase::BiquadraticT2 => {
            let (a, b) = (c0, c1);
            let x2 = params.units[0];
            let w4 = cx.pi(4);
            let t = div(x2 * b, h21 * w2)?;
            u[(0, 2)] = t;
            u[(1, 3)] = t;
            let z11 = div(h21, x2)?;
            z[(0, 0)] = z11;
            z[(1, 1)] = z11;
            let z13 = div(h22, x2)?;
            z[(0, 2)] = z13;
            z[(1, 3)] = z13;
            z[(0, 3)] = div(h12 * x, x2 * w4)?;
            let z31 = div(b * (h21 - x2) * w2, x2 * a)?;
            z[(2, 0)] = z31;
            z[(3, 1)] = z31;
            z[(2, 3)] = div(h12 * x * b * (h21 - x2), x2 * a * h21 * w2)?;
            let z33 = div(h12 * h21 + h22 * b * (h21 - x2) * w2, h21 * x2 * a)?;
            z[(2, 2)] = z33;
            z[(3, 3)] = z33;
            let s2 = sig.mul(&sig);
            ident.scale(&(-b)).add(&s2).scale(&div(x2, w2)?)
        }
    };
    let h = Mat2::from_rows(p, [[h11, h12], [h21, h22]]);
    let alpha = shalika_embed(case.r(), &h, &x);
    Ok(ProofDecomposition { alpha, u, y, z, stated_psi4, stated_psi_beta })
}

/// Runs every check of one decomposition.
pub fn check_proof_decomposition(fam: &Family, case: ProofCase, params: &ProofParams) -> Result<ProofCheck> {
    let dec = build_decomposition(fam, case, params)?;
    let prod = dec.u.mul(&dec.y).mul(&dec.z);
    let diff = prod.sub(&dec.alpha);
    let identity = (0..4).all(|i| (0..4).all(|j| diff[(i, j)].is_zero() && diff[(i, j)].abs_prec() >= CERTIFIED_DIGITS));
    let z_in_u1 = fam.in_u1(&dec.z)?;
    let psi4_ok = psi4(&dec.u)? == dec.stated_psi4;
    let psi_beta_ok = z_in_u1 && fam.psi_beta(&dec.z)? == dec.stated_psi_beta;
    let whittaker = if identity && z_in_u1 {
        let expected = dec.stated_psi4.mul(&bessel_value(fam, &dec.y)?).mul(&dec.stated_psi_beta);
        whittaker_root(fam, &dec.alpha, None)? == Some(expected)
    } else {
        false
    };
    Ok(ProofCheck { identity, z_in_u1, psi4: psi4_ok, psi_beta: psi_beta_ok, whittaker })
}

/// True when the closed-form decomposition of `case` holds at `params`.
pub fn verify_proof_decomposition(fam: &Family, case: ProofCase, params: &ProofParams) -> Result<bool> {
    Ok(check_proof_decomposition(fam, case, params)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::family::FamilySpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn middle() -> std::sync::Arc<Family> {
        Family::new(&FamilySpec {
            p: 2,
            params: FamilyParams::Middle { c: 1, d: 1, chi: 0, zeta: Root::one() },
            twist: None,
        })
        .unwrap()
    }

    fn biquadratic() -> std::sync::Arc<Family> {
        Family::new(&FamilySpec {
            p: 3,
            params: FamilyParams::Biquadratic { a: 1, b: 1, chi: 0, zeta: Root::one() },
            twist: None,
        })
        .unwrap()
    }

    #[test]
    fn identity_point_middle_t0() {
        let f = middle();
        let one = PAdicNum::one(2, f.prec);
        let zero = PAdicNum::zero(2);
        let params = ProofParams { h: [one, zero, zero, one], x: zero, units: vec![one, zero] };
        let dec = build_decomposition(&f, ProofCase::MiddleT0, &params).unwrap();
        assert!(dec.z.eq_at_prec(&Mat4::identity(2, f.prec)));
        assert!(verify_proof_decomposition(&f, ProofCase::MiddleT0, &params).unwrap());
    }

    #[test]
    fn random_draws_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (f, cases) in [
            (middle(), &ProofCase::ALL[..2]),
            (biquadratic(), &ProofCase::ALL[2..]),
        ] {
            for &case in cases {
                for _ in 0..20 {
                    let params = sample_params(&f, case, &mut rng).unwrap();
                    let chk = check_proof_decomposition(&f, case, &params).unwrap();
                    assert!(chk.holds(), "{case:?}: {chk:?}");
                }
            }
        }
    }

    #[test]
    fn constraint_violation_is_an_error() {
        let f = middle();
        let one = PAdicNum::one(2, f.prec);
        let zero = PAdicNum::zero(2);
        let params = ProofParams { h: [one, zero, zero, one], x: one, units: vec![one, zero] };
        assert!(matches!(
            verify_proof_decomposition(&f, ProofCase::MiddleT0, &params),
            Err(Error::InvalidParameter(_))
        ));
        assert!(build_decomposition(&f, ProofCase::BiquadraticT0, &params).is_err());
    }
}
