//! Central characters, twisting, and the pole / Shalika model / transfer
//! verdict with its comparison against the closed-form criteria.
//!
//! A pole of `L(s, π, ∧²)` at `s₀` needs `ω ν^{2s₀} ≡ 1`, so with a
//! nontrivial central character there is no pole at `s = 0`. With `ω`
//! trivial, the pole at `s = 0` exists exactly when `Λ₀` does not vanish on
//! the translated Whittaker function, and this is equivalent to a nonzero
//! Shalika model and to being a transfer from `SO(5)`.

use crate::arith::cyclo::Root;
use crate::arith::padic::PAdicNum;
use crate::arith::psi::teichmuller;
use crate::arith::tame::TameChar;
use crate::error::{Error, Result};
use crate::lattice::mat::Mat4;
use crate::shalika::period::{period_escalating, IntegralConfig, IntegralReport};
use crate::strata::family::{Family, FamilyKind, FamilyParams, FamilySpec};
use crate::strata::whittaker::bessel_value;
use serde::{Deserialize, Serialize};

/// A tame character of `F^×`: exponent on `F_p^×` and value at `ϖ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralCharacter {
    /// Exponent of the restriction to Teichmüller units, relative to the
    /// fixed generator of `F_p^×`.
    pub mu: u64,
    /// `ω(ϖ)`.
    pub at_pi: Root,
}

impl CentralCharacter {
    /// True when both components are trivial.
    pub fn is_trivial(&self) -> bool {
        self.mu == 0 && self.at_pi.is_one()
    }
}

/// The exponent `s` with `r = ζ_n^s`, when `r^n = 1`.
fn exponent_in(r: Root, n: u64) -> Result<u64> {
    if n % r.order() != 0 {
        return Err(Error::Invariant(format!("{r} is not an {n}-th root of unity")));
    }
    Ok(r.num() * (n / r.order()))
}

/// `ω(t)` for `t ∈ F^×`: `Λ(t I₄) · η(t)⁴`.
pub fn central_value(fam: &Family, t: &PAdicNum) -> Result<Root> {
    let eta = fam.spec.twist_char()?;
    let scalar = Mat4::identity(fam.p, fam.prec).scale(t);
    Ok(bessel_value(fam, &scalar)?.mul(&eta.eval(t)?.pow(4)))
}

/// The central character of the (possibly twisted) family, read off `Λ` on
/// the scalars `T(g)` and `ϖ`.
pub fn central_character(fam: &Family) -> Result<CentralCharacter> {
    let p = fam.p;
    let g = crate::arith::ff::FiniteField::prime(p)?.generator().coeffs[0];
    let tg = teichmuller(p, g, fam.prec)?;
    let on_g = central_value(fam, &tg)?;
    let at_pi = central_value(fam, &PAdicNum::uniformizer_pow(p, 1, fam.prec))?;
    Ok(CentralCharacter { mu: exponent_in(on_g, p as u64 - 1)?, at_pi })
}

/// `η(−v ϖ)` for the simple family, with `v` the Teichmüller lift of its residue.
pub fn eta_minus_v_pi(fam: &Family) -> Result<Root> {
    let FamilyParams::Simple { v, .. } = fam.spec.params else {
        return Err(Error::InvalidParameter("η(−vϖ) is defined for the simple family".into()));
    };
    let eta = fam.spec.twist_char()?;
    let p = fam.p as i64;
    let mv = teichmuller(fam.p, (-v).rem_euclid(p) as u32, fam.prec)?;
    eta.eval(&mv.shift(1))
}

/// The closed-form criterion: trivial central character, and for the simple
/// family additionally `ζ = ±η(−vϖ)`.
pub fn theorem_criterion(fam: &Family) -> Result<bool> {
    let central = central_character(fam)?.is_trivial();
    Ok(match fam.kind() {
        FamilyKind::Simple => central && simple_sign_condition(fam)?,
        _ => central,
    })
}

/// `ζ = η(−vϖ)` or `ζ = −η(−vϖ)`.
pub fn simple_sign_condition(fam: &Family) -> Result<bool> {
    let e = eta_minus_v_pi(fam)?;
    let z = fam.zeta;
    Ok(z == e || z == e.mul(&Root::minus_one()))
}

/// The untwisted family carrying `Λ ⊗ (η ∘ det)` on `𝐉`:
/// `χ′(ē) = χ(ē) η_μ(N ē)^{4/f}` and `ζ′ = ζ η(det β)`.
pub fn twist_reparametrize(spec: &FamilySpec) -> Result<FamilySpec> {
    let Some(_) = spec.twist else { return Ok(spec.clone()) };
    let eta: TameChar = spec.twist_char()?;
    let base = Family::new(&spec.untwisted())?;
    let field = &base.field;
    let q = field.size() as u64;
    let e = 4 / base.residue_degree as i64;
    let g = field.generator();
    let norm = field.norm_to_prime(&g)?;
    let shift = eta.on_residue(norm)?.pow(e);
    let chi_g = base.chi.eval(&g)?.mul(&shift);
    let chi_new = exponent_in(chi_g, q - 1)?;
    let zeta_new = spec.zeta().mul(&eta.eval(&base.beta.det())?);
    let params = match spec.params {
        FamilyParams::Simple { v, .. } => FamilyParams::Simple { v, phi: chi_new, zeta: zeta_new },
        FamilyParams::Middle { c, d, .. } => FamilyParams::Middle { c, d, chi: chi_new, zeta: zeta_new },
        FamilyParams::Biquadratic { a, b, .. } => FamilyParams::Biquadratic { a, b, chi: chi_new, zeta: zeta_new },
    };
    Ok(FamilySpec { p: spec.p, params, twist: None })
}

/// The verdict for one family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// The family and twist.
    pub family: FamilySpec,
    /// The central character.
    pub central: CentralCharacter,
    /// `ω ≡ 1`.
    pub central_trivial: bool,
    /// `Λ₀ ≠ 0`, exact.
    pub lambda0_nonzero: bool,
    /// For the simple family, `ζ = ±η(−vϖ)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_criterion: Option<bool>,
    /// Pole at `s = 0`, nonzero Shalika model, transfer from `SO(5)`.
    pub transfer: bool,
    /// The closed-form prediction.
    pub criterion: bool,
    /// `transfer == criterion`.
    pub criterion_match: bool,
    /// The period computation.
    pub report: IntegralReport,
}

/// Default escalation budget: the highest level tried by [`verdict`].
pub fn default_max_level(p: u32) -> u32 {
    if p == 2 {
        7
    } else {
        5
    }
}

/// Computes the central character, the stable `Λ₀`, and the verdict.
pub fn verdict(fam: &Family, cfg: &IntegralConfig, max_level: u32) -> Result<Verdict> {
    let central = central_character(fam)?;
    let central_trivial = central.is_trivial();
    let report = period_escalating(fam, cfg, 1, max_level)?;
    let lambda0_nonzero = report.nonzero;
    let transfer = central_trivial && lambda0_nonzero;
    let criterion = theorem_criterion(fam)?;
    let simple_criterion = match fam.kind() {
        FamilyKind::Simple => Some(simple_sign_condition(fam)?),
        _ => None,
    };
    Ok(Verdict {
        family: fam.spec.clone(),
        central,
        central_trivial,
        lambda0_nonzero,
        simple_criterion,
        transfer,
        criterion,
        criterion_match: transfer == criterion,
        report,
    })
}

/// The part of `L(s, π, ∧²)` detected by periods at `q^{s₀} = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LFactor {
    /// The signs `ε` with `Λ_{s₀} ≠ 0` at `q^{s₀} = ε`.
    pub signs: Vec<i32>,
    /// `Π (1 − ε q^{−s})^{−1}` as text, `"1"` for the empty product.
    pub formula: String,
    /// Stability of every period computation used.
    pub stable: bool,
}

/// The restricted exterior-square factor: `ε = +1` when `Λ₀ ≠ 0` and `ε = −1`
/// when the sign-twisted period is nonzero; empty when `ω` is nontrivial.
pub fn l_factor(fam: &Family, cfg: &IntegralConfig, max_level: u32) -> Result<LFactor> {
    if !central_character(fam)?.is_trivial() {
        return Ok(LFactor { signs: Vec::new(), formula: "1".into(), stable: true });
    }
    let mut signs = Vec::new();
    let mut stable = true;
    for sign in [1, -1] {
        let rep = period_escalating(fam, cfg, sign, max_level)?;
        stable &= rep.stable;
        if rep.nonzero {
            signs.push(sign);
        }
    }
    let formula = if signs.is_empty() {
        "1".to_string()
    } else {
        signs
            .iter()
            .map(|&e| if e > 0 { "(1 - q^-s)^-1".to_string() } else { "(1 + q^-s)^-1".to_string() })
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(LFactor { signs, formula, stable })
}
