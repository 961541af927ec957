//! Tamely ramified quasi-characters of `Q_p^×` with root-of-unity values.

use super::cyclo::Root;
use super::ff::{FiniteField, MultChar};
use super::padic::PAdicNum;
use crate::error::{Error, Result};
use std::sync::Arc;

/// A character of `Q_p^×` trivial on `1 + P`, given by a character `η_μ` of
/// `F_p^×` (read on Teichmüller units) and its value at `ϖ = p`.
#[derive(Clone, Debug)]
pub struct TameChar {
    mu: MultChar,
    at_pi: Root,
}

impl TameChar {
    /// The character with the given restriction to `F_p^×` and value at `p`.
    pub fn new(mu: MultChar, at_pi: Root) -> Result<Self> {
        if mu.field().degree() != 1 {
            return Err(Error::InvalidParameter("η_μ must be a character of F_p^×".into()));
        }
        Ok(TameChar { mu, at_pi })
    }

    /// The character `x ↦ ζ_{p-1}^{t·dlog(x̄)} · at_pi^{v(x)}` for the fixed generator of `F_p^×`.
    pub fn from_exponent(p: u32, t: u64, at_pi: Root) -> Result<Self> {
        Self::new(MultChar::new(FiniteField::prime(p)?, t), at_pi)
    }

    /// The trivial character.
    pub fn trivial(p: u32) -> Result<Self> {
        Self::from_exponent(p, 0, Root::one())
    }

    /// The prime.
    pub fn p(&self) -> u32 {
        self.mu.field().p()
    }

    /// The restriction to Teichmüller units.
    pub fn mu(&self) -> &MultChar {
        &self.mu
    }

    /// The prime field carrying `η_μ`.
    pub fn prime_field(&self) -> &Arc<FiniteField> {
        self.mu.field()
    }

    /// The value at `ϖ`.
    pub fn at_pi(&self) -> Root {
        self.at_pi
    }

    /// True when both components are trivial.
    pub fn is_trivial(&self) -> bool {
        self.mu.is_trivial() && self.at_pi.is_one()
    }

    /// `η_μ(r)` for a nonzero residue `r`.
    pub fn on_residue(&self, r: u32) -> Result<Root> {
        let f = self.mu.field();
        self.mu.eval(&f.constant(r))
    }

    /// `η(x) = η(ϖ)^{v(x)} · η_μ(x p^{-v(x)} mod p)`.
    pub fn eval(&self, x: &PAdicNum) -> Result<Root> {
        let v = x.valuation().ok_or_else(|| {
            Error::InvalidParameter("tame character evaluated at zero".into())
        })?;
        let r = x.shift(-v).residue()?;
        Ok(self.at_pi.pow(v as i64).mul(&self.on_residue(r)?))
    }

    /// Pointwise product.
    pub fn mul(&self, o: &TameChar) -> TameChar {
        TameChar { mu: self.mu.mul(&o.mu), at_pi: self.at_pi.mul(&o.at_pi) }
    }

    /// Integer power.
    pub fn pow(&self, e: i64) -> TameChar {
        let n = self.p() as i64 - 1;
        let t = (self.mu.exponent() as i64 * e).rem_euclid(n) as u64;
        TameChar { mu: MultChar::new(self.mu.field().clone(), t), at_pi: self.at_pi.pow(e) }
    }
}

/// `η(x)` for a nonzero `x`.
pub fn tame_eval(eta: &TameChar, x: &PAdicNum) -> Result<Root> {
    eta.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tame_examples() {
        let triv = TameChar::trivial(3).unwrap();
        assert!(triv.eval(&PAdicNum::from_int(3, 18, 6)).unwrap().is_one());
        let unr = TameChar::from_exponent(3, 0, Root::minus_one()).unwrap();
        assert!(unr.eval(&PAdicNum::from_int(3, 9, 6)).unwrap().is_one());
        let leg = TameChar::from_exponent(3, 1, Root::one()).unwrap();
        assert_eq!(leg.eval(&PAdicNum::from_int(3, 2, 6)).unwrap(), Root::minus_one());
        assert!(leg.eval(&PAdicNum::zero(3)).is_err());
    }
}
