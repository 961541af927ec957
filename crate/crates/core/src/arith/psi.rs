//! The additive character `ψ_F(x) = exp(2πi · frac_p(x/p))` of conductor `P`, and
//! Teichmüller representatives of residues.

use super::cyclo::{CycNum, Root};
use super::padic::{max_precision, PAdicNum};
use crate::error::{Error, Result};

/// `ψ_F(x)`, a root of unity of order `p^{max(0, 1 - v(x))}`.
pub fn psi_f(x: &PAdicNum) -> Result<Root> {
    let (num, den) = x.shift(-1).frac_part()?;
    Ok(Root::new(num as i64, den))
}

/// `ψ_F(x)` as an element of a cyclotomic field.
pub fn psi_f_cyc(x: &PAdicNum) -> Result<CycNum> {
    psi_f(x).map(CycNum::from_root)
}

/// The Teichmüller representative of a nonzero residue `r` modulo `p`, at
/// relative precision `prec`: the unique `(p-1)`-st root of unity congruent to
/// `r`, found by iterating `x ← x^p` until the value is fixed.
pub fn teichmuller(p: u32, r: u32, prec: u32) -> Result<PAdicNum> {
    if r % p == 0 {
        return Err(Error::InvalidParameter("Teichmüller lift of zero".into()));
    }
    if prec == 0 || prec > max_precision(p) {
        return Err(Error::InvalidParameter(format!("precision {prec} out of range")));
    }
    let mut x = PAdicNum::from_int(p, (r % p) as i64, prec);
    loop {
        let y = x.pow(p as i64)?;
        if y.eq_at_prec(&x) {
            return Ok(y);
        }
        x = y;
    }
}
