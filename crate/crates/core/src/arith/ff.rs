//! Finite fields `F_p[X]/(f)` of degree at most 4, with discrete logarithms and
//! multiplicative characters.
//!
//! Elements are encoded by the integer `Σ a_i p^i` of their coefficient vector in
//! the basis `1, X, …, X^{d-1}`. The fixed generator of the multiplicative group
//! is the primitive element with the smallest code.

use super::cyclo::Root;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// An element of a finite field, as a coefficient vector over Z/p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FFElem {
    /// The prime.
    pub p: u32,
    /// The degree of the ambient field over F_p.
    pub d: u32,
    /// Coefficients of `1, X, X^2, X^3` (entries beyond `d` are zero).
    pub coeffs: [u32; 4],
}

impl FFElem {
    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer code `Σ a_i p^i`.
    pub fn code(&self) -> u32 {
        let mut c = 0;
        for i in (0..self.d as usize).rev() {
            c = c * self.p + self.coeffs[i];
        }
        c
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.d as usize).map(|i| self.coeffs[i].to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The field `F_p[X]/(f)` with precomputed logarithm tables.
pub struct FiniteField {
    p: u32,
    d: u32,
    modulus: Vec<u32>,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.d, self.modulus)
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * d];
    for i in 0..d {
        for j in 0..d {
            prod[i + j] += a[i] as u64 * b[j] as u64;
        }
    }
    let pp = p as u64;
    for i in (d..2 * d).rev() {
        let c = prod[i] % pp;
        prod[i] = 0;
        if c != 0 {
            for j in 0..d {
                prod[i - d + j] += c * (pp - modulus[j] as u64);
            }
        }
    }
    (0..d).map(|i| (prod[i] % pp) as u32).collect()
}

/// True when the monic `divisor` divides `f` over F_p.
fn divides(f: &[u32], divisor: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dd = divisor.len() - 1;
    let pp = p as u64;
    for i in (dd..r.len()).rev() {
        let c = r[i] % pp;
        if c != 0 {
            for j in 0..=dd {
                r[i - dd + j] = (r[i - dd + j] + c * (pp - divisor[j] as u64)) % pp;
            }
        }
    }
    r.iter().take(dd).all(|&c| c % pp == 0)
}

/// Irreducibility of a monic polynomial of degree at most 4 over F_p, by trial
/// division with every monic polynomial of degree at most half the degree.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let d = modulus.len() - 1;
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut c = code;
            for coef in g.iter_mut().take(k) {
                *coef = (c % p as u64) as u32;
                c /= p as u64;
            }
            g[k] = 1;
            if divides(modulus, &g, p) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Arc<Self>> {
        Self::new(p, &[0, 1])
    }

    /// The field `F_p[X]/(f)` for a monic `f` given constant term first.
    pub fn new(p: u32, modulus: &[u32]) -> Result<Arc<Self>> {
        let d = modulus.len() as u32 - 1;
        if !(1..=4).contains(&d) {
            return Err(Error::InvalidParameter(format!("field degree {d} not in 1..=4")));
        }
        if modulus[d as usize] != 1 {
            return Err(Error::InvalidParameter("defining polynomial must be monic".into()));
        }
        let modulus: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter(format!(
                "defining polynomial {modulus:?} is reducible mod {p}"
            )));
        }
        let q = p.pow(d);
        let decode = |code: u32| -> Vec<u32> {
            let mut c = code;
            (0..d)
                .map(|_| {
                    let r = c % p;
                    c /= p;
                    r
                })
                .collect()
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let order = q - 1;
        let mut gen = None;
        'search: for code in 1..q {
            let g = decode(code);
            let one = encode(&{
                let mut o = vec![0u32; d as usize];
                o[0] = 1 % p;
                o
            });
            let mut x = g.clone();
            for k in 1..=order {
                if encode(&x) == one {
                    if k == order {
                        gen = Some(code);
                        break 'search;
                    }
                    continue 'search;
                }
                x = poly_mulmod(&x, &g, &modulus, p);
            }
        }
        let gen = gen.ok_or_else(|| Error::Invariant("no primitive element found".into()))?;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let g = decode(gen);
        let mut x = {
            let mut o = vec![0u32; d as usize];
            o[0] = 1;
            o
        };
        for k in 0..order {
            let c = encode(&x);
            exp[k as usize] = c;
            log[c as usize] = k;
            x = poly_mulmod(&x, &g, &modulus, p);
        }
        Ok(Arc::new(FiniteField { p, d, modulus, q, exp, log }))
    }

    /// The prime.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over F_p.
    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.q
    }

    /// The defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The element with coefficient vector `coeffs` (reduced mod p).
    pub fn elem(&self, coeffs: &[u32]) -> FFElem {
        let mut c = [0u32; 4];
        for (i, &a) in coeffs.iter().enumerate().take(self.d as usize) {
            c[i] = a % self.p;
        }
        FFElem { p: self.p, d: self.d, coeffs: c }
    }

    /// The element with the given code.
    pub fn from_code(&self, code: u32) -> FFElem {
        let mut c = [0u32; 4];
        let mut x = code;
        for coef in c.iter_mut().take(self.d as usize) {
            *coef = x % self.p;
            x /= self.p;
        }
        FFElem { p: self.p, d: self.d, coeffs: c }
    }

    /// The fixed generator of the multiplicative group.
    pub fn generator(&self) -> FFElem {
        self.from_code(self.exp[1 % self.exp.len()])
    }

    /// `g^k` for the fixed generator `g`.
    pub fn gen_pow(&self, k: u64) -> FFElem {
        self.from_code(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm relative to the fixed generator.
    pub fn dlog(&self, x: &FFElem) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::InvalidParameter("discrete log of zero".into()));
        }
        Ok(self.log[x.code() as usize])
    }

    /// Sum.
    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut c = [0u32; 4];
        for i in 0..self.d as usize {
            c[i] = (a.coeffs[i] + b.coeffs[i]) % self.p;
        }
        FFElem { coeffs: c, ..*a }
    }

    /// Product.
    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        if a.is_zero() || b.is_zero() {
            return self.from_code(0);
        }
        let la = self.log[a.code() as usize] as u64;
        let lb = self.log[b.code() as usize] as u64;
        self.gen_pow(la + lb)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &FFElem) -> Result<FFElem> {
        let la = self.dlog(a)? as u64;
        Ok(self.gen_pow(self.q as u64 - 1 - la))
    }

    /// Norm to the prime field, `x^{(q-1)/(p-1)}`, as a residue in F_p.
    pub fn norm_to_prime(&self, a: &FFElem) -> Result<u32> {
        let la = self.dlog(a)? as u64;
        let e = ((self.q - 1) / (self.p - 1)) as u64;
        Ok(self.gen_pow(la * e).coeffs[0])
    }

    /// The image of a residue `r ∈ F_p` as a constant.
    pub fn constant(&self, r: u32) -> FFElem {
        self.elem(&[r % self.p])
    }
}

/// A multiplicative character `g^k ↦ ζ_{q-1}^{t k}` of `F_q^×`.
#[derive(Clone)]
pub struct MultChar {
    field: Arc<FiniteField>,
    t: u64,
}

impl fmt::Debug for MultChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultChar(t = {} on {:?})", self.t, self.field)
    }
}

impl MultChar {
    /// The character with exponent `t` on the given field.
    pub fn new(field: Arc<FiniteField>, t: u64) -> Self {
        let n = field.size() as u64 - 1;
        MultChar { field, t: t % n }
    }

    /// The trivial character.
    pub fn trivial(field: Arc<FiniteField>) -> Self {
        Self::new(field, 0)
    }

    /// The exponent `t`.
    pub fn exponent(&self) -> u64 {
        self.t
    }

    /// The ambient field.
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// True for the trivial character.
    pub fn is_trivial(&self) -> bool {
        self.t == 0
    }

    /// The value on a nonzero element.
    pub fn eval(&self, x: &FFElem) -> Result<Root> {
        let l = self.field.dlog(x)? as u64;
        let n = self.field.size() as u64 - 1;
        Ok(Root::new(((self.t as u128 * l as u128) % n as u128) as i64, n))
    }

    /// Product of characters on the same field.
    pub fn mul(&self, o: &MultChar) -> MultChar {
        MultChar::new(self.field.clone(), self.t + o.t)
    }

    /// The restriction to `F_p^×`, as an exponent relative to the generator of
    /// the prime field.
    pub fn restriction_exponent(&self, prime: &FiniteField) -> Result<u64> {
        let g = prime.generator();
        let v = self.eval(&self.field.constant(g.coeffs[0]))?;
        let n = prime.size() as u64 - 1;
        // v = ζ_{p-1}^s for a unique s.
        if n % v.order() != 0 {
            return Err(Error::Invariant("restriction is not a character of F_p^×".into()));
        }
        Ok(v.num() * (n / v.order()))
    }
}

/// `χ(x)` for a nonzero `x`.
pub fn char_eval(chi: &MultChar, x: &FFElem) -> Result<Root> {
    chi.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_generator() {
        assert_eq!(FiniteField::prime(3).unwrap().generator().coeffs[0], 2);
        assert_eq!(FiniteField::prime(5).unwrap().generator().coeffs[0], 2);
        assert_eq!(FiniteField::prime(7).unwrap().generator().coeffs[0], 3);
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(FiniteField::new(2, &[1, 0, 1]).is_err());
        assert!(FiniteField::new(3, &[2, 0, 1]).is_err());
        // X^4 - X^2 - 1 = X^4 + 2X^2 + 2 is irreducible mod 3
        assert!(FiniteField::new(3, &[2, 0, 2, 0, 1]).is_ok());
        // X^4 + 1 = (X^2+X+2)(X^2+2X+2) mod 3
        assert!(FiniteField::new(3, &[1, 0, 0, 0, 1]).is_err());
    }

    #[test]
    fn f4_character_on_generator() {
        let f4 = FiniteField::new(2, &[1, 1, 1]).unwrap();
        let chi = MultChar::new(f4.clone(), 1);
        assert_eq!(chi.eval(&f4.generator()).unwrap(), Root::new(1, 3));
    }

    #[test]
    fn quadratic_character_on_f9_generator() {
        let f9 = FiniteField::new(3, &[1, 0, 1]).unwrap();
        let chi = MultChar::new(f9.clone(), 4);
        assert_eq!(chi.eval(&f9.generator()).unwrap(), Root::minus_one());
    }

    #[test]
    fn zero_has_no_character_value() {
        let f = FiniteField::prime(3).unwrap();
        assert!(MultChar::trivial(f.clone()).eval(&f.from_code(0)).is_err());
    }
}
