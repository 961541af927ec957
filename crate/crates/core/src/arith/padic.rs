//! Truncated elements of Q_p with tracked relative precision.
//!
//! A nonzero value is `p^val * unit` where `unit` is a p-adic unit known modulo
//! `p^prec`. Two kinds of zero exist: the exact zero, and the inexact zero
//! `O(p^a)` produced by cancellation, which only says that the value lies in
//! `p^a Z_p`. Decisions that would need digits beyond the tracked precision
//! return [`Error::PrecisionExhausted`] instead of guessing.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

const EXACT_ZERO_VAL: i32 = i32::MAX;

/// Largest relative precision `N` supported for the prime `p`, i.e. the largest
/// `N` with `p^N < 2^62`.
pub fn max_precision(p: u32) -> u32 {
    let mut n = 0u32;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        n += 1;
    }
    n
}

#[inline]
pub(crate) fn ppow(p: u32, e: u32) -> u64 {
    if p == 2 {
        1u64 << e
    } else {
        (p as u64).pow(e)
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64, p: u32) -> u64 {
    if p == 2 {
        a.wrapping_mul(b) & (m - 1)
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

/// Inverse of a unit `a` modulo `m` (requires `gcd(a, m) = 1`).
fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inv_mod called on a non-unit");
    old_s.rem_euclid(m as i128) as u64
}

/// Splits `n != 0` as `p^v * u` with `p` not dividing `u`.
#[inline]
fn strip(p: u32, mut n: u64) -> (u32, u64) {
    if p == 2 {
        let t = n.trailing_zeros();
        return (t, n >> t);
    }
    let mut t = 0;
    let pp = p as u64;
    while n % pp == 0 {
        n /= pp;
        t += 1;
    }
    (t, n)
}

/// A truncated p-adic number.
#[derive(Clone, Copy)]
pub struct PAdicNum {
    p: u32,
    val: i32,
    unit: u64,
    prec: u32,
}

impl PAdicNum {
    /// The exact zero of Q_p.
    pub fn zero(p: u32) -> Self {
        PAdicNum { p, val: EXACT_ZERO_VAL, unit: 0, prec: 0 }
    }

    /// The inexact zero `O(p^abs)`.
    pub fn inexact_zero(p: u32, abs: i32) -> Self {
        PAdicNum { p, val: abs, unit: 0, prec: 0 }
    }

    /// The number one at relative precision `prec`.
    pub fn one(p: u32, prec: u32) -> Self {
        Self::from_parts(p, 0, 1, prec)
    }

    /// `p^k` at relative precision `prec`.
    pub fn uniformizer_pow(p: u32, k: i32, prec: u32) -> Self {
        Self::from_parts(p, k, 1, prec)
    }

    /// Builds `p^val * unit` and normalizes `unit` modulo `p^prec`.
    /// A `unit` divisible by `p` is folded into the valuation.
    pub fn from_parts(p: u32, val: i32, unit: u64, prec: u32) -> Self {
        assert!(prec >= 1 && prec <= max_precision(p), "precision {prec} out of range for p = {p}");
        let m = ppow(p, prec);
        let u = unit % m;
        if u == 0 {
            return Self::inexact_zero(p, val + prec as i32);
        }
        let (t, u) = strip(p, u);
        PAdicNum { p, val: val + t as i32, unit: u, prec: prec - t }
    }

    /// The integer `n` as an element of Q_p at relative precision `prec`.
    /// The integer zero is the exact zero.
    pub fn from_int(p: u32, n: i64, prec: u32) -> Self {
        if n == 0 {
            return Self::zero(p);
        }
        let (t, u) = strip(p, n.unsigned_abs());
        let m = ppow(p, prec);
        let mut u = u % m;
        if n < 0 {
            u = m - u;
        }
        PAdicNum { p, val: t as i32, unit: u, prec }
    }

    /// The rational `num / den` at relative precision `prec`.
    pub fn from_ratio(p: u32, num: i64, den: i64, prec: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::from_int(p, num, prec).checked_div(&Self::from_int(p, den, prec))
    }

    /// The prime of the field.
    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// True for the exact zero and for inexact zeros.
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    /// True only for the exact zero.
    #[inline]
    pub fn is_exact_zero(&self) -> bool {
        self.val == EXACT_ZERO_VAL
    }

    /// Valuation of a nonzero value; `None` for any zero.
    #[inline]
    pub fn valuation(&self) -> Option<i32> {
        if self.unit == 0 {
            None
        } else {
            Some(self.val)
        }
    }

    /// A guaranteed lower bound for the valuation (`i32::MAX` for the exact zero).
    #[inline]
    pub fn val_bound(&self) -> i32 {
        self.val
    }

    /// Absolute precision: the value is known modulo `p^abs_prec`.
    #[inline]
    pub fn abs_prec(&self) -> i32 {
        if self.is_exact_zero() {
            EXACT_ZERO_VAL
        } else {
            self.val + self.prec as i32
        }
    }

    /// Relative precision (0 for zeros).
    #[inline]
    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    /// Unit mantissa in `[1, p^prec)` (0 for zeros).
    #[inline]
    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// Multiplies by `p^k`.
    #[inline]
    pub fn shift(&self, k: i32) -> Self {
        if self.is_exact_zero() {
            *self
        } else {
            PAdicNum { val: self.val + k, ..*self }
        }
    }

    /// Truncates the relative precision to at most `prec`.
    pub fn truncate(&self, prec: u32) -> Self {
        if self.unit == 0 || prec >= self.prec {
            return *self;
        }
        Self::from_parts(self.p, self.val, self.unit, prec)
    }

    /// Decides `v(self) >= k`.
    pub fn val_at_least(&self, k: i32) -> Result<bool> {
        if self.unit != 0 {
            return Ok(self.val >= k);
        }
        if self.val >= k {
            Ok(true)
        } else {
            Err(Error::PrecisionExhausted(format!(
                "zero known only modulo p^{} but valuation >= {} was asked",
                self.val, k
            )))
        }
    }

    /// The base-p digit of `p^level` in the expansion of the value.
    pub fn digit_at(&self, level: i32) -> Result<u32> {
        if level < self.val {
            return Ok(0);
        }
        if self.unit == 0 || level >= self.abs_prec() {
            return Err(Error::PrecisionExhausted(format!("digit at p^{level} is not tracked")));
        }
        let shift = (level - self.val) as u32;
        Ok(((self.unit / ppow(self.p, shift)) % self.p as u64) as u32)
    }

    /// The class of an element of Z_p modulo `p^k`, as an integer in `[0, p^k)`.
    pub fn to_int_mod(&self, k: u32) -> Result<u64> {
        if self.is_exact_zero() || k == 0 {
            return Ok(0);
        }
        if self.val < 0 && self.unit != 0 {
            return Err(Error::InvalidParameter("element is not integral".into()));
        }
        if self.abs_prec() < k as i32 {
            return Err(Error::PrecisionExhausted(format!("class modulo p^{k} is not tracked")));
        }
        if self.unit == 0 || self.val >= k as i32 {
            return Ok(0);
        }
        let v = self.val as u32;
        let m = ppow(self.p, k - v);
        Ok((self.unit % m) * ppow(self.p, v))
    }

    /// The residue modulo p of an element of Z_p.
    pub fn residue(&self) -> Result<u32> {
        self.to_int_mod(1).map(|r| r as u32)
    }

    /// The fractional part of the value as a reduced fraction `num / p^e`
    /// representing the class in `Q_p / Z_p`.
    pub fn frac_part(&self) -> Result<(u64, u64)> {
        if self.unit == 0 || self.val >= 0 {
            if self.unit == 0 && self.val < 0 {
                return Err(Error::PrecisionExhausted(
                    "fractional part of an inexact zero below Z_p".into(),
                ));
            }
            return Ok((0, 1));
        }
        let e = (-self.val) as u32;
        if self.prec < e {
            return Err(Error::PrecisionExhausted("fractional part needs more digits".into()));
        }
        let den = ppow(self.p, e);
        Ok((self.unit % den, den))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.unit == 0 {
            return Err(Error::DivisionByZero);
        }
        let m = ppow(self.p, self.prec);
        Ok(PAdicNum { p: self.p, val: -self.val, unit: inv_mod(self.unit, m), prec: self.prec })
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { *self };
        let mut e = e.unsigned_abs();
        if base.unit == 0 {
            if e == 0 {
                return Ok(Self::one(self.p, max_precision(self.p)));
            }
            if base.is_exact_zero() {
                return Ok(base);
            }
            return Ok(Self::inexact_zero(self.p, base.val.saturating_mul(e as i32)));
        }
        let mut acc = Self::one(self.p, base.prec);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        Ok(acc)
    }

    fn check_p(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            Err(Error::PrimeMismatch(self.p, o.p))
        } else {
            Ok(())
        }
    }

    fn floor_check(r: Self, floor: u32) -> Result<Self> {
        if r.unit != 0 && r.prec < floor {
            Err(Error::PrecisionExhausted(format!(
                "result carries {} digits, below the floor {}",
                r.prec, floor
            )))
        } else {
            Ok(r)
        }
    }

    /// Addition rejecting nonzero results whose relative precision drops below `floor`.
    pub fn checked_add(&self, o: &Self, floor: u32) -> Result<Self> {
        self.check_p(o)?;
        Self::floor_check(*self + *o, floor)
    }

    /// Subtraction with the same floor rule as [`checked_add`](Self::checked_add).
    pub fn checked_sub(&self, o: &Self, floor: u32) -> Result<Self> {
        self.check_p(o)?;
        Self::floor_check(*self - *o, floor)
    }

    /// Multiplication with the same floor rule as [`checked_add`](Self::checked_add).
    pub fn checked_mul(&self, o: &Self, floor: u32) -> Result<Self> {
        self.check_p(o)?;
        Self::floor_check(*self * *o, floor)
    }

    /// Division; fails on any zero divisor.
    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.check_p(o)?;
        Ok(*self * o.inv()?)
    }

    /// True when `self - o` is zero at the tracked precision.
    pub fn eq_at_prec(&self, o: &Self) -> bool {
        (*self - *o).is_zero()
    }
}

impl Add for PAdicNum {
    type Output = PAdicNum;
    #[inline]
    fn add(self, o: PAdicNum) -> PAdicNum {
        debug_assert_eq!(self.p, o.p);
        if self.is_exact_zero() {
            return o;
        }
        if o.is_exact_zero() {
            return self;
        }
        let abs = self.abs_prec().min(o.abs_prec());
        let (a, b) = if self.val <= o.val { (self, o) } else { (o, self) };
        let v = a.val;
        if abs <= v {
            return PAdicNum::inexact_zero(self.p, abs);
        }
        let rel = (abs - v) as u32;
        let p = self.p;
        let m = ppow(p, rel);
        let ua = a.unit % m;
        let ub = if b.unit == 0 {
            0
        } else {
            let sh = (b.val - v) as u32;
            if sh >= rel {
                0
            } else {
                (b.unit % ppow(p, rel - sh)) * ppow(p, sh)
            }
        };
        let mut s = ua + ub;
        if s >= m {
            s -= m;
        }
        if s == 0 {
            return PAdicNum::inexact_zero(p, abs);
        }
        let (t, u) = strip(p, s);
        PAdicNum { p, val: v + t as i32, unit: u, prec: rel - t }
    }
}

impl Neg for PAdicNum {
    type Output = PAdicNum;
    #[inline]
    fn neg(self) -> PAdicNum {
        if self.unit == 0 {
            return self;
        }
        let m = ppow(self.p, self.prec);
        PAdicNum { unit: m - self.unit, ..self }
    }
}

impl Sub for PAdicNum {
    type Output = PAdicNum;
    #[inline]
    fn sub(self, o: PAdicNum) -> PAdicNum {
        self + (-o)
    }
}

impl Mul for PAdicNum {
    type Output = PAdicNum;
    #[inline]
    fn mul(self, o: PAdicNum) -> PAdicNum {
        debug_assert_eq!(self.p, o.p);
        if self.is_exact_zero() || o.is_exact_zero() {
            return PAdicNum::zero(self.p);
        }
        if self.unit == 0 || o.unit == 0 {
            return PAdicNum::inexact_zero(self.p, self.val + o.val);
        }
        let prec = self.prec.min(o.prec);
        let m = ppow(self.p, prec);
        PAdicNum {
            p: self.p,
            val: self.val + o.val,
            unit: mulmod(self.unit % m, o.unit % m, m, self.p),
            prec,
        }
    }
}

impl PartialEq for PAdicNum {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.eq_at_prec(o)
    }
}

impl fmt::Debug for PAdicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PAdicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.unit == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{}^{}*{} (prec {})", self.p, self.val, self.unit, self.prec)
        }
    }
}
