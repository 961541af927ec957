//! Roots of unity as elements of Q/Z and exact elements of cyclotomic fields.
//!
//! Every value taken by ψ_F, by a finite-field character, or by a root-of-unity
//! parameter is a [`Root`]. Sums of roots with rational weights are [`CycNum`]s,
//! i.e. `Σ a_k ζ_m^k` with `a_k ∈ Q`. Equality and the zero test reduce modulo the
//! m-th cyclotomic polynomial, so they are exact.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Upper bound on the conductor of any [`CycNum`].
pub const MAX_CONDUCTOR: u64 = 1 << 16;

/// A root of unity `exp(2πi · num/den)`, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    num: u64,
    den: u64,
}

impl Root {
    /// `exp(2πi · num/den)`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "root of unity with zero denominator");
        let n = num.rem_euclid(den as i64) as u64;
        let g = n.gcd(&den);
        if n == 0 {
            Root { num: 0, den: 1 }
        } else {
            Root { num: n / g, den: den / g }
        }
    }

    /// The root 1.
    pub fn one() -> Self {
        Root { num: 0, den: 1 }
    }

    /// The root -1.
    pub fn minus_one() -> Self {
        Root { num: 1, den: 2 }
    }

    /// Numerator of the reduced fraction.
    pub fn num(&self) -> u64 {
        self.num
    }

    /// Denominator of the reduced fraction, which is the multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    /// True for the root 1.
    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// Product of roots.
    pub fn mul(&self, o: &Root) -> Root {
        let l = self.den.lcm(&o.den);
        let a = (self.num as u128 * (l / self.den) as u128 + o.num as u128 * (l / o.den) as u128)
            % l as u128;
        Root::new(a as i64, l)
    }

    /// Inverse root.
    pub fn inv(&self) -> Root {
        Root::new(-(self.num as i64), self.den)
    }

    /// Integer power.
    pub fn pow(&self, e: i64) -> Root {
        let a = (self.num as i128 * e as i128).rem_euclid(self.den as i128);
        Root::new(a as i64, self.den)
    }

    /// Floating approximation `(re, im)`.
    pub fn approx(&self) -> (f64, f64) {
        let t = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        (t.cos(), t.sin())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "1")
        } else {
            write!(f, "e(2πi·{}/{})", self.num, self.den)
        }
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Root", 2)?;
        st.serialize_field("conductor", &self.den)?;
        st.serialize_field("exponent", &self.num)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            conductor: u64,
            exponent: i64,
        }
        let r = Raw::deserialize(d)?;
        if r.conductor == 0 {
            return Err(serde::de::Error::custom("root of unity conductor must be positive"));
        }
        Ok(Root::new(r.exponent, r.conductor))
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the m-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    if let Some(c) = cyclotomic_cache().lock().unwrap().get(&m) {
        return c.clone();
    }
    // X^m - 1 divided by Φ_d for every proper divisor d of m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(m, arc.clone());
    arc
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                r[i + j] -= c * b[j];
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

/// Conductor of a product or sum of values with conductors `a` and `b`.
pub fn joint_conductor(a: u64, b: u64) -> Result<u64> {
    let l = a.lcm(&b);
    if l > MAX_CONDUCTOR {
        Err(Error::ConductorOverflow(l, MAX_CONDUCTOR))
    } else {
        Ok(l)
    }
}

/// An exact element `Σ_{k<m} a_k ζ_m^k` of the cyclotomic field Q(ζ_m).
#[derive(Clone)]
pub struct CycNum {
    m: u64,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    /// Zero.
    pub fn zero() -> Self {
        CycNum { m: 1, coeffs: vec![BigRational::zero()] }
    }

    /// One.
    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// A rational constant.
    pub fn from_rational(q: BigRational) -> Self {
        CycNum { m: 1, coeffs: vec![q] }
    }

    /// A root of unity.
    pub fn from_root(r: Root) -> Self {
        Self::from_root_scaled(r, BigRational::one())
    }

    /// `q · r` for a rational `q` and root `r`.
    pub fn from_root_scaled(r: Root, q: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); r.den as usize];
        coeffs[r.num as usize] = q;
        CycNum { m: r.den, coeffs }
    }

    /// Builds `Σ q_r · r` from weighted roots.
    pub fn from_weighted_roots<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a Root, &'a BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut m = 1u64;
        for (r, _) in &terms {
            m = joint_conductor(m, r.den)?;
        }
        let mut coeffs = vec![BigRational::zero(); m as usize];
        for (r, q) in terms {
            let idx = (r.num * (m / r.den)) as usize;
            coeffs[idx] += q;
        }
        Ok(CycNum { m, coeffs })
    }

    /// The conductor m of the representation.
    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// Coefficients `a_k` of the representation (not reduced).
    pub fn raw_coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients from a raw vector of length `m` (or shorter, zero padded).
    pub fn from_coeffs(m: u64, mut coeffs: Vec<BigRational>) -> Result<Self> {
        if m == 0 || m > MAX_CONDUCTOR {
            return Err(Error::ConductorOverflow(m, MAX_CONDUCTOR));
        }
        if coeffs.len() > m as usize {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for conductor {}",
                coeffs.len(),
                m
            )));
        }
        coeffs.resize(m as usize, BigRational::zero());
        Ok(CycNum { m, coeffs })
    }

    /// The same value represented with conductor `m2`, a multiple of the current one.
    pub fn embed(&self, m2: u64) -> Result<Self> {
        if m2 % self.m != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot embed conductor {} into {}",
                self.m, m2
            )));
        }
        if m2 > MAX_CONDUCTOR {
            return Err(Error::ConductorOverflow(m2, MAX_CONDUCTOR));
        }
        let s = (m2 / self.m) as usize;
        let mut coeffs = vec![BigRational::zero(); m2 as usize];
        for (k, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                coeffs[k * s] = a.clone();
            }
        }
        Ok(CycNum { m: m2, coeffs })
    }

    /// Sum.
    pub fn add(&self, o: &CycNum) -> Result<CycNum> {
        let m = joint_conductor(self.m, o.m)?;
        let mut a = self.embed(m)?;
        let sb = (m / o.m) as usize;
        for (k, c) in o.coeffs.iter().enumerate() {
            if !c.is_zero() {
                a.coeffs[k * sb] += c;
            }
        }
        Ok(a)
    }

    /// Difference.
    pub fn sub(&self, o: &CycNum) -> Result<CycNum> {
        self.add(&o.neg())
    }

    /// Negation.
    pub fn neg(&self) -> CycNum {
        CycNum { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Product.
    pub fn mul(&self, o: &CycNum) -> Result<CycNum> {
        let m = joint_conductor(self.m, o.m)?;
        let sa = (m / self.m) as usize;
        let sb = (m / o.m) as usize;
        let mu = m as usize;
        let mut coeffs = vec![BigRational::zero(); mu];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[(i * sa + j * sb) % mu] += a * b;
            }
        }
        Ok(CycNum { m, coeffs })
    }

    /// Multiplication by a root of unity.
    pub fn mul_root(&self, r: &Root) -> Result<CycNum> {
        self.mul(&CycNum::from_root(*r))
    }

    /// Multiplication by a rational.
    pub fn scale(&self, q: &BigRational) -> CycNum {
        CycNum { m: self.m, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Canonical representative: coefficients of the remainder modulo Φ_m
    /// (length φ(m)).
    pub fn reduced_coeffs(&self) -> Vec<BigRational> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut den = BigInt::one();
        for c in &self.coeffs {
            if !c.is_zero() {
                den = den.lcm(c.denom());
            }
        }
        let mut a: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        for i in (deg..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[i]);
            for j in 0..deg {
                if phi[j] != 0 {
                    a[i - deg + j] -= &c * phi[j];
                }
            }
        }
        a.truncate(deg);
        a.into_iter().map(|x| BigRational::new(x, den.clone())).collect()
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        self.reduced_coeffs().iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = self.reduced_coeffs();
        if r.iter().skip(1).all(|c| c.is_zero()) {
            Some(r.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// True when the value is a rational number strictly greater than zero.
    pub fn is_positive_rational(&self) -> bool {
        self.as_rational().map(|q| q.is_positive()).unwrap_or(false)
    }

    /// Floating approximation `(re, im)` of the value under ζ_m = exp(2πi/m).
    pub fn approx(&self) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / self.m as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Exact equality.
    pub fn equals(&self, o: &CycNum) -> Result<bool> {
        Ok(self.sub(o)?.is_zero())
    }
}

impl PartialEq for CycNum {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o).expect("conductor overflow in comparison")
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let (re, im) = self.approx();
        write!(f, "≈ {re:.6} {} {:.6}i (conductor {})", if im < 0.0 { "-" } else { "+" }, im.abs(), self.m)
    }
}

fn rational_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.reduced_coeffs().iter().map(rational_to_string).collect();
        let (re, im) = self.approx();
        let mut st = s.serialize_struct("CycNum", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("approx", &[re, im])?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: u64,
            coeffs: Vec<String>,
            #[allow(dead_code)]
            approx: Option<[f64; 2]>,
        }
        let r = Raw::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        CycNum::from_coeffs(r.m, coeffs).map_err(serde::de::Error::custom)
    }
}
