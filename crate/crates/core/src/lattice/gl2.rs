//! `GL(2)` coset data: the Shalika embedding, enumeration of `GL(2, Z/p^M)`,
//! and the Iwahori/Bruhat classification of `GL(2, Z_p)`.

use super::mat::{Mat2, Mat4};
use crate::arith::padic::{max_precision, ppow, PAdicNum};
use crate::error::{Error, Result};

/// `σ₄ · n(n⁻(x)) · diag(g, g) · σ₄` with `g = diag(p^r, 1) · h`:
///
/// ```text
/// [ h11 p^r   0          h12 p^r   0        ]
/// [ 0         h11 p^r    0         h12 p^r  ]
/// [ h21       h11 x p^r  h22       h12 x p^r]
/// [ 0         h21        0         h22      ]
/// ```
pub fn shalika_embed(r: i32, h: &Mat2, x: &PAdicNum) -> Mat4 {
    let p = h.p();
    let mut m = Mat4::zero(p);
    let a = h[(0, 0)].shift(r);
    let b = h[(0, 1)].shift(r);
    m[(0, 0)] = a;
    m[(0, 2)] = b;
    m[(1, 1)] = a;
    m[(1, 3)] = b;
    m[(2, 0)] = h[(1, 0)];
    m[(2, 1)] = a * *x;
    m[(2, 2)] = h[(1, 1)];
    m[(2, 3)] = b * *x;
    m[(3, 1)] = h[(1, 0)];
    m[(3, 3)] = h[(1, 1)];
    m
}

/// The order `|GL(2, Z/p^M)| = (p² − 1)(p² − p) p^{4(M − 1)}`.
pub fn gl2_order(p: u32, level: u32) -> u64 {
    let p = p as u64;
    (p * p - 1) * (p * p - p) * p.pow(4 * (level - 1))
}

/// All elements of `GL(2, Z/p^M)` as integer entry tuples `[h11, h12, h21, h22]`
/// in `[0, p^M)`, in lexicographic order.
pub fn gl2_reps(p: u32, level: u32) -> Result<Vec<[u64; 4]>> {
    if level == 0 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    let q = ppow(p, level);
    let pp = p as u64;
    let mut out = Vec::with_capacity(gl2_order(p, level) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if ((a % pp) * (d % pp) + pp * pp - (b % pp) * (c % pp)) % pp != 0 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The lift of an integer entry tuple to `Mat2` at full precision.
pub fn mat2_from_tuple(p: u32, t: &[u64; 4]) -> Mat2 {
    let prec = max_precision(p);
    Mat2::from_ints(p, [[t[0] as i64, t[1] as i64], [t[2] as i64, t[3] as i64]], prec)
}

/// The two cells of `GL(2, Z_p) = I ⊔ I s I` for the Iwahori subgroup `I` of
/// matrices that are lower triangular modulo `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IwahoriClass {
    /// `h₁₂ ∈ P`: a representative modulo the upper unipotent group is lower
    /// triangular with unit diagonal entries.
    Iwahori,
    /// `h₁₂` a unit: the representative has zero `(1,1)` entry and unit
    /// anti-diagonal entries.
    Bruhat,
}

/// Classifies `h ∈ GL(2, Z_p)` by its Bruhat cell.
pub fn iwahori_classify(h: &Mat2) -> Result<IwahoriClass> {
    if h[(0, 1)].val_at_least(1)? {
        Ok(IwahoriClass::Iwahori)
    } else {
        Ok(IwahoriClass::Bruhat)
    }
}

/// A representative of `N(2, Z_p) h` of the displayed shape for its cell, when
/// one exists: lower triangular for the Iwahori cell, and `[[0, h12], [h21, h22]]`
/// for the Bruhat cell when `h21` is a unit.
pub fn cell_representative(h: &Mat2) -> Result<Option<Mat2>> {
    let p = h.p();
    let prec = max_precision(p);
    let n = |s: PAdicNum| {
        let mut m = Mat2::identity(p, prec);
        m[(0, 1)] = s;
        m
    };
    match iwahori_classify(h)? {
        IwahoriClass::Iwahori => {
            let s = -(h[(0, 1)] * h[(1, 1)].inv()?);
            Ok(Some(n(s).mul(h)))
        }
        IwahoriClass::Bruhat => {
            if h[(1, 0)].val_at_least(1)? {
                return Ok(None);
            }
            let s = -(h[(0, 0)] * h[(1, 0)].inv()?);
            Ok(Some(n(s).mul(h)))
        }
    }
}
