//! The twisted Shalika period `Λ_{s₀}` at `q^{s₀} = ±1` as a finite exact sum.
//!
//! For each torus exponent `r` in the window the `h` variable runs over a set
//! of representatives of `GL(2, O)` at level `M` with uniform weight, and
//! `x` runs over `P^{x_lo} / P^M` with weight `p^{−M}` per representative.
//! The exponent `r` carries the weight `p^r` of the Iwasawa measure by
//! default (see [`RWeight`]).
//! Each term is `η(det α) · W(α)` (times `(±1)^r` for the sign-twisted
//! period), where `α = shalika_embed(r, h, x)`. The factor `ψ_F(−tr X)` of
//! the period is `1` because `X` is lower nilpotent, and is checked on
//! every block.
//!
//! The reductions of [`super::cosets`] replace the `h` and `x` enumerations
//! by coarser ones with matching weights. Each replacement is an exact
//! identity of finite sums, so the result equals the plain level-`M` sum.

use super::cosets::{h_points, x_invariance_level, x_reduction_applies, CosetPoint};
use crate::arith::cyclo::{CycNum, Root};
use crate::arith::padic::{ppow, PAdicNum};
use crate::arith::psi::psi_f;
use crate::arith::tame::TameChar;
use crate::error::{Error, Result};
use crate::lattice::gl2::shalika_embed;
use crate::strata::family::{Family, FamilyKind, FamilySpec};
use crate::strata::whittaker::whittaker_root;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Lower end of the default `x` window: `x ∈ P^{−2}`.
pub const DEFAULT_X_LO: i32 = -2;

/// Weight attached to each torus exponent `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RWeight {
    /// Weight `1` for every `r`.
    Unit,
    /// Weight `p^r = δ_B(diag(p^r, 1))⁻¹`, the Haar measure of the quotient
    /// `F^× N(2, F) \ GL(2, F)` in Iwasawa coordinates.
    #[default]
    Modular,
}

/// Parameters of a period computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralConfig {
    /// Congruence level `M` of the `h` and `x` representatives.
    pub level: u32,
    /// Smallest torus exponent.
    pub r_min: i32,
    /// Largest torus exponent.
    pub r_max: i32,
    /// `x` runs over `P^{x_lo} / P^M`.
    pub x_lo: i32,
    /// Per-`r` weight.
    #[serde(default)]
    pub r_weight: RWeight,
    /// Positive integer multiplying every weight.
    #[serde(default = "one_u64")]
    pub weight_scale: u64,
    /// Use the coset reductions.
    #[serde(default = "yes")]
    pub reduce: bool,
    /// Worker threads (`None` uses the global pool). Not serialized, since
    /// results do not depend on it.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

fn one_u64() -> u64 {
    1
}

fn yes() -> bool {
    true
}

/// Default level `M`: 3 for `p = 2`, 2 otherwise.
pub fn default_level(p: u32) -> u32 {
    if p == 2 {
        3
    } else {
        2
    }
}

impl IntegralConfig {
    /// The default windows for a family: `r ∈ [−4, 4]` for the simple family
    /// and `[−4, 1]` otherwise, `x ∈ P^{−2}`.
    pub fn default_for(spec: &FamilySpec) -> Self {
        let (r_min, r_max) = match spec.kind() {
            FamilyKind::Simple => (-4, 4),
            _ => (-4, 1),
        };
        IntegralConfig {
            level: default_level(spec.p),
            r_min,
            r_max,
            x_lo: DEFAULT_X_LO,
            r_weight: RWeight::Modular,
            weight_scale: 1,
            reduce: true,
            jobs: None,
        }
    }

    /// The same configuration at another level.
    pub fn at_level(&self, level: u32) -> Self {
        IntegralConfig { level, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.level < 1 {
            return Err(Error::InvalidParameter("level must be at least 1".into()));
        }
        if self.r_min > self.r_max {
            return Err(Error::InvalidParameter("empty r window".into()));
        }
        if self.x_lo >= self.level as i32 {
            return Err(Error::InvalidParameter("x window must start below the level".into()));
        }
        if self.weight_scale == 0 {
            return Err(Error::InvalidParameter("weight scale must be positive".into()));
        }
        Ok(())
    }
}

/// The partial sums of one period computation at one level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodSums {
    /// The level `M`.
    pub level: u32,
    /// `T_k`, keyed by the power `k` of the uniformizing element.
    pub t: BTreeMap<i32, CycNum>,
    /// `Σ_k T_k`.
    pub total: CycNum,
    /// Whether the `h` reduction was used.
    pub h_reduced: bool,
    /// Number of `(r, h)` blocks whose `x` sum was reduced.
    pub x_reduced_blocks: u64,
    /// Number of `(r, h)` blocks.
    pub blocks: u64,
    /// Number of Whittaker evaluations.
    pub evaluations: u64,
    /// Number of evaluations with `W ≠ 0`.
    pub support_points: u64,
}

/// Result of a period computation with its stability check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    /// The family and twist.
    pub family: FamilySpec,
    /// The configuration (its `level` is the reported level).
    pub config: IntegralConfig,
    /// `+1` for `Λ₀`, `−1` for the sign-twisted period.
    pub sign: i32,
    /// `T_k` at the reported level.
    pub t: BTreeMap<i32, CycNum>,
    /// The period at the reported level.
    pub total: CycNum,
    /// `Λ ≠ 0` exactly.
    pub nonzero: bool,
    /// Every `T_k` agrees exactly with its value at level `M + 1`.
    pub stable: bool,
    /// The partial sums at level `M + 1`.
    pub next: PeriodSums,
    /// Work counters at level `M`.
    pub evaluations: u64,
    /// Number of evaluations with `W ≠ 0` at level `M`.
    pub support_points: u64,
    /// Whether the `h` reduction was used at level `M`.
    pub h_reduced: bool,
}

impl IntegralReport {
    /// `T_k`, or zero when no point contributed.
    pub fn t_k(&self, k: i32) -> CycNum {
        self.t.get(&k).cloned().unwrap_or_else(CycNum::zero)
    }
}

type Counts = HashMap<(i32, Root, i32), u64>;

struct BlockOut {
    counts: Counts,
    evaluations: u64,
    support: u64,
    x_reduced: bool,
}

fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn x_points(p: u32, x_lo: i32, top: i32) -> impl Iterator<Item = u64> {
    0..ppow(p, (top - x_lo) as u32)
}

fn eval_block(
    fam: &Family,
    eta: &TameChar,
    sign: i32,
    r: i32,
    h: &[u64; 4],
    cfg: &IntegralConfig,
    level: u32,
    x_reduce: bool,
) -> Result<BlockOut> {
    let p = fam.p;
    let prec = fam.prec;
    let mut out = BlockOut { counts: HashMap::new(), evaluations: 0, support: 0, x_reduced: false };
    if fam.k_from_det_val(2 * r).is_none() {
        return Ok(out);
    }
    let hm = super::cosets::h_matrix(p, h, prec);
    let det_h = hm.det();
    // η(det α) with det α = p^{2r} det(h)².
    let eta_val = eta.at_pi().pow(2 * r as i64).mul(&eta.eval(&det_h)?.pow(2));
    let sign_val = if sign < 0 && r.rem_euclid(2) == 1 { Root::minus_one() } else { Root::one() };
    let factor = eta_val.mul(&sign_val);
    // ψ_F(−tr X) for X = n⁻(x): the trace is 0 + 0.
    let tr_x = PAdicNum::zero(p) + PAdicNum::zero(p);
    if !psi_f(&(-tr_x))?.is_one() {
        return Err(Error::Invariant("ψ_F(−tr X) ≠ 1 on a lower nilpotent X".into()));
    }
    let mut top = level as i32;
    if x_reduce {
        let m = x_invariance_level(fam, r, h)?.max(cfg.x_lo);
        if m <= top {
            top = m;
            out.x_reduced = true;
        }
    }
    for j in x_points(p, cfg.x_lo, top) {
        let x = PAdicNum::from_int(p, j as i64, prec).shift(cfg.x_lo);
        let alpha = shalika_embed(r, &hm, &x);
        out.evaluations += 1;
        if let Some(w) = whittaker_root(fam, &alpha, Some(2 * r))? {
            out.support += 1;
            *out.counts.entry((r, w.mul(&factor), top)).or_insert(0) += 1;
        }
    }
    Ok(out)
}

fn r_weight(p: u32, r: i32, w: RWeight) -> BigRational {
    match w {
        RWeight::Unit => BigRational::one(),
        RWeight::Modular => {
            let pr = BigInt::from(p).pow(r.unsigned_abs());
            if r >= 0 {
                BigRational::from_integer(pr)
            } else {
                BigRational::new(BigInt::one(), pr)
            }
        }
    }
}

/// The partial sums `T_k` of `Λ_{s₀}` (`sign = ±1`) at level `level`.
pub fn period_sums(fam: &Family, cfg: &IntegralConfig, level: u32, sign: i32) -> Result<PeriodSums> {
    let cfg = cfg.at_level(level);
    cfg.validate()?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter("sign must be ±1".into()));
    }
    let eta = fam.spec.twist_char()?;
    let (hs, h_reduced) = h_points(fam, level, cfg.reduce)?;
    let x_reduce = cfg.reduce && x_reduction_applies(fam);
    let blocks: Vec<(i32, [u64; 4])> =
        (cfg.r_min..=cfg.r_max).flat_map(|r| hs.iter().map(move |h| (r, *h))).collect();
    let merged = run_in_pool(cfg.jobs, || {
        blocks
            .par_iter()
            .map(|(r, h)| eval_block(fam, &eta, sign, *r, h, &cfg, level, x_reduce))
            .try_fold(
                || (Counts::new(), 0u64, 0u64, 0u64),
                |mut acc, b| {
                    let b = b?;
                    for (key, c) in b.counts {
                        *acc.0.entry(key).or_insert(0) += c;
                    }
                    acc.1 += b.evaluations;
                    acc.2 += b.support;
                    acc.3 += b.x_reduced as u64;
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(
                || (Counts::new(), 0, 0, 0),
                |mut a, b| {
                    for (key, c) in b.0 {
                        *a.0.entry(key).or_insert(0) += c;
                    }
                    Ok((a.0, a.1 + b.1, a.2 + b.2, a.3 + b.3))
                },
            )
    })??;
    let (counts, evaluations, support_points, x_reduced_blocks) = merged;
    let n_h = BigInt::from(hs.len());
    let mut per_k: BTreeMap<i32, HashMap<Root, BigRational>> = BTreeMap::new();
    for ((r, root, top), c) in counts {
        let k = fam.k_from_det_val(2 * r).expect("only integral k contribute");
        let denom = &n_h * BigInt::from(ppow(fam.p, top.max(0) as u32));
        let numer = BigInt::from(c) * BigInt::from(cfg.weight_scale) * BigInt::from(ppow(fam.p, (-top).max(0) as u32));
        let q = BigRational::new(numer, denom) * r_weight(fam.p, r, cfg.r_weight);
        let e = per_k.entry(k).or_default().entry(root).or_insert_with(BigRational::zero);
        *e += q;
    }
    let mut t = BTreeMap::new();
    let mut total = CycNum::zero();
    for (k, terms) in per_k {
        let v = CycNum::from_weighted_roots(terms.iter())?;
        total = total.add(&v)?;
        t.insert(k, v);
    }
    Ok(PeriodSums {
        level,
        t,
        total,
        h_reduced,
        x_reduced_blocks,
        blocks: blocks.len() as u64,
        evaluations,
        support_points,
    })
}

fn sums_equal(a: &PeriodSums, b: &PeriodSums) -> Result<bool> {
    let keys: BTreeSet<i32> = a.t.keys().chain(b.t.keys()).copied().collect();
    for k in keys {
        let x = a.t.get(&k).cloned().unwrap_or_else(CycNum::zero);
        let y = b.t.get(&k).cloned().unwrap_or_else(CycNum::zero);
        if !x.equals(&y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn report_from(fam: &Family, cfg: &IntegralConfig, sign: i32, cur: PeriodSums, next: PeriodSums) -> Result<IntegralReport> {
    let stable = sums_equal(&cur, &next)?;
    Ok(IntegralReport {
        family: fam.spec.clone(),
        config: cfg.clone(),
        sign,
        nonzero: !cur.total.is_zero(),
        total: cur.total,
        t: cur.t,
        stable,
        next,
        evaluations: cur.evaluations,
        support_points: cur.support_points,
        h_reduced: cur.h_reduced,
    })
}

/// `Λ_{s₀}` with `q^{s₀} = sign` at level `cfg.level`, with the comparison
/// against level `M + 1`.
pub fn period_report(fam: &Family, cfg: &IntegralConfig, sign: i32) -> Result<IntegralReport> {
    let cur = period_sums(fam, cfg, cfg.level, sign)?;
    let next = period_sums(fam, cfg, cfg.level + 1, sign)?;
    report_from(fam, cfg, sign, cur, next)
}

/// `Λ₀` at level `cfg.level` with its stability flag.
pub fn lambda0(fam: &Family, cfg: &IntegralConfig) -> Result<IntegralReport> {
    period_report(fam, cfg, 1)
}

/// `Λ_{s₀}` starting at `cfg.level` and raising the level until the level-`M`
/// and level-`(M+1)` partial sums agree, up to `max_level`.
pub fn period_escalating(fam: &Family, cfg: &IntegralConfig, sign: i32, max_level: u32) -> Result<IntegralReport> {
    let mut level = cfg.level;
    let mut cur = period_sums(fam, cfg, level, sign)?;
    loop {
        let next = period_sums(fam, cfg, level + 1, sign)?;
        if sums_equal(&cur, &next)? {
            return report_from(fam, &cfg.at_level(level), sign, cur, next);
        }
        if level + 1 >= max_level {
            return Err(Error::Unstable(level + 1));
        }
        level += 1;
        cur = next;
    }
}

/// `Λ_{s₀}` for `q^{s₀} = sign`. Requires a trivial central character, since
/// otherwise no `s₀` with `q^{2s₀} = 1` can contribute a pole.
pub fn lambda_s0_sign(fam: &Family, sign: i32, cfg: &IntegralConfig) -> Result<CycNum> {
    if !crate::verdict::central_character(fam)?.is_trivial() {
        return Err(Error::InvalidParameter("the central character is not trivial".into()));
    }
    Ok(period_sums(fam, cfg, cfg.level, sign)?.total)
}

/// True when every `T_k` at level `cfg.level` equals its value at `M + 1`.
pub fn stability_check(fam: &Family, cfg: &IntegralConfig) -> Result<bool> {
    let a = period_sums(fam, cfg, cfg.level, 1)?;
    let b = period_sums(fam, cfg, cfg.level + 1, 1)?;
    sums_equal(&a, &b)
}

/// The powers `k` at which some Shalika point carries `W ≠ 0`, each with a
/// witness point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    /// The family and twist.
    pub family: FamilySpec,
    /// The scanned window of `k`.
    pub k_window: (i32, i32),
    /// The level of the representatives.
    pub level: u32,
    /// The torus exponents scanned.
    pub r_values: Vec<i32>,
    /// The support.
    pub support: BTreeSet<i32>,
    /// A point with `W ≠ 0` for each `k` in the support.
    pub witnesses: BTreeMap<i32, CosetPoint>,
}

/// Scans all Shalika points at level `level` whose power `k` lies in
/// `[k_min, k_max]` and returns the set of `k` where `W` does not vanish.
pub fn support_scan(
    fam: &Family,
    k_min: i32,
    k_max: i32,
    level: u32,
    x_lo: i32,
    jobs: Option<usize>,
) -> Result<SupportReport> {
    if k_min > k_max {
        return Err(Error::InvalidParameter("empty k window".into()));
    }
    let cfg = IntegralConfig {
        level,
        r_min: 0,
        r_max: 0,
        x_lo,
        r_weight: RWeight::Unit,
        weight_scale: 1,
        reduce: true,
        jobs,
    };
    cfg.validate()?;
    // k is ±2r, ±r or r/2, so |r| ≤ 2 max |k| covers the window.
    let bound = 2 * k_min.abs().max(k_max.abs()) + 2;
    let r_values: Vec<i32> = (-bound..=bound)
        .filter(|&r| fam.k_from_det_val(2 * r).is_some_and(|k| (k_min..=k_max).contains(&k)))
        .collect();
    let (hs, _) = h_points(fam, level, true)?;
    let x_reduce = x_reduction_applies(fam);
    let p = fam.p;
    let prec = fam.prec;
    let found = run_in_pool(jobs, || {
        r_values
            .iter()
            .map(|&r| {
                let hit = hs.par_iter().map(|h| -> Result<Option<CosetPoint>> {
                    let hm = super::cosets::h_matrix(p, h, prec);
                    let mut top = level as i32;
                    if x_reduce {
                        let m = x_invariance_level(fam, r, h)?.max(x_lo);
                        top = top.min(m);
                    }
                    for j in x_points(p, x_lo, top) {
                        let x = PAdicNum::from_int(p, j as i64, prec).shift(x_lo);
                        if whittaker_root(fam, &shalika_embed(r, &hm, &x), Some(2 * r))?.is_some() {
                            return Ok(Some(CosetPoint { r, h: *h, x_num: j, x_shift: x_lo }));
                        }
                    }
                    Ok(None)
                });
                let first = hit.find_map_first(|res| match res {
                    Ok(Some(pt)) => Some(Ok(pt)),
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                });
                first.transpose().map(|w| (r, w))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut support = BTreeSet::new();
    let mut witnesses = BTreeMap::new();
    for (r, w) in found {
        if let Some(pt) = w {
            let k = fam.k_from_det_val(2 * r).expect("filtered");
            support.insert(k);
            witnesses.entry(k).or_insert(pt);
        }
    }
    Ok(SupportReport { family: fam.spec.clone(), k_window: (k_min, k_max), level, r_values, support, witnesses })
}
