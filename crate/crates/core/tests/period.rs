//! The period integrator: exactness of the coset reductions, the role of the
//! torus weights, stability, and twist coherence.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shalika_core::arith::cyclo::{CycNum, Root};
use shalika_core::shalika::{period_sums, stability_check, IntegralConfig, RWeight};
use shalika_core::strata::family::{Family, FamilyParams, FamilySpec, TwistSpec};
use shalika_core::strata::sampling::{random_j, random_shalika_point, random_unipotent};
use shalika_core::strata::whittaker::whittaker_root;
use shalika_core::verdict::{central_character, twist_reparametrize, verdict};

fn middle(p: u32, chi: u64, zeta: Root) -> FamilySpec {
    FamilySpec { p, params: FamilyParams::Middle { c: 1, d: 1, chi, zeta }, twist: None }
}

fn simple(p: u32, phi: u64, zeta: Root) -> FamilySpec {
    FamilySpec { p, params: FamilyParams::Simple { v: 1, phi, zeta }, twist: None }
}

fn q(n: i64, d: i64) -> CycNum {
    CycNum::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

#[test]
fn reductions_reproduce_the_plain_sum() {
    for spec in [middle(2, 0, Root::one()), middle(2, 1, Root::new(2, 3)), simple(2, 0, Root::new(1, 4))] {
        let fam = Family::new(&spec).unwrap();
        let cfg = IntegralConfig { level: 3, ..IntegralConfig::default_for(&spec) };
        let fast = period_sums(&fam, &cfg, 3, 1).unwrap();
        let plain = period_sums(&fam, &IntegralConfig { reduce: false, ..cfg.clone() }, 3, 1).unwrap();
        assert!(fast.evaluations < plain.evaluations);
        assert_eq!(fast.t.keys().collect::<Vec<_>>(), plain.t.keys().collect::<Vec<_>>(), "{spec:?}");
        for (k, v) in &fast.t {
            assert!(v.equals(&plain.t[k]).unwrap(), "{spec:?} k={k}");
        }
    }
}

#[test]
fn middle_partial_sums_at_p2() {
    let fam = Family::new(&middle(2, 0, Root::one())).unwrap();
    let cfg = IntegralConfig::default_for(&fam.spec);
    let s = period_sums(&fam, &cfg, cfg.level, 1).unwrap();
    assert!(s.t[&0].equals(&q(1, 6)).unwrap());
    assert!(s.t[&2].equals(&q(1, 12)).unwrap());
    assert!(stability_check(&fam, &cfg).unwrap());
}

#[test]
fn global_weight_scale_is_verdict_neutral() {
    for spec in [middle(2, 0, Root::one()), simple(3, 0, Root::new(1, 4)), simple(3, 0, Root::one())] {
        let fam = Family::new(&spec).unwrap();
        let cfg = IntegralConfig::default_for(&spec);
        let base = period_sums(&fam, &cfg, cfg.level, 1).unwrap();
        let scaled = period_sums(&fam, &IntegralConfig { weight_scale: 7, ..cfg.clone() }, cfg.level, 1).unwrap();
        let seven = BigRational::from_integer(BigInt::from(7));
        assert!(scaled.total.equals(&base.total.scale(&seven)).unwrap());
        assert_eq!(scaled.total.is_zero(), base.total.is_zero());
    }
}

/// With unit weight per torus exponent the simple period at `ζ = i` does not
/// vanish, while the Haar weight `p^r` gives `T₀ + ζ² T₂ = 0`. The vanishing
/// pattern is therefore sensitive to per-`r` rescaling.
#[test]
fn torus_weight_changes_the_simple_verdict() {
    let spec = simple(3, 0, Root::new(1, 4));
    let fam = Family::new(&spec).unwrap();
    let cfg = IntegralConfig::default_for(&spec);
    assert_eq!(cfg.r_weight, RWeight::Modular);
    let haar = period_sums(&fam, &cfg, cfg.level, 1).unwrap();
    assert!(haar.total.is_zero());
    assert!(haar.t[&0].equals(&q(1, 24)).unwrap());
    assert!(haar.t[&2].equals(&q(-1, 24)).unwrap());
    let unit = period_sums(&fam, &IntegralConfig { r_weight: RWeight::Unit, ..cfg.clone() }, cfg.level, 1).unwrap();
    assert!(!unit.total.is_zero());
}

fn twists(p: u32) -> Vec<TwistSpec> {
    let mut out = Vec::new();
    for mu in 0..(p as u64 - 1) {
        for at_pi in [Root::one(), Root::minus_one(), Root::new(1, 4)] {
            out.push(TwistSpec { mu, at_pi });
        }
    }
    out
}

/// The reparametrized family satisfies `W′(g) = η(det g) W(g)` pointwise.
#[test]
fn reparametrized_whittaker_function_is_the_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bases = [
        simple(3, 1, Root::new(1, 8)),
        middle(3, 2, Root::new(1, 8)),
        FamilySpec { p: 3, params: FamilyParams::Biquadratic { a: 1, b: 1, chi: 3, zeta: Root::new(1, 10) }, twist: None },
    ];
    for base in bases {
        for tw in twists(3) {
            let spec = FamilySpec { twist: Some(tw.clone()), ..base.clone() };
            let eta = spec.twist_char().unwrap();
            let fam = Family::new(&spec.untwisted()).unwrap();
            let re = Family::new(&twist_reparametrize(&spec).unwrap()).unwrap();
            let mut hits = 0;
            for _ in 0..60 {
                let g = if rng.gen_bool(0.5) {
                    random_shalika_point(&fam, -4, 1, -2, &mut rng)
                } else {
                    let (j, ..) = random_j(&fam, -2, 2, &mut rng).unwrap();
                    random_unipotent(fam.p, fam.prec, -2, &mut rng).mul(&j)
                };
                let w = whittaker_root(&fam, &g, None).unwrap();
                let w2 = whittaker_root(&re, &g, None).unwrap();
                let twisted = w.map(|x| x.mul(&eta.eval(&g.det()).unwrap()));
                assert_eq!(w2, twisted, "{spec:?}");
                hits += w.is_some() as u32;
            }
            assert!(hits > 0, "no support points drawn for {spec:?}");
        }
    }
}

#[test]
fn twisted_verdicts_match_reparametrized_verdicts() {
    let mut points = Vec::new();
    for zeta in [Root::one(), Root::minus_one(), Root::new(1, 4), Root::new(1, 8)] {
        for tw in twists(3) {
            points.push(FamilySpec { twist: Some(tw), ..simple(3, 0, zeta) });
        }
    }
    for tw in twists(3) {
        points.push(FamilySpec { twist: Some(tw), ..middle(3, 0, Root::one()) });
    }
    for spec in points {
        let cfg = IntegralConfig::default_for(&spec);
        let direct = verdict(&Family::new(&spec).unwrap(), &cfg, 5).unwrap();
        let re_spec = twist_reparametrize(&spec).unwrap();
        let re = verdict(&Family::new(&re_spec).unwrap(), &cfg, 5).unwrap();
        assert_eq!(direct.central, re.central, "{spec:?}");
        assert_eq!(direct.lambda0_nonzero, re.lambda0_nonzero, "{spec:?}");
        assert_eq!(direct.transfer, re.transfer, "{spec:?}");
        assert_eq!(direct.criterion, re.criterion, "{spec:?}");
        assert!(direct.report.stable && re.report.stable);
    }
}

#[test]
fn central_character_examples() {
    let triv = |s: FamilySpec| central_character(&Family::new(&s).unwrap()).unwrap().is_trivial();
    assert!(triv(simple(3, 0, Root::one())));
    assert!(triv(simple(3, 0, Root::new(1, 4))));
    assert!(!triv(simple(3, 0, Root::new(1, 8))));
    assert!(triv(middle(2, 0, Root::one())));
    assert!(triv(middle(2, 0, Root::minus_one())));
    assert!(!triv(middle(2, 0, Root::new(1, 4))));
    let biq = |chi, zeta| FamilySpec { p: 3, params: FamilyParams::Biquadratic { a: 1, b: 1, chi, zeta }, twist: None };
    assert!(triv(biq(0, Root::one())));
    assert!(!triv(biq(0, Root::minus_one())));
}
