//! Acceptance criteria. Prints one PASS/FAIL line per criterion.
//!
//! Every check is exact. The only tolerances are the wall-clock budgets of
//! the two support scans, pinned below. Criteria that fail because the
//! computed values contradict a closed-form claim are listed in
//! [`KNOWN_DISCREPANCIES`] together with the measured signature of the
//! failure; the run succeeds only if every other criterion passes and each
//! listed criterion fails with exactly that signature.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shalika_core::arith::cyclo::{CycNum, Root};
use shalika_core::arith::ff::is_irreducible;
use shalika_core::arith::padic::{max_precision, PAdicNum};
use shalika_core::arith::psi::psi_f;
use shalika_core::lattice::congruence::{solve_congruences, CongruenceSystem};
use shalika_core::lattice::mat::Mat4;
use shalika_core::shalika::{support_scan, IntegralConfig};
use shalika_core::strata::family::{Family, FamilyParams, FamilySpec, TwistSpec};
use shalika_core::strata::proof::{sample_params, verify_proof_decomposition, ProofCase};
use shalika_core::strata::sampling::{random_j, random_padic, random_shalika_point, random_u, random_unipotent, random_unit};
use shalika_core::strata::whittaker::{bessel_value, psi4, whittaker_root};
use shalika_core::verdict::{central_character, eta_minus_v_pi, twist_reparametrize, verdict, Verdict};
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Budget of criterion 1.
const MIDDLE_SCAN_BUDGET: Duration = Duration::from_secs(120);
/// Budget of criterion 2.
const BIQUADRATIC_SCAN_BUDGET: Duration = Duration::from_secs(600);
/// Draws per proof case in criterion 8.
const PROOF_DRAWS: usize = 1000;
/// Random systems in criterion 9.
const SOLVER_SYSTEMS: usize = 200;
/// Samples per property in criterion 10.
const PROPERTY_SAMPLES: usize = 500;
/// Escalation budget of every verdict.
const MAX_LEVEL: u32 = 6;

/// Criteria expected to fail, with the reason recorded in the decisions log.
const KNOWN_DISCREPANCIES: &[(u32, &str)] = &[
    (3, "middle members with chi nontrivial and omega trivial have Lambda_0 = 0 exactly"),
    (4, "T_0 = -T_1 != 0 for chi nontrivial, not T_0 = 0"),
    (5, "the biquadratic member with chi_M nontrivial and omega trivial has Lambda_0 = 0 exactly"),
];

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    /// For a known discrepancy: the failure has the recorded signature.
    signature: bool,
    detail: String,
}

impl Outcome {
    fn new(id: u32, title: &'static str, pass: bool, detail: String) -> Self {
        Outcome { id, title, pass, signature: false, detail }
    }
}

fn middle(p: u32, chi: u64, zeta: Root) -> FamilySpec {
    FamilySpec { p, params: FamilyParams::Middle { c: 1, d: 1, chi, zeta }, twist: None }
}

fn biquadratic(chi: u64, zeta: Root) -> FamilySpec {
    FamilySpec { p: 3, params: FamilyParams::Biquadratic { a: 1, b: 1, chi, zeta }, twist: None }
}

fn simple(phi: u64, zeta: Root, twist: Option<TwistSpec>) -> FamilySpec {
    FamilySpec { p: 3, params: FamilyParams::Simple { v: 1, phi, zeta }, twist }
}

fn run_verdict(spec: &FamilySpec, stable: &mut Vec<(String, bool)>) -> Verdict {
    let fam = Family::new(spec).expect("valid family");
    let v = verdict(&fam, &IntegralConfig::default_for(spec), MAX_LEVEL).expect("verdict");
    stable.push((format!("{:?}", spec.params), v.report.stable));
    v
}

fn show(c: &CycNum) -> String {
    c.to_string()
}

fn criterion1() -> Outcome {
    let fam = Family::new(&middle(2, 0, Root::one())).unwrap();
    let t = Instant::now();
    let scan = support_scan(&fam, -6, 6, 3, -2, None).unwrap();
    let el = t.elapsed();
    let expect: BTreeSet<i32> = [0, 2].into();
    Outcome::new(
        1,
        "middle support lemma",
        scan.support == expect && el <= MIDDLE_SCAN_BUDGET,
        format!("support {:?} (expected {{0, 2}}) in {:.1}s", scan.support, el.as_secs_f64()),
    )
}

fn criterion2() -> Outcome {
    // X⁴ − X² − 1 over F_3.
    let irreducible = is_irreducible(&[2, 0, 2, 0, 1], 3);
    let fam = Family::new(&biquadratic(0, Root::one())).unwrap();
    let t = Instant::now();
    let scan = support_scan(&fam, -6, 6, 2, -2, None).unwrap();
    let el = t.elapsed();
    let allowed: BTreeSet<i32> = [-2, -1, 0].into();
    Outcome::new(
        2,
        "biquadratic support lemma",
        irreducible && scan.support.is_subset(&allowed) && el <= BIQUADRATIC_SCAN_BUDGET,
        format!("irreducible {irreducible}, support {:?} in {:.1}s", scan.support, el.as_secs_f64()),
    )
}

/// `χ(σ_f)` and `χ(−d + σ_f)` for the middle family with `d = 1`.
fn chi_sigma(fam: &Family) -> (Root, Root) {
    let p = fam.p;
    let sigma = fam.field.elem(&[0, 1]);
    let shifted = fam.field.elem(&[(p - 1) % p, 1]);
    (fam.chi.eval(&sigma).unwrap(), fam.chi.eval(&shifted).unwrap())
}

fn criterion3(stable: &mut Vec<(String, bool)>) -> Outcome {
    let mut bad_omega = 0;
    let mut bad_transfer = Vec::new();
    let mut mismatches = Vec::new();
    let mut signature = true;
    for chi in 0..3u64 {
        for e in 0..12 {
            let zeta = Root::new(e, 12);
            let spec = middle(2, chi, zeta);
            let fam = Family::new(&spec).unwrap();
            let (cs, _) = chi_sigma(&fam);
            let v = run_verdict(&spec, stable);
            if v.central_trivial != (zeta.pow(2) == cs) {
                bad_omega += 1;
            }
            if v.transfer != v.central_trivial {
                bad_transfer.push((chi, e));
            }
            if !v.criterion_match {
                mismatches.push((chi, e));
                signature &= chi != 0 && v.central_trivial && v.report.total.is_zero();
            }
        }
    }
    signature &= bad_omega == 0 && !mismatches.is_empty() && bad_transfer == mismatches;
    let mut o = Outcome::new(
        3,
        "middle verdict grid (p=2, 3 chi x mu_12)",
        bad_omega == 0 && bad_transfer.is_empty() && mismatches.is_empty(),
        format!(
            "omega formula violations {bad_omega}; transfer != (omega trivial) at {bad_transfer:?}; criterion mismatches at (chi, exponent of zeta_12) {mismatches:?}"
        ),
    );
    o.signature = signature;
    o
}

fn criterion4(stable: &mut Vec<(String, bool)>) -> Outcome {
    let mut pass = true;
    let mut signature = true;
    let mut detail = Vec::new();
    for (p, chis, n) in [(2u32, vec![0u64, 1, 2], 12u64), (3, vec![0, 2, 4], 8)] {
        for chi in chis {
            for e in 0..n {
                let zeta = Root::new(e as i64, n);
                let spec = middle(p, chi, zeta);
                let fam = Family::new(&spec).unwrap();
                if !central_character(&fam).unwrap().is_trivial() {
                    continue;
                }
                let (_, cd) = chi_sigma(&fam);
                let v = run_verdict(&spec, stable);
                let t0 = v.report.t_k(0);
                let t1 = v.report.t_k(2);
                let ratio = t1.mul_root(&cd.inv()).unwrap();
                let ok = if chi == 0 {
                    t0.is_positive_rational() && t1.is_positive_rational()
                } else {
                    let first = t0.is_zero() && ratio.is_positive_rational();
                    signature &= !t0.is_zero() && t0.add(&t1).unwrap().is_zero() && ratio.is_positive_rational();
                    first
                };
                if chi == 0 {
                    signature &= ok;
                }
                pass &= ok;
                detail.push(format!("p={p} chi={chi} zeta={zeta}: T0={} T1={} T1/chi(-d+sigma)={}", show(&t0), show(&t1), show(&ratio)));
            }
        }
    }
    let mut o = Outcome::new(4, "middle T_k structure", pass, detail.join("; "));
    o.signature = signature;
    o
}

fn criterion5(stable: &mut Vec<(String, bool)>) -> Outcome {
    // ζ with trivial ω for χ_M of exponent 2: ω(ϖ) = ζ⁻¹ χ_M(σ), read off at ζ = 1.
    let probe = Family::new(&biquadratic(2, Root::one())).unwrap();
    let zeta2 = central_character(&probe).unwrap().at_pi;
    let cases = [(biquadratic(0, Root::one()), true), (biquadratic(2, zeta2), true), (biquadratic(0, Root::minus_one()), false)];
    let mut pass = true;
    let mut signature = true;
    let mut detail = Vec::new();
    for (spec, omega_trivial) in cases {
        let v = run_verdict(&spec, stable);
        let ok = v.central_trivial == omega_trivial
            && v.criterion_match
            && if omega_trivial { v.lambda0_nonzero && v.transfer } else { !v.transfer };
        pass &= ok;
        let chi_trivial = matches!(spec.params, FamilyParams::Biquadratic { chi: 0, .. });
        signature &= if chi_trivial { ok } else { v.central_trivial && v.report.total.is_zero() && v.report.stable };
        detail.push(format!(
            "{:?}: omega trivial {}, Lambda0 = {}, transfer {}, match {}",
            spec.params, v.central_trivial, show(&v.report.total), v.transfer, v.criterion_match
        ));
    }
    let mut o = Outcome::new(5, "biquadratic verdict", pass, detail.join("; "));
    o.signature = signature;
    o
}

fn criterion6(stable: &mut Vec<(String, bool)>) -> Outcome {
    let mut transfers = Vec::new();
    let mut all_match = true;
    for e in 0..8 {
        let v = run_verdict(&simple(0, Root::new(e, 8), None), stable);
        all_match &= v.criterion_match;
        if v.transfer {
            transfers.push(e);
        }
    }
    Outcome::new(
        6,
        "simple criterion (p=3, v=1, zeta in mu_8)",
        transfers == vec![0, 4] && all_match,
        format!("transfer at zeta_8 exponents {transfers:?} (expected [0, 4]), all criterion_match {all_match}"),
    )
}

fn criterion7(stable: &mut Vec<(String, bool)>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for mu in [0u64, 1] {
        let tw = TwistSpec { mu, at_pi: Root::minus_one() };
        let mut transfers = Vec::new();
        for e in 0..8 {
            let spec = simple(0, Root::new(e, 8), Some(tw.clone()));
            let fam = Family::new(&spec).unwrap();
            let ev = eta_minus_v_pi(&fam).unwrap();
            let re_spec = twist_reparametrize(&spec).unwrap();
            let zeta_ok = re_spec.zeta() == spec.zeta().mul(&ev.inv());
            let direct = run_verdict(&spec, stable);
            let re = run_verdict(&re_spec, stable);
            let predicted = spec.zeta() == ev || spec.zeta() == ev.mul(&Root::minus_one());
            let ok = zeta_ok
                && direct.transfer == re.transfer
                && direct.transfer == predicted
                && direct.criterion_match
                && re.criterion_match;
            pass &= ok;
            if direct.transfer {
                transfers.push(e);
            }
        }
        detail.push(format!("eta_mu exponent {mu}: transfer at zeta_8 exponents {transfers:?}"));
    }
    Outcome::new(7, "twisted simple (eta(varpi) = -1)", pass, detail.join("; "))
}

fn criterion8() -> Outcome {
    let mid = Family::new(&middle(2, 1, Root::new(1, 3))).unwrap();
    let biq = Family::new(&biquadratic(1, Root::one())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut detail = Vec::new();
    let mut pass = true;
    for case in ProofCase::ALL {
        let fam = if case.family() == mid.kind() { &mid } else { &biq };
        let mut held = 0;
        for _ in 0..PROOF_DRAWS {
            let params = sample_params(fam, case, &mut rng).unwrap();
            if verify_proof_decomposition(fam, case, &params).unwrap() {
                held += 1;
            }
        }
        pass &= held == PROOF_DRAWS;
        detail.push(format!("{case:?} {held}/{PROOF_DRAWS}"));
    }
    Outcome::new(8, "proof-identity suite", pass, detail.join(", "))
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let int = |x: i64| PAdicNum::from_int(2, x, 2);
    let mut agree = 0;
    for _ in 0..SOLVER_SYSTEMS {
        let n = rng.gen_range(1..=3usize);
        let mut sys = CongruenceSystem::new(2, n);
        for i in 0..n {
            let mut e = vec![PAdicNum::zero(2); n];
            e[i] = int(1);
            sys.push(e, PAdicNum::zero(2), 0);
        }
        for _ in 0..rng.gen_range(1..=4) {
            let coeffs: Vec<PAdicNum> = (0..n).map(|_| int(rng.gen_range(0..4))).collect();
            sys.push(coeffs, int(rng.gen_range(0..4)), rng.gen_range(0..=2));
        }
        let points: Vec<Vec<PAdicNum>> = (0..4i64.pow(n as u32))
            .map(|code| (0..n).map(|i| int((code / 4i64.pow(i as u32)) % 4)).collect())
            .collect();
        let brute: Vec<bool> = points.iter().map(|w| sys.satisfied_by(w).unwrap()).collect();
        let solved: Vec<bool> = match solve_congruences(&sys).unwrap() {
            None => vec![false; points.len()],
            Some(sol) => points.iter().map(|w| sol.contains(w).unwrap()).collect(),
        };
        agree += (brute == solved) as usize;
    }
    Outcome::new(
        9,
        "solver oracle (p=2, precision 2)",
        agree == SOLVER_SYSTEMS,
        format!("{agree}/{SOLVER_SYSTEMS} systems agree with enumeration over (Z/4)^n"),
    )
}

fn criterion10() -> Outcome {
    let fams: Vec<Arc<Family>> = [
        simple(1, Root::new(1, 8), None),
        FamilySpec { p: 2, params: FamilyParams::Simple { v: 1, phi: 0, zeta: Root::new(3, 8) }, twist: None },
        middle(2, 2, Root::new(1, 6)),
        middle(3, 4, Root::new(3, 8)),
        biquadratic(5, Root::new(1, 5)),
    ]
    .iter()
    .map(|s| Family::new(s).unwrap())
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut fails = [0usize; 6];
    let names = ["bessel", "whittaker-N", "whittaker-J", "central", "psi_beta", "psi_F"];
    for i in 0..PROPERTY_SAMPLES {
        let fam = &fams[i % fams.len()];
        let (p, prec) = (fam.p, fam.prec);
        // Bessel: J(1) = 1 and J(j1 j j2) = Λ(j1) J(j) Λ(j2).
        let (j1, ..) = random_j(fam, -1, 1, &mut rng).unwrap();
        let (j, ..) = random_j(fam, -1, 1, &mut rng).unwrap();
        let (j2, ..) = random_j(fam, -1, 1, &mut rng).unwrap();
        let b = |m: &Mat4| bessel_value(fam, m).unwrap();
        if !b(&Mat4::identity(p, prec)).is_one() || b(&j1.mul(&j).mul(&j2)) != b(&j1).mul(&b(&j)).mul(&b(&j2)) {
            fails[0] += 1;
        }
        // Whittaker: W(u g) = ψ₄(u) W(g) and W(g j) = W(g) Λ(j).
        let g = if i % 2 == 0 {
            random_unipotent(p, prec, -2, &mut rng).mul(&j)
        } else {
            random_shalika_point(fam, -3, 1, -2, &mut rng)
        };
        let u = random_unipotent(p, prec, -2, &mut rng);
        let w = whittaker_root(fam, &g, None).unwrap();
        if whittaker_root(fam, &u.mul(&g), None).unwrap() != w.map(|x| x.mul(&psi4(&u).unwrap())) {
            fails[1] += 1;
        }
        if whittaker_root(fam, &g.mul(&j2), None).unwrap() != w.map(|x| x.mul(&b(&j2))) {
            fails[2] += 1;
        }
        // Central: W(g t) = W(g) Λ(t).
        let t = random_unit(p, prec, &mut rng).shift(rng.gen_range(-1..=1));
        let scalar = Mat4::identity(p, prec).scale(&t);
        if whittaker_root(fam, &g.scale(&t), None).unwrap() != w.map(|x| x.mul(&b(&scalar))) {
            fails[3] += 1;
        }
        // ψ_β multiplicativity on U¹.
        let z1 = random_u(fam, 1, &mut rng);
        let z2 = random_u(fam, 1, &mut rng);
        if fam.psi_beta(&z1.mul(&z2)).unwrap() != fam.psi_beta(&z1).unwrap().mul(&fam.psi_beta(&z2).unwrap()) {
            fails[4] += 1;
        }
        // ψ_F additivity.
        let pp = fam.p;
        let a = random_padic(pp, max_precision(pp), rng.gen_range(-6..3), &mut rng);
        let c = random_padic(pp, max_precision(pp), rng.gen_range(-6..3), &mut rng);
        if psi_f(&(a + c)).unwrap() != psi_f(&a).unwrap().mul(&psi_f(&c).unwrap()) {
            fails[5] += 1;
        }
    }
    let detail: Vec<String> = names.iter().zip(fails).map(|(n, f)| format!("{n} {}/{PROPERTY_SAMPLES}", PROPERTY_SAMPLES - f)).collect();
    Outcome::new(10, "equivariance and property suites", fails.iter().all(|&f| f == 0), detail.join(", "))
}

fn criterion11(stable: &[(String, bool)]) -> Outcome {
    let unstable: Vec<&String> = stable.iter().filter(|(_, s)| !s).map(|(n, _)| n).collect();
    Outcome::new(
        11,
        "stability of every verdict report",
        unstable.is_empty(),
        format!("{} reports, unstable: {unstable:?}", stable.len()),
    )
}

fn main() {
    let start = Instant::now();
    let mut stable = Vec::new();
    let mut outcomes = vec![criterion1(), criterion2()];
    outcomes.push(criterion3(&mut stable));
    outcomes.push(criterion4(&mut stable));
    outcomes.push(criterion5(&mut stable));
    outcomes.push(criterion6(&mut stable));
    outcomes.push(criterion7(&mut stable));
    outcomes.push(criterion8());
    outcomes.push(criterion9());
    outcomes.push(criterion10());
    outcomes.push(criterion11(&stable));
    let mut ok = true;
    for o in &outcomes {
        let known = KNOWN_DISCREPANCIES.iter().find(|(id, _)| *id == o.id);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:>2}: {} | {}", o.id, o.title, o.detail);
        match known {
            None => ok &= o.pass,
            Some((_, reason)) => {
                if o.pass {
                    println!("        unexpected pass of a recorded discrepancy: {reason}");
                    ok = false;
                } else if o.signature {
                    println!("        recorded discrepancy, failure matches its signature: {reason}");
                } else {
                    println!("        recorded discrepancy, but the failure differs from its signature: {reason}");
                    ok = false;
                }
            }
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if !ok {
        std::process::exit(1);
    }
}
