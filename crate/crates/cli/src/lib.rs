//! Run configurations, the command dispatcher, parameter grids, and the JSON
//! reports written by the `shalika` binary.
//!
//! A configuration names one command and one family member (or a grid of
//! them). Reports echo the effective configuration, carry exact cyclotomic
//! values, and are byte-identical across runs and worker counts apart from
//! the `timing` field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shalika_core::arith::cyclo::Root;
use shalika_core::arith::padic::max_precision;
use shalika_core::error::Error as CoreError;
use shalika_core::shalika::{lambda0, support_scan, IntegralConfig, IntegralReport, RWeight, SupportReport};
use shalika_core::strata::family::{Family, FamilyKind, FamilyParams, FamilySpec, TwistSpec};
use shalika_core::strata::proof::{sample_params, verify_proof_decomposition, ProofCase};
use shalika_core::verdict::{
    central_character, default_max_level, l_factor, verdict, CentralCharacter, LFactor, Verdict,
};
use std::collections::BTreeSet;
use std::time::Instant;
use thiserror::Error;

/// Schema tag of configurations and reports.
pub const SCHEMA: &str = "shalika-verifier/1";

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "SHALIKA_JOBS";

/// Default number of draws per case for `verify-identities`.
pub const DEFAULT_SAMPLES: u64 = 100;

/// Default `k` window of `scan`.
pub const DEFAULT_K_WINDOW: (i32, i32) = (-6, 6);

/// Errors of the driver, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum RunError {
    /// The configuration is not valid JSON or violates the schema.
    #[error("malformed configuration: {0}")]
    Config(String),
    /// The parameters are rejected by the core library.
    #[error(transparent)]
    Core(#[from] CoreError),
    /// Reading or writing a file failed.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// The subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Central character, stable `Λ₀` and the transfer verdict.
    Verdict,
    /// Support of the Whittaker function on Shalika points, by power `k`.
    Scan,
    /// The stable period `Λ₀` with its partial sums.
    Lambda0,
    /// Random checks of the closed-form proof decompositions.
    VerifyIdentities,
    /// The exterior-square factor at `q^{s₀} = ±1`.
    Lfactor,
    /// The central character.
    CentralChar,
    /// Verdicts over a parameter grid.
    Grid,
}

impl Command {
    /// The name used on the command line and in JSON.
    pub fn name(self) -> &'static str {
        match self {
            Command::Verdict => "verdict",
            Command::Scan => "scan",
            Command::Lambda0 => "lambda0",
            Command::VerifyIdentities => "verify-identities",
            Command::Lfactor => "lfactor",
            Command::CentralChar => "central-char",
            Command::Grid => "grid",
        }
    }
}

/// Parameter ranges of a grid. Omitted axes keep the base value; an empty
/// list makes the grid empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// The family member whose fields the axes replace.
    pub base: FamilySpec,
    /// Exponents of the residue character (`φ` for the simple family).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<u64>>,
    /// Explicit values of `ζ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<Root>>,
    /// All of `μ_n` for `ζ`, in exponent order. Exclusive with `zeta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_roots: Option<u64>,
    /// Twists; `null` entries mean untwisted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<Option<TwistSpec>>>,
}

impl GridSpec {
    /// The grid points in lexicographic order (`chi`, then `ζ`, then twist).
    pub fn points(&self) -> Result<Vec<FamilySpec>, RunError> {
        let base = &self.base;
        let (base_chi, base_zeta) = match base.params {
            FamilyParams::Simple { phi, zeta, .. } => (phi, zeta),
            FamilyParams::Middle { chi, zeta, .. } | FamilyParams::Biquadratic { chi, zeta, .. } => (chi, zeta),
        };
        let chis = self.chi.clone().unwrap_or_else(|| vec![base_chi]);
        let zetas = match (&self.zeta, self.zeta_roots) {
            (Some(_), Some(_)) => {
                return Err(RunError::Config("grid: `zeta` and `zeta_roots` are exclusive".into()))
            }
            (Some(z), None) => z.clone(),
            (None, Some(0)) => return Err(RunError::Config("grid: `zeta_roots` must be positive".into())),
            (None, Some(n)) => (0..n).map(|e| Root::new(e as i64, n)).collect(),
            (None, None) => vec![base_zeta],
        };
        let twists = self.twists.clone().unwrap_or_else(|| vec![base.twist.clone()]);
        let mut out = Vec::new();
        for &chi in &chis {
            for &zeta in &zetas {
                for twist in &twists {
                    let params = match base.params {
                        FamilyParams::Simple { v, .. } => FamilyParams::Simple { v, phi: chi, zeta },
                        FamilyParams::Middle { c, d, .. } => FamilyParams::Middle { c, d, chi, zeta },
                        FamilyParams::Biquadratic { a, b, .. } => FamilyParams::Biquadratic { a, b, chi, zeta },
                    };
                    out.push(FamilySpec { p: base.p, params, twist: twist.clone() });
                }
            }
        }
        Ok(out)
    }
}

/// A run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must equal [`SCHEMA`].
    pub schema: String,
    /// The command.
    pub command: Command,
    /// The family member (all commands except `grid`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// The parameter grid (`grid` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Starting congruence level `M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    /// Highest level tried when the level-`M` and level-`(M+1)` sums differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_level: Option<u32>,
    /// Relative p-adic precision `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Torus exponent window `[r_min, r_max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_window: Option<(i32, i32)>,
    /// Power window `[k_min, k_max]` of `scan`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_window: Option<(i32, i32)>,
    /// Lower end `x ∈ P^{x_lo}` of the nilpotent window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_lo: Option<i32>,
    /// Weight of the torus exponents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_weight: Option<RWeight>,
    /// Draws per case of `verify-identities`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Seed of `verify-identities`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// A configuration for one family member with every option defaulted.
    pub fn new(command: Command, family: FamilySpec) -> Self {
        RunConfig {
            schema: SCHEMA.into(),
            command,
            family: Some(family),
            grid: None,
            level: None,
            max_level: None,
            precision: None,
            r_window: None,
            k_window: None,
            x_lo: None,
            r_weight: None,
            samples: None,
            seed: None,
        }
    }

    /// Parses a configuration. A missing `command` is taken from `command`;
    /// a present one must agree with it. A missing `schema` defaults to
    /// [`SCHEMA`].
    pub fn parse(text: &str, command: Option<Command>) -> Result<Self, RunError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| RunError::Config("the configuration must be a JSON object".into()))?;
        obj.entry("schema").or_insert_with(|| SCHEMA.into());
        if let Some(cmd) = command {
            match obj.get("command") {
                None => {
                    obj.insert("command".into(), cmd.name().into());
                }
                Some(v) if v.as_str() == Some(cmd.name()) => {}
                Some(v) => {
                    return Err(RunError::Config(format!(
                        "configuration command {v} does not match subcommand \"{}\"",
                        cmd.name()
                    )))
                }
            }
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Schema and shape checks, plus construction of every family involved so
    /// that invalid parameters are rejected before any computation.
    pub fn validate(&self) -> Result<(), RunError> {
        if self.schema != SCHEMA {
            return Err(RunError::Config(format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema)));
        }
        match self.command {
            Command::Grid => {
                let grid = self.grid.as_ref().ok_or_else(|| RunError::Config("`grid` requires a `grid` object".into()))?;
                if self.family.is_some() {
                    return Err(RunError::Config("`grid` takes `grid`, not `family`".into()));
                }
                for spec in grid.points()? {
                    self.build_family(&spec)?;
                }
            }
            _ => {
                if self.grid.is_some() {
                    return Err(RunError::Config(format!("`{}` does not take a `grid`", self.command.name())));
                }
                let spec = self.family()?;
                self.build_family(spec)?;
            }
        }
        if let (Some(l), Some(m)) = (self.level, self.max_level) {
            if m <= l {
                return Err(RunError::Config("`max_level` must exceed `level`".into()));
            }
        }
        if self.samples == Some(0) {
            return Err(RunError::Config("`samples` must be positive".into()));
        }
        Ok(())
    }

    fn family(&self) -> Result<&FamilySpec, RunError> {
        self.family
            .as_ref()
            .ok_or_else(|| RunError::Config(format!("`{}` requires a `family` object", self.command.name())))
    }

    fn build_family(&self, spec: &FamilySpec) -> Result<std::sync::Arc<Family>, RunError> {
        let prec = self.precision.unwrap_or_else(|| max_precision(spec.p));
        Ok(Family::with_precision(spec, prec)?)
    }

    fn integral_config(&self, spec: &FamilySpec, jobs: Option<usize>) -> IntegralConfig {
        let mut cfg = IntegralConfig::default_for(spec);
        if let Some(l) = self.level {
            cfg.level = l;
        }
        if let Some((a, b)) = self.r_window {
            cfg.r_min = a;
            cfg.r_max = b;
        }
        if let Some(x) = self.x_lo {
            cfg.x_lo = x;
        }
        if let Some(w) = self.r_weight {
            cfg.r_weight = w;
        }
        cfg.jobs = jobs;
        cfg
    }

    fn max_level_for(&self, spec: &FamilySpec, cfg: &IntegralConfig) -> u32 {
        self.max_level.unwrap_or_else(|| default_max_level(spec.p).max(cfg.level + 1))
    }
}

/// Level data of a period computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stability {
    /// Level-`M` and level-`(M+1)` sums agree exactly.
    pub stable: bool,
    /// The level `M` reported.
    pub level: u32,
}

impl Stability {
    fn of(rep: &IntegralReport) -> Self {
        Stability { stable: rep.stable, level: rep.config.level }
    }
}

/// Result of `scan`, with the comparison against the proven support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    /// The scan.
    pub scan: SupportReport,
    /// The support allowed by the support lemma of the family, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed: Option<BTreeSet<i32>>,
    /// `scan.support ⊆ allowed` (true when no bound is known).
    pub within_allowed: bool,
}

/// Tally of one proof case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTally {
    /// The case.
    pub case: ProofCase,
    /// Draws made.
    pub samples: u64,
    /// Draws for which the decomposition held.
    pub passed: u64,
}

/// Result of `verify-identities`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    /// The seed used.
    pub seed: u64,
    /// One entry per case of the configured family.
    pub cases: Vec<CaseTally>,
    /// Every draw held.
    pub all_hold: bool,
}

/// Result of `central-char`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralOutput {
    /// The central character.
    pub central: CentralCharacter,
    /// `ω ≡ 1`.
    pub trivial: bool,
}

/// One grid point: its family and either a verdict or an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    /// The family member.
    pub family: FamilySpec,
    /// The verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// The error, when the point failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Counts over a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSummary {
    /// Points in the grid.
    pub points: usize,
    /// Points with `criterion_match`.
    pub matches: usize,
    /// Points with a criterion mismatch.
    pub mismatches: usize,
    /// Points that raised an error.
    pub errors: usize,
    /// Points with `transfer`.
    pub transfers: usize,
}

/// Result of `grid`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridOutput {
    /// Reports in grid order.
    pub points: Vec<GridPoint>,
    /// Aggregate counts.
    pub summary: GridSummary,
}

/// The command output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Output {
    /// From `verdict`.
    Verdict(Box<Verdict>),
    /// From `scan`.
    Scan(ScanOutput),
    /// From `lambda0`.
    Lambda0(Box<IntegralReport>),
    /// From `verify-identities`.
    VerifyIdentities(IdentityTally),
    /// From `lfactor`.
    Lfactor(LFactor),
    /// From `central-char`.
    CentralChar(CentralOutput),
    /// From `grid`.
    Grid(GridOutput),
}

/// Wall-clock time of a run. The only field allowed to differ between runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Elapsed milliseconds.
    pub elapsed_ms: u64,
}

/// A report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// [`SCHEMA`].
    pub schema: String,
    /// The effective configuration.
    pub config: RunConfig,
    /// The command output.
    pub output: Output,
    /// Level data, for commands that compute a period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<Stability>,
    /// True when the result contradicts a closed-form prediction.
    pub discrepancy: bool,
    /// Timing.
    pub timing: Timing,
}

impl RunReport {
    /// Exit code: `2` on a discrepancy, else `0`.
    pub fn exit_code(&self) -> i32 {
        if self.discrepancy {
            2
        } else {
            0
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// The support allowed by the support lemmas: `{0, 2}` for the middle family
/// and `{−2, −1, 0}` for the biquadratic family.
pub fn allowed_support(kind: FamilyKind) -> Option<BTreeSet<i32>> {
    match kind {
        FamilyKind::Simple => None,
        FamilyKind::Middle => Some([0, 2].into()),
        FamilyKind::Biquadratic => Some([-2, -1, 0].into()),
    }
}

/// The proof cases belonging to a family.
pub fn cases_of(kind: FamilyKind) -> Vec<ProofCase> {
    ProofCase::ALL.iter().copied().filter(|c| c.family() == kind).collect()
}

/// Executes a validated configuration with `jobs` workers (`None` uses the
/// global pool).
pub fn run(config: &RunConfig, jobs: Option<usize>) -> Result<RunReport, RunError> {
    config.validate()?;
    let start = Instant::now();
    let mut stability = None;
    let mut discrepancy = false;
    let output = match config.command {
        Command::Verdict => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let cfg = config.integral_config(spec, jobs);
            let v = verdict(&fam, &cfg, config.max_level_for(spec, &cfg))?;
            stability = Some(Stability::of(&v.report));
            discrepancy = !v.criterion_match;
            Output::Verdict(Box::new(v))
        }
        Command::Scan => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let cfg = config.integral_config(spec, jobs);
            let (k_min, k_max) = config.k_window.unwrap_or(DEFAULT_K_WINDOW);
            let scan = support_scan(&fam, k_min, k_max, cfg.level, cfg.x_lo, jobs)?;
            let allowed = allowed_support(spec.kind());
            let within_allowed = allowed.as_ref().is_none_or(|a| scan.support.is_subset(a));
            discrepancy = !within_allowed;
            Output::Scan(ScanOutput { scan, allowed, within_allowed })
        }
        Command::Lambda0 => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let cfg = config.integral_config(spec, jobs);
            let rep = lambda0(&fam, &cfg)?;
            stability = Some(Stability::of(&rep));
            Output::Lambda0(Box::new(rep))
        }
        Command::VerifyIdentities => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let samples = config.samples.unwrap_or(DEFAULT_SAMPLES);
            let seed = config.seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut cases = Vec::new();
            for case in cases_of(spec.kind()) {
                let mut passed = 0;
                for _ in 0..samples {
                    let params = sample_params(&fam, case, &mut rng)?;
                    if verify_proof_decomposition(&fam, case, &params)? {
                        passed += 1;
                    }
                }
                cases.push(CaseTally { case, samples, passed });
            }
            let all_hold = cases.iter().all(|c| c.passed == c.samples);
            discrepancy = !all_hold;
            Output::VerifyIdentities(IdentityTally { seed, cases, all_hold })
        }
        Command::Lfactor => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let cfg = config.integral_config(spec, jobs);
            Output::Lfactor(l_factor(&fam, &cfg, config.max_level_for(spec, &cfg))?)
        }
        Command::CentralChar => {
            let spec = config.family()?;
            let fam = config.build_family(spec)?;
            let central = central_character(&fam)?;
            Output::CentralChar(CentralOutput { trivial: central.is_trivial(), central })
        }
        Command::Grid => {
            let grid = config.grid.as_ref().expect("validated");
            let out = run_grid(config, grid, jobs)?;
            discrepancy = out.summary.mismatches > 0;
            Output::Grid(out)
        }
    };
    Ok(RunReport {
        schema: SCHEMA.into(),
        config: config.clone(),
        output,
        stability,
        discrepancy,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64 },
    })
}

/// Verdicts at every grid point. Errors are recorded per point.
pub fn run_grid(config: &RunConfig, grid: &GridSpec, jobs: Option<usize>) -> Result<GridOutput, RunError> {
    let specs = grid.points()?;
    let one = |spec: &FamilySpec| -> Result<Verdict, RunError> {
        let fam = config.build_family(spec)?;
        let cfg = config.integral_config(spec, None);
        Ok(verdict(&fam, &cfg, config.max_level_for(spec, &cfg))?)
    };
    let eval = || -> Vec<GridPoint> {
        specs
            .par_iter()
            .map(|spec| match one(spec) {
                Ok(v) => GridPoint { family: spec.clone(), verdict: Some(v), error: None },
                Err(e) => GridPoint { family: spec.clone(), verdict: None, error: Some(e.to_string()) },
            })
            .collect()
    };
    let points = match jobs {
        None => eval(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| RunError::Config(format!("thread pool: {e}")))?
            .install(eval),
    };
    let mut summary = GridSummary { points: points.len(), ..GridSummary::default() };
    for pt in &points {
        match &pt.verdict {
            Some(v) => {
                if v.criterion_match {
                    summary.matches += 1;
                } else {
                    summary.mismatches += 1;
                }
                if v.transfer {
                    summary.transfers += 1;
                }
            }
            None => summary.errors += 1,
        }
    }
    Ok(GridOutput { points, summary })
}

/// The worker count: the explicit value, else [`JOBS_ENV`], else `None`.
pub fn resolve_jobs(explicit: Option<usize>) -> Result<Option<usize>, RunError> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var(JOBS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| RunError::Config(format!("{JOBS_ENV}={s:?} is not a worker count"))),
        Err(_) => Ok(None),
    }
}
