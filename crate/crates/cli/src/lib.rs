//! Batch experiments, single-run demos, claim verification and rotation
//! design tables on top of the `qcausal` library.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qcausal::geom::{candidate_unitaries, CornerStateForm};
use qcausal::oracle::{registry, verify_claim, ClaimReport};
use qcausal::random;
use qcausal::scheme::{DecisionRule, FlowNode, Tolerances, TraceEntry, VDesign, DEFAULT_GAP, EXACT_TOL, SAMPLED_TOL};
use qcausal::{discriminate, BlackBoxSystem, DiscriminatorConfig, Scenario, Shots, StatP, Verdict, VerdictKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable consulted for the default root seed.
pub const SEED_ENV: &str = "QCAUSAL_SEED";

/// Declared generation law, echoed into every report.
pub const SAMPLING_LAW: &str = "common: pure with prob 1/2 (Bell magnitudes normalized uniform, phases uniform), \
else mixture of 2-4 pure states with normalized uniform weights; causal: phi0~U[0,pi/2], gamma1,gamma2,theta~U[0,2pi), \
early state I/2";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qcausal::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// How the shot budget maps to measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShotReading {
    /// `shots_per_axis` pairs on each of the three axes.
    PerAxis,
    /// `shots_per_axis` pairs for the whole estimate, split evenly over the axes.
    Total,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_common: usize,
    pub n_causal: usize,
    pub shots_per_axis: u32,
    pub shot_reading: ShotReading,
    /// Comparison tolerance; `None` picks 1e-9 in exact mode and 0.1 when sampling.
    pub tolerance: Option<f64>,
    pub gap: f64,
    pub seed: u64,
    pub mode: Mode,
    pub repeats: u32,
    /// Directory receiving `rows.csv` and `summary.json`.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_common: 10_000,
            n_causal: 10_000,
            shots_per_axis: 200,
            shot_reading: ShotReading::PerAxis,
            tolerance: None,
            gap: DEFAULT_GAP,
            seed: default_seed(),
            mode: Mode::Sampled,
            repeats: 5,
            output: None,
        }
    }
}

/// Root seed from [`SEED_ENV`], or 0.
pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n_common == 0 || self.n_causal == 0 {
            return Err(CliError::Config("scenario counts must be at least 1".into()));
        }
        if self.repeats == 0 {
            return Err(CliError::Config("repeats must be at least 1".into()));
        }
        if self.mode == Mode::Sampled && self.per_axis_shots() == 0 {
            return Err(CliError::Config("shots per axis must be at least 1".into()));
        }
        self.discriminator().validate()?;
        Ok(())
    }

    fn per_axis_shots(&self) -> u32 {
        match self.shot_reading {
            ShotReading::PerAxis => self.shots_per_axis,
            ShotReading::Total => self.shots_per_axis / 3,
        }
    }

    pub fn effective_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(match self.mode {
            Mode::Exact => EXACT_TOL,
            Mode::Sampled => SAMPLED_TOL,
        })
    }

    pub fn discriminator(&self) -> DiscriminatorConfig {
        let shots = match self.mode {
            Mode::Exact => Shots::Exact,
            Mode::Sampled => Shots::PerAxis(self.per_axis_shots()),
        };
        DiscriminatorConfig { shots, tol: Tolerances::uniform(self.effective_tolerance()), gap: self.gap }
    }

    pub fn total(&self) -> usize {
        self.n_common + self.n_causal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Common,
    Causal,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Common => "common",
            Kind::Causal => "causal",
        }
    }

    pub fn truth(self) -> VerdictKind {
        match self {
            Kind::Common => VerdictKind::CommonCause,
            Kind::Causal => VerdictKind::Causality,
        }
    }
}

/// Per-scenario rng: the root seed with a stream chosen by repeat and scenario id.
pub fn scenario_rng(seed: u64, repeat: u32, id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(repeat) << 32) | id as u64);
    rng
}

pub fn generate_scenario(kind: Kind, rng: &mut ChaCha8Rng) -> qcausal::Result<Scenario> {
    match kind {
        Kind::Common => Scenario::common_cause(random::common_cause(rng)),
        Kind::Causal => Scenario::direct_cause(random::canonical_unitary(rng).realize()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRow {
    pub scenario_id: usize,
    pub repeat: u32,
    pub kind: Kind,
    pub verdict: String,
    pub correct: bool,
    pub branch: String,
    pub rule: String,
    /// Outcome pairs drawn in total; 0 in exact mode.
    pub shots: u64,
    pub p11: String,
    pub p22: String,
    pub p33: String,
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn shots_used(verdict: &Verdict) -> u64 {
    verdict
        .trace
        .iter()
        .filter_map(|e| {
            e.shots.per_axis().filter(|_| !e.outcomes.is_empty()).map(|n| u64::from(n) * e.outcomes.len() as u64)
        })
        .sum()
}

fn row_for(id: usize, repeat: u32, kind: Kind, v: &Verdict) -> ScenarioRow {
    let p = v.estimates().first().copied().unwrap_or_default();
    ScenarioRow {
        scenario_id: id,
        repeat,
        kind,
        verdict: v.kind.label().to_string(),
        correct: v.kind == kind.truth(),
        branch: v.branch_signature(),
        rule: v.rule.label().to_string(),
        shots: shots_used(v),
        p11: fixed(p.c11),
        p22: fixed(p.c22),
        p33: fixed(p.c33),
    }
}

pub fn run_scenario(cfg: &ExperimentConfig, repeat: u32, id: usize) -> CliResult<ScenarioRow> {
    let kind = if id < cfg.n_common { Kind::Common } else { Kind::Causal };
    let mut rng = scenario_rng(cfg.seed, repeat, id);
    let scenario = generate_scenario(kind, &mut rng)?;
    let mut sys = BlackBoxSystem::new(scenario, rng);
    let verdict = discriminate(&mut sys, &cfg.discriminator())?;
    Ok(row_for(id, repeat, kind, &verdict))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatSummary {
    pub repeat: u32,
    pub failures: usize,
    pub failures_common: usize,
    pub failures_causal: usize,
    pub failure_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub sampling_law: &'static str,
    pub fingerprint: String,
    pub scenarios_per_repeat: usize,
    pub repeats: Vec<RepeatSummary>,
    pub mean_failures: f64,
    pub std_failures: f64,
    pub mean_failure_rate: f64,
    /// Normal-approximation 95% half-width of the pooled failure rate.
    pub ci_half_width: f64,
    /// Runs in which a sampled `P` fell outside both tetrahedra.
    pub projected_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ScenarioRow>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn csv_bytes(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.into_inner().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn summary_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(&self.summary)? + "\n")
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let rows = dir.join("rows.csv");
        fs::write(&rows, self.csv_bytes()?).map_err(io_err(&rows))?;
        let summary = dir.join("summary.json");
        fs::write(&summary, self.summary_json()?).map_err(io_err(&summary))?;
        Ok(())
    }
}

/// Hash of the crate version and the full configuration.
pub fn fingerprint(cfg: &ExperimentConfig) -> CliResult<String> {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(serde_json::to_vec(cfg)?);
    Ok(hex::encode(h.finalize()))
}

pub fn summarize(cfg: &ExperimentConfig, rows: &[ScenarioRow]) -> CliResult<Summary> {
    let n = cfg.total();
    let repeats: Vec<RepeatSummary> = (0..cfg.repeats)
        .map(|r| {
            let mine = rows.iter().filter(|row| row.repeat == r);
            let (mut fc, mut fd) = (0, 0);
            for row in mine.filter(|row| !row.correct) {
                match row.kind {
                    Kind::Common => fc += 1,
                    Kind::Causal => fd += 1,
                }
            }
            RepeatSummary {
                repeat: r,
                failures: fc + fd,
                failures_common: fc,
                failures_causal: fd,
                failure_rate: (fc + fd) as f64 / n as f64,
            }
        })
        .collect();
    let k = repeats.len() as f64;
    let mean = repeats.iter().map(|r| r.failures as f64).sum::<f64>() / k;
    let var = if repeats.len() > 1 {
        repeats.iter().map(|r| (r.failures as f64 - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let rate = mean / n as f64;
    let pooled = n as f64 * k;
    Ok(Summary {
        config: cfg.clone(),
        sampling_law: SAMPLING_LAW,
        fingerprint: fingerprint(cfg)?,
        scenarios_per_repeat: n,
        repeats,
        mean_failures: mean,
        std_failures: var.sqrt(),
        mean_failure_rate: rate,
        ci_half_width: 1.96 * (rate * (1.0 - rate) / pooled).sqrt(),
        projected_runs: rows.iter().filter(|r| r.branch.contains('*')).count(),
    })
}

/// Run every scenario of every repeat; rows come back ordered by
/// `(repeat, scenario_id)` regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<ExperimentReport> {
    cfg.validate()?;
    let n = cfg.total();
    let jobs: Vec<(u32, usize)> = (0..cfg.repeats).flat_map(|r| (0..n).map(move |id| (r, id))).collect();
    let rows = jobs.par_iter().map(|&(r, id)| run_scenario(cfg, r, id)).collect::<CliResult<Vec<_>>>()?;
    let summary = summarize(cfg, &rows)?;
    Ok(ExperimentReport { rows, summary })
}

/// Fixed scenarios for demonstrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fixture {
    /// Equal mixture of the first two Bell states: `P = (0, 0, 1)` with no off-diagonal corner terms.
    CornerMix,
    /// The direct cause `diag(e^{iπ/4}, e^{−iπ/4})` with the same `P`.
    CornerTwin,
}

impl Fixture {
    pub fn scenario(self) -> qcausal::Result<(Kind, Scenario)> {
        match self {
            Fixture::CornerMix => {
                Ok((Kind::Common, Scenario::common_cause(CornerStateForm::new(0.5, 0.0, 0.0)?.realize())?))
            }
            Fixture::CornerTwin => {
                let u = qcausal::CanonicalUnitary::new(0.0, std::f64::consts::FRAC_PI_4, 0.0, 0.0);
                Ok((Kind::Causal, Scenario::direct_cause(u.realize())?))
            }
        }
    }
}

fn describe_node(node: &FlowNode) -> String {
    match node {
        FlowNode::Measure => "measure P in identity frames".into(),
        FlowNode::RegionCheck { region, projected } => {
            let tail = if *projected { " (outside both tetrahedra, resolved to nearer)" } else { "" };
            format!("region {}{tail}", region.label())
        }
        FlowNode::ApplyV0 => "P at (0,0,1): apply V0 to both frames and re-measure".into(),
        FlowNode::Candidates { round, mixture, clamped } => {
            let p = mixture.p;
            let tail = if *clamped { ", clamped into TDC" } else { "" };
            format!(
                "round {round}: candidate unitaries for p = ({:.4}, {:.4}, {:.4}, {:.4}){tail}",
                p[0], p[1], p[2], p[3]
            )
        }
        FlowNode::Probe { round, class, rotation } => format!(
            "round {round}: class {class} rotation psi={:.4} chi={:.4} phi={:.4}",
            rotation.psi, rotation.chi, rotation.phi
        ),
        FlowNode::Transfer { class } => {
            format!("P^{class} at (0,0,1): keep V^{class}, apply transfer pair and re-measure")
        }
        FlowNode::Decide { rule, verdict } => {
            let why = match rule {
                DecisionRule::Region => "by region",
                DecisionRule::ThirdAndEqual => "by third entry 1 with equal first two entries",
                DecisionRule::ThirdAfterTransfer => "by third entry 1 after transfer",
            };
            format!("verdict {verdict} ({why})")
        }
    }
}

pub fn format_trace_entry(e: &TraceEntry) -> String {
    let mut s = describe_node(&e.node);
    if let Some(p) = e.estimate {
        let _ = write!(s, " | shots={} P={p}", e.shots);
    }
    s
}

pub fn format_trace(v: &Verdict) -> String {
    let mut out = String::new();
    for (i, e) in v.trace.iter().enumerate() {
        let _ = writeln!(out, "{:>2}. {}", i + 1, format_trace_entry(e));
    }
    out
}

/// Human-readable run of one scenario.
///
/// `repeat` and `id` select the same rng stream an experiment row would use.
pub fn simulate(
    kind: Kind,
    fixture: Option<Fixture>,
    cfg: &DiscriminatorConfig,
    seed: u64,
    repeat: u32,
    id: usize,
) -> CliResult<(Kind, Verdict)> {
    let mut rng = scenario_rng(seed, repeat, id);
    let (kind, scenario) = match fixture {
        Some(f) => f.scenario()?,
        None => (kind, generate_scenario(kind, &mut rng)?),
    };
    let mut sys = BlackBoxSystem::new(scenario, rng);
    Ok((kind, discriminate(&mut sys, cfg)?))
}

/// Claim ids to run for a `verify` request.
pub fn resolve_claims(ids: &[String]) -> CliResult<Vec<&'static str>> {
    if ids.is_empty() || ids.iter().any(|i| i == "all") {
        return Ok(registry().iter().map(|c| c.id).collect());
    }
    ids.iter()
        .map(|id| {
            registry()
                .iter()
                .find(|c| c.id == id)
                .map(|c| c.id)
                .ok_or_else(|| CliError::Core(qcausal::Error::UnknownClaim(id.clone())))
        })
        .collect()
}

pub fn verify(ids: &[&str], samples: usize, seed: u64) -> CliResult<Vec<ClaimReport>> {
    ids.par_iter()
        .enumerate()
        .map(|(i, id)| {
            let mut rng = scenario_rng(seed, 0, i);
            Ok(verify_claim(id, samples, &mut rng)?)
        })
        .collect()
}

/// One line per class: `k ψ χ φ r ω` and the common target.
pub fn design_table(p: &StatP, gap: f64) -> CliResult<String> {
    let cands = candidate_unitaries(p, SAMPLED_TOL)?;
    let design = VDesign::new(&cands, gap)?;
    let mut out = String::new();
    let m = cands.mixture.p;
    let _ = writeln!(out, "mixture p = ({:.6}, {:.6}, {:.6}, {:.6})", m[0], m[1], m[2], m[3]);
    let _ = writeln!(out, "target P_V = {}", design.target());
    let _ = writeln!(out, "{:>2} {:>10} {:>10} {:>10} {:>10} {:>10}", "k", "psi", "chi", "phi", "r", "omega");
    for (k, d) in design.designs.iter().enumerate() {
        let r = d.rotation;
        let _ = writeln!(
            out,
            "{:>2} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            k + 1,
            r.psi,
            r.chi,
            r.phi,
            d.r,
            d.omega
        );
    }
    Ok(out)
}
