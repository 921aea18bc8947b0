use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcausal::quantum::PauliMixture;
use qcausal::scheme::{Tolerances, DEFAULT_GAP, EXACT_TOL, SAMPLED_TOL};
use qcausal::{DiscriminatorConfig, Shots, StatP};
use qcausal_cli::{
    default_seed, design_table, format_trace, resolve_claims, run_experiment, simulate, verify, CliError,
    ExperimentConfig, Fixture, Kind, Mode, ShotReading,
};

const EXIT_USAGE: u8 = 1;
const EXIT_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "qcausal", version, about = "Discriminate quantum common causes from direct causes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the discriminator on one scenario and print its trace.
    Simulate(SimulateArgs),
    /// Run a batch of random scenarios and report failure rates.
    Experiment(ExperimentArgs),
    /// Check registered claims against the brute-force oracle.
    Verify(VerifyArgs),
    /// Print the designed frame rotations for an observed P.
    DesignV(DesignArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "causal")]
    kind: Kind,
    /// Use a fixed scenario instead of a random one.
    #[arg(long, value_enum)]
    state: Option<Fixture>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 200)]
    shots: u32,
    /// Comparison tolerance; defaults to 1e-9 exact, 0.1 sampled.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GAP)]
    gap: f64,
    #[arg(long, env = "QCAUSAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Repeat index of the rng stream, as in experiment rows.
    #[arg(long, default_value_t = 0)]
    repeat: u32,
    /// Scenario id of the rng stream, as in experiment rows.
    #[arg(long, default_value_t = 0)]
    id: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON file with any subset of the configuration fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_common: Option<usize>,
    #[arg(long)]
    n_causal: Option<usize>,
    #[arg(long)]
    shots: Option<u32>,
    #[arg(long, value_enum)]
    shot_reading: Option<ShotReading>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    repeats: Option<u32>,
    /// Directory for rows.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Claim ids, or `all`.
    #[arg(default_value = "all")]
    claims: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "QCAUSAL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DesignInput {
    /// Observed P as `c11,c22,c33`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Option<Vec<f64>>,
    /// Pauli mixture as `p0,p1,p2,p3`.
    #[arg(long, value_delimiter = ',')]
    mixture: Option<Vec<f64>>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    input: DesignInput,
    #[arg(long, default_value_t = DEFAULT_GAP)]
    gap: f64,
}

fn report(err: &CliError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_USAGE)
}

fn cmd_simulate(a: SimulateArgs) -> ExitCode {
    let shots = match a.mode {
        Mode::Exact => Shots::Exact,
        Mode::Sampled => Shots::PerAxis(a.shots),
    };
    let tol = a.tol.unwrap_or(if a.mode == Mode::Exact { EXACT_TOL } else { SAMPLED_TOL });
    let cfg = DiscriminatorConfig { shots, tol: Tolerances::uniform(tol), gap: a.gap };
    match simulate(a.kind, a.state, &cfg, a.seed, a.repeat, a.id) {
        Ok((kind, v)) => {
            print!("{}", format_trace(&v));
            let correct = v.kind == kind.truth();
            println!("truth {} verdict {} correct {} branch {}", kind.label(), v.kind, correct, v.branch_signature());
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig { seed: default_seed(), ..ExperimentConfig::default() },
    };
    if let Some(v) = a.n_common {
        cfg.n_common = v;
    }
    if let Some(v) = a.n_causal {
        cfg.n_causal = v;
    }
    if let Some(v) = a.shots {
        cfg.shots_per_axis = v;
    }
    if let Some(v) = a.shot_reading {
        cfg.shot_reading = v;
    }
    if let Some(v) = a.tol {
        cfg.tolerance = Some(v);
    }
    if let Some(v) = a.gap {
        cfg.gap = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.mode {
        cfg.mode = v;
    }
    if let Some(v) = a.repeats {
        cfg.repeats = v;
    }
    if let Some(v) = &a.out {
        cfg.output = Some(v.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_experiment(a: ExperimentArgs) -> ExitCode {
    let cfg = match experiment_config(&a) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    let result = run_experiment(&cfg).and_then(|r| {
        if let Some(dir) = &cfg.output {
            r.write(dir)?;
        }
        Ok(r)
    });
    match result.and_then(|r| r.summary_json()) {
        Ok(json) => {
            print!("{json}");
            ExitCode::SUCCESS
        }
        Err(e @ CliError::Io { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(e) => report(&e),
    }
}

fn cmd_verify(a: VerifyArgs) -> ExitCode {
    let ids = match resolve_claims(&a.claims) {
        Ok(ids) => ids,
        Err(e) => return report(&e),
    };
    match verify(&ids, a.samples, a.seed) {
        Ok(reports) => {
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
        Err(e) => report(&e),
    }
}

fn cmd_design(a: DesignArgs) -> ExitCode {
    let p = match (&a.input.p, &a.input.mixture) {
        (Some(p), _) if p.len() != 3 => return report(&CliError::Config("--p takes c11,c22,c33".into())),
        (_, Some(m)) if m.len() != 4 => return report(&CliError::Config("--mixture takes p0,p1,p2,p3".into())),
        (Some(p), _) => StatP::new(p[0], p[1], p[2]),
        (None, Some(m)) => match PauliMixture::new([m[0], m[1], m[2], m[3]], 1e-9) {
            Ok(mix) => {
                let v = qcausal::geom::TDC_VERTICES;
                StatP::from_array(std::array::from_fn(|i| (0..4).map(|j| mix.p[j] * v[j][i]).sum()))
            }
            Err(e) => return report(&e.into()),
        },
        (None, None) => unreachable!("clap enforces one input"),
    };
    match design_table(&p, a.gap) {
        Ok(table) => {
            print!("{table}");
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Verify(a) => cmd_verify(a),
        Command::DesignV(a) => cmd_design(a),
    }
}
