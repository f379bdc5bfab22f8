use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rwinv_cli::config::{Command, RunConfig};
use rwinv_cli::record::write_csv;
use rwinv_cli::store::Store;
use rwinv_cli::{execute, report, CliError, EXIT_VIOLATION};

const AFTER_HELP: &str = "\
Element syntax:
  lattice points      (x) or (x,y)
  finite elements     #k
  wreath elements     (a)[p:v,...] with sites in increasing order, e.g. (0)[-1:#1,2:#1];
                      Z^2 sites are tuples, (0,0)[(0,0):#1]; Z lamps are tuples, (1)[0:(3)]
  free words          signed generator indices, +1+2-1; the identity is e

Config files hold one `key = value` per line, `#` starts a comment, and keys are the
long flag names. Flags override the file. Unknown keys are errors.

Groups: z:d, lamplighter:q, z2f:q (Z^2 wr Z/q), zwrz, iterated:j, free:m, inner:j.

Records are stored as JSON in $RWINV_STORE (default ./.rwinv-store), named by the
SHA-256 of the canonical config.

Exit status: 0 success, 1 invariant violation, 2 usage error, 3 resource cap.";

#[derive(Parser)]
#[command(name = "rwinv", version, about = "Exact and Monte Carlo transition probabilities of random walks on groups", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact law on Z wr Z/q: entropy, shifted total variation, invariance check, profiles.
    ExactLamplighter(RunArgs),
    /// Free group: radial law, cancellation depth and the ratio law.
    Free(RunArgs),
    /// Monte Carlo drift curve and fitted exponent.
    Drift(RunArgs),
    /// Cover radius of the lazy walk on Z^2 and Z^2 wr F shift bounds.
    Cover(RunArgs),
    /// Z wr Z witness, Z^2 wr F bounds or lattice ratio deviation.
    Invariance(RunArgs),
    /// Tables and claim checklist over the stored records.
    Report(RunArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<String>,
    /// Step count or comma-separated grid.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    lamp_order: Option<String>,
    /// rational or float.
    #[arg(long)]
    mode: Option<String>,
    /// Increments in element syntax, separated by `;`.
    #[arg(long)]
    increments: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    entropy: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    tv_shift: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    check_invariance: Option<String>,
    /// literal or interior.
    #[arg(long)]
    gate: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    radius_profile: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    constancy_profile: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    rational_cap: Option<String>,
    #[arg(long)]
    float_cap: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    /// Free word as comma-separated signed generator indices.
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    ratio: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    c_n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    csv: Option<String>,
    /// JSON output path for the full record.
    #[arg(long)]
    json: Option<String>,
}

impl RunArgs {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("n", &self.n),
            ("lamp-order", &self.lamp_order),
            ("mode", &self.mode),
            ("increments", &self.increments),
            ("entropy", &self.entropy),
            ("tv-shift", &self.tv_shift),
            ("check-invariance", &self.check_invariance),
            ("gate", &self.gate),
            ("radius-profile", &self.radius_profile),
            ("constancy-profile", &self.constancy_profile),
            ("epsilon", &self.epsilon),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("rational-cap", &self.rational_cap),
            ("float-cap", &self.float_cap),
            ("rank", &self.rank),
            ("word", &self.word),
            ("ratio", &self.ratio),
            ("group", &self.group),
            ("a", &self.a),
            ("c-n", &self.c_n),
            ("k", &self.k),
            ("csv", &self.csv),
            ("json", &self.json),
        ]
    }

    fn into_config(self, command: Command) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::new(command);
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            cfg.apply_file(&text)?;
        }
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (command, args) = match cli.command {
        Sub::ExactLamplighter(a) => (Command::ExactLamplighter, a),
        Sub::Free(a) => (Command::Free, a),
        Sub::Drift(a) => (Command::Drift, a),
        Sub::Cover(a) => (Command::Cover, a),
        Sub::Invariance(a) => (Command::Invariance, a),
        Sub::Report(a) => (Command::Report, a),
    };
    let cfg = args.into_config(command)?;
    let store = Store::from_env();
    let record = execute(&cfg, &store)?;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match cfg.get("csv") {
        Some(path) => write_csv(&record.payload.rows, fs::File::create(path).map_err(io)?)?,
        None if command != Command::Report => write_csv(&record.payload.rows, std::io::stdout().lock())?,
        None => {}
    }
    if command == Command::Report {
        print!("{}", report::render(&record.payload));
    }
    if let Some(path) = cfg.get("json") {
        let text = serde_json::to_string_pretty(&record).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(path, text + "\n").map_err(io)?;
    }
    let mut err = std::io::stderr().lock();
    if command != Command::Report {
        for w in &record.payload.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
    }
    let _ = writeln!(err, "record {}", record.config_hash);
    if record.payload.violations > 0 {
        let _ = writeln!(err, "{} invariant violations", record.payload.violations);
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
