use clap::Parser;
use gkn_extend::error::GknError;
use gkn_extend::report::{run, Command, Report, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Builds self-adjoint extensions in `L² ⊕ W` and checks them.
#[derive(Parser, Debug)]
#[command(name = "gkn-extend", version)]
struct Cli {
    /// check-symplectic, derive-bc, verify-gkn, spectrum, legendre or all
    command: String,
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Write computed eigenvalues as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Pipeline(String),
}

fn classify(e: GknError) -> Failure {
    match e {
        GknError::Config(_) | GknError::Json(_) | GknError::Io(_) => Failure::Config(e.to_string()),
        other => Failure::Pipeline(other.to_string()),
    }
}

fn write_csv(report: &Report, path: &PathBuf) -> std::io::Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match &report.spectrum {
        Some(sp) => sp.write_csv(file),
        None => {
            use std::io::Write;
            let mut file = file;
            writeln!(file, "index,re,im,residual")?;
            for e in &report.eigenvalues {
                writeln!(file, "{},{:e},{:e},", e.index, e.re, e.im)?;
            }
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let command = Command::parse(&cli.command).ok_or_else(|| Failure::Config(format!("unknown command {}", cli.command)))?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", cli.config.display())))?;
    let mut config = RunConfig::from_json(&text).map_err(classify)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let report = run(&config, command).map_err(classify)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Config(e.to_string()))?;
    match &cli.out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    if let Some(path) = &cli.csv {
        write_csv(&report, path).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: expected {}, got {}", c.name, c.expected, c.got);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("gkn-extend: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Pipeline(msg)) => {
            eprintln!("gkn-extend: {msg}");
            ExitCode::from(1)
        }
    }
}
