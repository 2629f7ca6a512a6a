use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hgauge_verify::scenario::parse_level_list;
use hgauge_verify::{run_suite, shipped, Overrides, ScenarioSpec, Suite};

/// Check the identities of higher gauge theory exactly on a scenario.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Scenario file; the shipped default scenario is used when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Suites to run, replacing those named in the scenario (repeatable).
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Spacetime dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Coefficient degree of random connections.
    #[arg(long)]
    degree: Option<u32>,
    /// Number of curvature slots of a symmetrized-trace pairing.
    #[arg(long)]
    n: Option<usize>,
    /// Descent levels, e.g. `0,1,2`.
    #[arg(long, value_name = "LIST")]
    p: Option<String>,
    /// Random points per residual for the numeric spot check.
    #[arg(long, value_name = "POINTS")]
    spot: Option<usize>,
    /// Emit the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<u8, String> {
    let (label, text, base) = match &args.scenario {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let base = p.parent().map(PathBuf::from).unwrap_or_default();
            (p.display().to_string(), text, base)
        }
        None => ("<default>".to_string(), shipped::DEFAULT.to_string(), PathBuf::from(".")),
    };
    let mut suites = Vec::new();
    for name in &args.suites {
        suites.extend(Suite::parse(name).ok_or_else(|| format!("unknown suite `{name}`"))?);
    }
    let levels = args.p.as_deref().map(parse_level_list).transpose()?;
    let overrides = Overrides {
        seed: args.seed,
        dim: args.dim,
        degree: args.degree,
        n: args.n,
        suites,
        levels,
        spot_points: args.spot,
    };
    let mut spec = ScenarioSpec::parse(&label, &text).map_err(|e| e.to_string())?;
    spec.apply(&overrides).map_err(|e| e.to_string())?;
    let scenario = spec.resolve(&base).map_err(|e| e.to_string())?;
    let report = run_suite(&scenario);
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_human());
    }
    Ok(report.exit_code() as u8)
}
