use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spin7_core::harness::{self, Fault, Format, RunConfig, Suite};
use spin7_core::invariant::build_bryant_salamon;
use spin7_core::{cayley, serial, Error, FieldScalar, Result, Vector};

#[derive(Parser)]
#[command(
    name = "spin7",
    version,
    about = "Exact verification suites for Spin(7) linear perturbations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print a report.
    Verify(VerifyArgs),
    /// Write a form as canonical JSON.
    Export(ExportArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite to run (repeatable). Default: all.
    #[arg(long = "suite", value_parser = parse_suite)]
    suites: Vec<Suite>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    /// Shift one Lie structure constant: I,J,K[,DELTA].
    #[arg(long, hide = true, value_parser = parse_fault)]
    inject_fault: Option<Fault>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormName {
    Omega,
    Phi,
    RankOne,
}

#[derive(clap::Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    form: FormName,
    /// Comma-separated coordinates of v ("p/q" each).
    #[arg(long)]
    v: Option<String>,
    /// Comma-separated coordinates of w ("p/q" each).
    #[arg(long)]
    w: Option<String>,
    #[arg(long, default_value = "1")]
    t: String,
    #[arg(long)]
    out: PathBuf,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fault(s: &str) -> std::result::Result<Fault, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err("expected I,J,K[,DELTA]".into());
    }
    let idx = |p: &str| p.parse::<usize>().map_err(|e| e.to_string());
    let delta = match parts.get(3) {
        Some(d) => d.parse::<FieldScalar>().map_err(|e| e.to_string())?,
        None => FieldScalar::from_int(1),
    };
    Fault::new(idx(parts[0])?, idx(parts[1])?, idx(parts[2])?, delta).map_err(|e| e.to_string())
}

fn parse_vector(s: &str) -> Result<Vector> {
    let coords: Vec<FieldScalar> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    let n = coords.len();
    coords
        .try_into()
        .map(Vector)
        .map_err(|_| Error::Dimension(format!("expected 8 coordinates, got {n}")))
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let config = RunConfig {
        suites: args.suites,
        seed: args.seed,
        format,
        timings: args.timings,
        fault: args.inject_fault,
    };
    let report = harness::run(&config);
    let text = report.render(format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}

fn export(args: ExportArgs) -> Result<i32> {
    match args.form {
        FormName::Omega => serial::write_kform(&args.out, cayley::omega())?,
        FormName::Phi => serial::write_chamber_form(&args.out, &build_bryant_salamon().phi)?,
        FormName::RankOne => {
            let missing = |f: &str| Error::Parse(format!("--form rank-one requires --{f}"));
            let v = parse_vector(args.v.as_deref().ok_or_else(|| missing("v"))?)?;
            let w = parse_vector(args.w.as_deref().ok_or_else(|| missing("w"))?)?;
            let t: FieldScalar = args.t.parse()?;
            serial::write_kform(&args.out, &cayley::perturb_rank_one(&v, &w, &t)?)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Export(args) => export(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
