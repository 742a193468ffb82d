use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fibrelink::experiments::sweep::write_sweep_csv;
use fibrelink::experiments::{self, run_evolve, run_sweep, EvolveRequest, Model, SweepSpec, T_STAR};
use fibrelink::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fibrelink",
    version,
    about = "Fibre-coupled two-cavity entanglement simulator"
)]
struct Cli {
    /// Reserved. The simulator has no randomness; setting this is an error.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one parameter point and write a CSV time series.
    Evolve(EvolveArgs),
    /// Run a parameter sweep from a preset or a config file.
    Sweep(SweepArgs),
    /// Run the oracle-equivalence and invariant checks.
    Validate {
        /// Replace the bound of every deviation check.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List the built-in figure presets.
    Presets {
        /// Print the config of one preset instead of the list.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// nu²/lambda², so irrational couplings are entered exactly.
    #[arg(long)]
    nu_sq: Option<f64>,
    #[arg(long)]
    gamma_f: Option<f64>,
    #[arg(long)]
    gamma_c: Option<f64>,
    #[arg(long)]
    kappa_a: Option<f64>,
    #[arg(long, conflicts_with = "t_star")]
    t_max: Option<f64>,
    /// Shorthand for --t-max pi/sqrt(2).
    #[arg(long)]
    t_star: bool,
    #[arg(long, default_value_t = 201)]
    samples: usize,
    #[arg(long)]
    dt: Option<f64>,
    /// Add p1..pN population columns.
    #[arg(long)]
    populations: bool,
    #[arg(long, default_value = "evolve.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Convergence { .. }
        | Error::NotHermitian { .. }
        | Error::Eigendecomposition { .. }
        | Error::InvalidDensity(_)
        | Error::NotNormalized { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(&err))
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn evolve(args: EvolveArgs) -> Result<(), Error> {
    let mut req = EvolveRequest::new(args.model);
    req.nu_sq = args.nu_sq;
    req.gamma_f = args.gamma_f.unwrap_or(0.0);
    req.gamma_c = args.gamma_c.unwrap_or(0.0);
    req.kappa_a = args.kappa_a.unwrap_or(0.0);
    req.t_max = if args.t_star {
        T_STAR
    } else {
        args.t_max.unwrap_or(T_STAR)
    };
    req.samples = args.samples;
    req.dt = args.dt;
    req.populations = args.populations;
    req.validate()?;

    let record = run_evolve(&req)?;
    let mut w = create(&args.out)?;
    record.write_csv(&mut w)?;
    w.flush()?;

    print!("{}", record.echo());
    let name = req.model.fidelity_name();
    if let Some(f) = record.fidelity_at_t_star() {
        println!("{name}(t*) = {f:.6}");
    }
    let t_final = record.times.last().copied().unwrap_or(0.0);
    println!("{name}(t = {t_final:.6}) = {:.6}", record.final_fidelity());
    println!("wrote {} ({} rows)", args.out.display(), record.times.len());
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let (spec, default_name) = match (&args.preset, &args.config) {
        (Some(name), _) => {
            let preset = experiments::preset(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown preset {name:?}; see `fibrelink presets`")))?;
            (preset.spec, format!("{name}.csv"))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            (SweepSpec::parse(&text)?, "sweep.csv".to_string())
        }
        (None, None) => return Err(Error::InvalidArgument("give --preset or --config".into())),
    };
    let out = args
        .out
        .or_else(|| spec.output_path.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default_name));
    let rows = run_sweep(&spec)?;
    let mut w = create(&out)?;
    write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    println!("wrote {} ({} rows)", out.display(), rows.len());
    Ok(())
}

fn validate(tol: Option<f64>) -> ExitCode {
    let results = experiments::run_checks(tol);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        println!("all {} checks passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "{} of {} checks failed: {}",
            failed.len(),
            results.len(),
            failed.join(", ")
        );
        ExitCode::from(EXIT_VALIDATION)
    }
}

fn list_presets(show: Option<String>) -> Result<(), Error> {
    match show {
        Some(name) => {
            let p =
                experiments::preset(&name).ok_or_else(|| Error::InvalidArgument(format!("unknown preset {name:?}")))?;
            println!("# {}: {}", p.name, p.description);
            print!("{}", p.spec.to_config_text());
        }
        None => {
            for p in experiments::presets() {
                println!("{:<6} {}", p.name, p.description);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.seedless {
        eprintln!("error: --seedless is reserved; the simulator is deterministic and takes no seed");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match cli.command {
        Command::Evolve(args) => evolve(args),
        Command::Sweep(args) => sweep(args),
        Command::Validate { tol } => return validate(tol),
        Command::Presets { show } => list_presets(show),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
