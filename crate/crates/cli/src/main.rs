use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use micromaser::presets::describe;
use micromaser::report::{write_csv, write_svg};
use micromaser::{
    figure_ids, figure_preset, run_sweep, verify, AtomSequence, Depth, RunConfig, Stark,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;

/// Atom-pair entanglement in a Kerr-medium two-photon micromaser.
#[derive(Debug, Parser)]
#[command(name = "micromaser", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep κt and write concurrence and populations as CSV.
    Sweep(SweepArgs),
    /// Run the sweep for one figure panel.
    Figure(FigureArgs),
    /// Compare the closed-form solution against the numerical oracle.
    Verify {
        #[arg(long, default_value = "quick")]
        depth: Depth,
    },
    /// List the figure presets.
    ListFigures,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// fock:<m> or thermal:<nbar>.
    #[arg(long)]
    field: Option<String>,
    /// eg (second atom in the ground state) or ee.
    #[arg(long)]
    atoms: Option<AtomSequence>,
    /// Kerr ratio χ/κ.
    #[arg(long)]
    chi: Option<f64>,
    /// Coupling ratio r used by the Stark terms.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    stark: Option<Stark>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Discarded thermal tail mass.
    #[arg(long)]
    tail_tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
    /// Add real and imaginary parts of the nonzero matrix entries.
    #[arg(long)]
    dump_matrix: bool,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(long)]
    id: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// SVG plot destination.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Verification(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sweep(args) => {
            let cfg = sweep_config(args)?;
            emit(&cfg)
        }
        Command::Figure(args) => {
            let mut cfg =
                figure_preset(&args.id).map_err(|e| Failure::Validation(e.to_string()))?;
            cfg.csv = args.output.csv;
            cfg.plot = args.output.plot;
            emit(&cfg)
        }
        Command::Verify { depth } => {
            let report = verify(depth);
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            println!("{json}");
            if report.passed {
                Ok(())
            } else {
                let names: Vec<_> = report.failures().map(|c| c.operation.clone()).collect();
                Err(Failure::Verification(names.join(", ")))
            }
        }
        Command::ListFigures => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for id in figure_ids() {
                let line = describe(id).map_err(|e| Failure::Validation(e.to_string()))?;
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
    }
}

fn sweep_config(args: SweepArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| {
                Failure::Validation(format!("invalid config {}: {e}", path.display()))
            })?
        }
        None => RunConfig::default(),
    };
    macro_rules! apply {
        ($($flag:ident => $field:ident),* $(,)?) => {
            $(if let Some(v) = args.$flag { cfg.$field = v; })*
        };
    }
    apply!(
        field => field,
        atoms => atoms,
        chi => chi_over_kappa,
        r => r,
        stark => stark,
        t_start => t_start,
        t_end => t_end,
        steps => steps,
        tail_tolerance => tail_tolerance,
    );
    if args.output.csv.is_some() {
        cfg.csv = args.output.csv;
    }
    if args.output.plot.is_some() {
        cfg.plot = args.output.plot;
    }
    cfg.dump_matrix |= args.dump_matrix;
    Ok(cfg)
}

fn emit(cfg: &RunConfig) -> Result<(), Failure> {
    let result = run_sweep(cfg).map_err(|e| Failure::Validation(e.to_string()))?;
    match &cfg.csv {
        Some(path) => {
            let mut file = create(path)?;
            write_csv(&result, &mut file)?;
            file.flush()?;
        }
        None => write_csv(&result, io::stdout().lock())?,
    }
    if let Some(path) = &cfg.plot {
        let title = cfg.title.clone().unwrap_or_else(|| {
            format!(
                "{}, {}, χ/κ={}",
                cfg.field,
                cfg.atoms.label(),
                cfg.chi_over_kappa
            )
        });
        let mut file = create(path)?;
        write_svg(&result, &title, &mut file)?;
        file.flush()?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Validation(format!("cannot create {}: {e}", path.display())))
}
