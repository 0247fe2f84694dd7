use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptdyn_cli::{experiments, write_outputs, CliError, Layers};

#[derive(Parser)]
#[command(name = "ptdyn", version, about = "Non-unitary qubit dynamics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV output.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// distinguishability, scaling, powerlaw, embed, tomography or compile
    experiment: Option<String>,
    /// TOML file with the same keys as the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// One value or a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Two labels, e.g. `H,V`
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t_min: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// uniform or log
    #[arg(long)]
    grid: Option<String>,
    /// Fit window `lo,hi`
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    shots: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    target_file: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    restarts: Option<String>,
    /// Evolution time of a compile target
    #[arg(long, allow_hyphen_values = true)]
    time: Option<String>,
}

impl RunArgs {
    fn layers(&self) -> Result<Layers, CliError> {
        let mut layers = Layers::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            layers.add_toml(&text, &path.display().to_string());
        }
        let flags = [
            ("experiment", &self.experiment),
            ("family", &self.family),
            ("a", &self.a),
            ("c", &self.c),
            ("initial", &self.initial),
            ("t_min", &self.t_min),
            ("t_max", &self.t_max),
            ("points", &self.points),
            ("grid", &self.grid),
            ("window", &self.window),
            ("shots", &self.shots),
            ("seed", &self.seed),
            ("out", &self.out),
            ("target_file", &self.target_file),
            ("variant", &self.variant),
            ("restarts", &self.restarts),
            ("time", &self.time),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                layers.set(key, v.clone());
            }
        }
        Ok(layers)
    }
}

fn execute(args: &RunArgs) -> Result<Vec<String>, CliError> {
    let cfg = args.layers()?.resolve().map_err(CliError::Config)?;
    let output = experiments::run(&cfg)?;
    let mut stdout = std::io::stdout().lock();
    write_outputs(&output, cfg.out.as_deref(), &mut stdout)?;
    Ok(output.summary)
}

fn main() -> ExitCode {
    let Command::Run(args) = Cli::parse().command;
    match execute(&args) {
        Ok(summary) => {
            let mut stderr = std::io::stderr().lock();
            for line in summary {
                let _ = writeln!(stderr, "{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(if matches!(e, CliError::Config(_)) { 2 } else { 1 })
        }
    }
}
