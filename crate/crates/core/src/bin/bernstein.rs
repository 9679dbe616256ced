use bernstein_lab::runner::{run, Command, Format, Q0Source, RunConfig};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical checks for Grassmannian angle geometry and Bernstein-type
/// curvature inequalities.
#[derive(Parser, Debug)]
#[command(name = "bernstein", version)]
struct Cli {
    /// angles | wfun | certify-II | certify-III | scan-f | estimate-eps0 |
    /// certify-prop35 | check-immersion | bridge-check
    #[arg(value_name = "COMMAND", required_unless_present = "command")]
    positional: Option<String>,
    #[arg(long, conflicts_with = "positional")]
    command: Option<String>,
    #[arg(long, default_value_t = 50)]
    density: usize,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    #[arg(long)]
    object: Option<String>,
    /// coordinate | inline
    #[arg(long, default_value = "coordinate")]
    q0: String,
    /// File of frames: one vector per row, frames separated by blank lines.
    #[arg(long)]
    inline: Option<PathBuf>,
    /// Maximal rank for estimate-eps0.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | csv
    #[arg(long, default_value = "json")]
    format: String,
}

fn config(cli: Cli) -> bernstein_lab::Result<RunConfig> {
    let name = cli.command.or(cli.positional).unwrap_or_default();
    let mut c = RunConfig::new(name.parse::<Command>()?);
    c.density = cli.density;
    c.samples = cli.samples;
    c.seed = cli.seed;
    c.tol = cli.tol;
    c.fd_step = cli.fd_step;
    c.object = cli.object;
    c.q0 = cli.q0.parse::<Q0Source>()?;
    c.inline = cli.inline;
    c.rank = cli.rank;
    c.out = cli.out;
    c.format = cli.format.parse::<Format>()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match config(cli).and_then(|c| run(&c)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match report.render() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &report.config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if !report.pass {
        eprintln!("{}: contract check failed", report.command);
    }
    ExitCode::from(report.exit_code() as u8)
}
