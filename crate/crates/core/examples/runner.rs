//! Drives the command runner as a library, the same path the `bernstein` bin uses.

use bernstein_lab::runner::{run, Command, Format, RunConfig};

fn main() -> bernstein_lab::Result<()> {
    let mut cfg = RunConfig::new(Command::CheckImmersion);
    cfg.object = Some("helicoid".into());
    cfg.samples = Some(5);
    cfg.seed = 3;
    let report = run(&cfg)?;
    print!("{}", report.render()?);

    let mut scan = RunConfig::new(Command::ScanF);
    scan.density = 30;
    scan.format = Format::Csv;
    let report = run(&scan)?;
    print!("{}", report.render()?);
    println!("exit code {}", report.exit_code());
    Ok(())
}
