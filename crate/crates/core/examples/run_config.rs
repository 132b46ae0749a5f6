//! Drives a subcommand from an in-memory configuration and prints the rendered CSV.

use shearlab::cli::{run_command, Command};
use shearlab::config::RunConfig;

const CONFIG: &str = r#"
[flow]
kind = "couette"

[grid]
L = 8.0
h = 0.02

[analyze]
c_range = [-1.0, 1.0]
coarse_n = 11
samples = 11
"#;

fn main() -> anyhow::Result<()> {
    let cfg = RunConfig::parse(CONFIG, None)?;
    let out = run_command(Command::Analyze, &cfg, false)?;
    for name in out.names() {
        println!("== {name}");
    }
    print!("{}", out.get("indicators.csv").unwrap_or_default());
    Ok(())
}
