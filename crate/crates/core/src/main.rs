use std::io::Write;

use clap::Parser;
use dqwalk::cli::{execute, Cli, EXIT_INPUT};

fn main() {
    let cli = Cli::parse();
    let result = execute(&cli.command);
    let text = match (&result.json, cli.json) {
        (Some(payload), true) => serde_json::to_string_pretty(payload).expect("payloads serialize"),
        _ => result.summary,
    };
    let _ = if result.exit_code == EXIT_INPUT {
        writeln!(std::io::stderr().lock(), "{text}")
    } else {
        writeln!(std::io::stdout().lock(), "{text}")
    };
    std::process::exit(result.exit_code);
}
