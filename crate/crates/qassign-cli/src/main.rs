mod args;
mod commands;
mod error;
mod experiment;
mod manifest;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::GenNoisemap(a) => ("gen-noisemap", commands::cmd_gen_noisemap(a)),
        Command::Sweep(a) => ("sweep", commands::cmd_sweep(a)),
        Command::Anneal(a) => ("anneal", commands::cmd_anneal(a)),
        Command::Report(a) => ("report", commands::cmd_report(a)),
        Command::Rerun(a) => ("rerun", commands::cmd_rerun(a)),
    };
    if let Err(e) = result {
        eprintln!(
            "{}",
            json!({
                "command": name,
                "kind": e.kind(),
                "error": e.to_string(),
            })
        );
        std::process::exit(1);
    }
}
