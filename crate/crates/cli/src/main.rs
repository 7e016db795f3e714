mod args;
mod commands;
mod config;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Context;

fn main() {
    let raw: Vec<String> = std::env::args().collect();
    let argv = match config::expand_args(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(argv);
    let ctx = Context {
        out: cli.out.clone(),
        threads: cli.threads,
    };
    let result = qwalk_core::par::with_threads(cli.threads, || match &cli.command {
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Walk(a) => commands::walk(&ctx, a),
        Command::Ensemble(a) => commands::ensemble(&ctx, a),
        Command::Census(a) => commands::census(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Graph(a) => commands::graph(&ctx, a),
    });
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
