//! Benchmark harness around the `lnsolve` solver library: deterministic
//! instance generation, parallel heuristic portfolios with shared initial
//! solutions, and CSV reports over the persisted runs.

pub mod args;
pub mod harness;
pub mod presets;
pub mod report;

use clap::Parser;

pub fn run_cli<I, T>(argv: I) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = args::Cli::parse_from(argv);
    match cli.command {
        args::Command::Generate(a) => harness::cmd_generate(&a),
        args::Command::Run(a) => harness::cmd_run(&a),
        args::Command::Report(a) => report::cmd_report(&a),
    }
}
