//! Command-line front end: `spinorbasis <command> [flags] [key=value ...]`.
//!
//! Every command reads flat `key = value` parameters from an optional
//! `--config` file, overridden by trailing `key=value` arguments, and writes a
//! JSON report (schema `spinorbasis/v1`) or a CSV table.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 a requested accuracy was not reached.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

use crate::commands::{CommandSpec, COMMANDS};
use crate::config::{JobConfig, Overrides};
use crate::error::{CliError, Status};
use crate::output::emit;

fn key_help(spec: &CommandSpec) -> String {
    let width = spec.keys.iter().map(|k| k.name.len()).max().unwrap_or(0);
    let mut text = String::from("Keys (key=value, also accepted in --config files):\n");
    for k in spec.keys {
        let default = if k.default.is_empty() { "-" } else { k.default };
        text.push_str(&format!("  {:width$}  {} [default: {default}]\n", k.name, k.help));
    }
    text
}

fn common_args(cmd: Command) -> Command {
    cmd.arg(Arg::new("config").long("config").value_name("FILE").value_parser(value_parser!(PathBuf)).help("flat key = value config file"))
        .arg(Arg::new("out").long("out").value_name("FILE").value_parser(value_parser!(PathBuf)).help("write the report here instead of stdout"))
        .arg(Arg::new("format").long("format").value_name("FORMAT").value_parser(["json", "csv"]).help("report format"))
        .arg(Arg::new("seed").long("seed").value_name("SEED").value_parser(value_parser!(u64)).help("seed for sampled points"))
        .arg(Arg::new("threads").long("threads").value_name("N").value_parser(value_parser!(usize)).help("worker threads"))
        .arg(Arg::new("pairs").value_name("KEY=VALUE").action(ArgAction::Append).help("parameter overrides"))
}

pub fn cli() -> Command {
    let mut root = Command::new("spinorbasis")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Spinor and scalar exponential-type orbital bases: tables, expansions, translations and checks")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in COMMANDS {
        root = root.subcommand(common_args(Command::new(spec.name).about(spec.about).after_help(key_help(spec))));
    }
    root
}

fn overrides(m: &ArgMatches) -> Overrides {
    Overrides {
        config: m.get_one::<PathBuf>("config").cloned(),
        out: m.get_one::<PathBuf>("out").cloned(),
        format: m.get_one::<String>("format").cloned(),
        seed: m.get_one::<u64>("seed").copied(),
        threads: m.get_one::<usize>("threads").copied(),
        pairs: m.get_many::<String>("pairs").map(|v| v.cloned().collect()).unwrap_or_default(),
    }
}

/// Runs one already-parsed command and writes its report.
pub fn execute(spec: &CommandSpec, overrides: &Overrides) -> Result<Status, CliError> {
    let cfg = JobConfig::build(spec.name, spec.keys, spec.default_format, overrides)?;
    let job = || -> Result<Status, CliError> {
        let (rendered, status) = commands::dispatch(&cfg)?;
        emit(&rendered.text(cfg.format)?, cfg.out.as_deref())?;
        Ok(status)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Compute(format!("cannot start {n} threads: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let spec = COMMANDS.iter().find(|s| s.name == name).expect("every subcommand has a spec");
    match execute(spec, &overrides(sub)) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("spinorbasis {name}: {e}");
            e.exit_code()
        }
    }
}
