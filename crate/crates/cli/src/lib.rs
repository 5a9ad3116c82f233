//! Command-line front end: loads a manifest of sources, context and queries,
//! prints validated answers, and can serve the same operations over HTTP.

pub mod commands;
pub mod manifest;
pub mod output;
pub mod serve;
pub mod sources;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use contextdl::validator::EgdMode;
use contextdl::Degree;

pub use commands::{run_queries, QuerySettings, EXIT_LOAD, EXIT_MISMATCH, EXIT_OK};
pub use manifest::{LoadError, Loaded, Manifest, ValidatorChoice};
pub use output::Diagnostics;

#[derive(Debug, Parser)]
#[command(
    name = "contextdl",
    version,
    about = "Validate conjunctive-query answers against a context of constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load every file of a manifest and report problems.
    Check {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Check that the positive constraints of a context file are weakly acyclic.
    CheckAcyclicity { context: PathBuf },
    /// Chase an instance with the positive constraints of a context.
    Chase { context: PathBuf, instance: PathBuf },
    /// Answer the manifest's queries.
    Query {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        tau: Option<Degree>,
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum)]
        validator: Option<ValidatorChoice>,
        #[arg(long)]
        egd_mode: Option<EgdMode>,
    },
    /// Serve queries over HTTP.
    Serve {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32 {
    let mut diag = Diagnostics::new(err, color);
    match cli.command {
        Command::Check { manifest } => commands::cmd_check(&manifest, out, &mut diag),
        Command::CheckAcyclicity { context } => {
            commands::cmd_check_acyclicity(&context, out, &mut diag)
        }
        Command::Chase { context, instance } => {
            commands::cmd_chase(&context, &instance, out, &mut diag)
        }
        Command::Query {
            manifest,
            tau,
            explain,
            validator,
            egd_mode,
        } => {
            let settings = QuerySettings {
                tau,
                explain,
                validator,
                egd_mode,
            };
            commands::cmd_query(&manifest, &settings, out, &mut diag)
        }
        Command::Serve { manifest, bind } => {
            let loaded = match Manifest::load(&manifest).and_then(Manifest::load_all) {
                Ok(l) => l,
                Err(e) => {
                    diag.error(e);
                    return EXIT_LOAD;
                }
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => {
                    diag.error(e);
                    return 1;
                }
            };
            match runtime.block_on(serve::serve(loaded, &bind)) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    diag.error(format_args!("{bind}: {e}"));
                    1
                }
            }
        }
    }
}
