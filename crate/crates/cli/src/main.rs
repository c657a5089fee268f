// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! `ncfree`: counts and enumerates non-crossing partitions, computes Kreweras
//! complements and free convolutions, and reports support bounds and
//! large-`k` limits.
//!
//! Exit status is 0 on success, 2 on a usage error and 1 on any other
//! failure. In the last case a single JSON line
//! `{"error": <kind>, "message": <text>}` is written to stderr.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = commands::run(&cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}
