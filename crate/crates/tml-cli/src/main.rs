//! `tml` — command-line front end for the toroidal moment lab.
//!
//! Seven subcommands drive the library: `moment`, `sweep`, `expsum`,
//! `meansquare`, `count`, `roottwist`, `lvalue`. Data tables go to stdout
//! (or `--out`) as CSV or JSON; progress and diagnostics go to stderr
//! only. Exit codes are stable across subcommands: 0 success, 1 usage
//! error, 2 invalid modulus, 3 numerical failure.

mod args;
mod cmds;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Cmd};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version print to stdout and exit cleanly; real
            // parse problems are usage errors
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Moment(a) => cmds::moment(a),
        Cmd::Sweep(a) => cmds::sweep(a),
        Cmd::Expsum(a) => cmds::expsum(a),
        Cmd::Meansquare(a) => cmds::meansquare(a),
        Cmd::Count(a) => cmds::count(a),
        Cmd::Roottwist(a) => cmds::roottwist(a),
        Cmd::Lvalue(a) => cmds::lvalue(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tml: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
