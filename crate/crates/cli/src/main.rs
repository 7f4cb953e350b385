//! `mdt` binary; see the library for subcommands and exit codes.

use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = mdt_cli::invoke(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    ExitCode::from(out.code)
}
