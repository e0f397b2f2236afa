use std::io::Write;
use std::process::ExitCode;

use torus_charvar_cli::{dispatch, EXIT_USAGE};

fn main() -> ExitCode {
    let result = dispatch(std::env::args_os());
    let text = result.payload.render();
    let written = if result.exit_code == EXIT_USAGE {
        std::io::stderr().write_all(text.as_bytes())
    } else {
        std::io::stdout().write_all(text.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(result.exit_code as u8)
}
