use std::io::{self, LineWriter, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = LineWriter::new(io::stdout());
    let mut err = io::stderr();
    let code = nice_core::cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
