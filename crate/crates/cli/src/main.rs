use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let color = qpz_cli::color_enabled();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = qpz_cli::run(std::env::args_os(), &mut out, &mut err, color);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
