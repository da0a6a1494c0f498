use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = exmatch_cli::run(std::env::args_os(), &mut out);
    let _ = out.flush();
    ExitCode::from(code)
}
