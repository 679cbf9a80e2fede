use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let r = toric_mmp::cli::main_with(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(r.text.as_bytes());
    ExitCode::from(r.code as u8)
}
