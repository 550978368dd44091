use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env = std::env::var("TORICCTL_MAX_FACETS").ok();
    let (code, stdout, stderr) = toricctl::main_with(std::env::args(), env.as_deref());
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    let _ = std::io::stderr().write_all(stderr.as_bytes());
    ExitCode::from(code as u8)
}
