use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = covham_cli::run(std::env::args());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code)
}
