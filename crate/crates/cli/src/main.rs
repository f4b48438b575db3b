use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = arc_cover_cli::run(std::env::args().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.exit_code as u8)
}
