use std::io;
use std::process::ExitCode;

use adiasat::cli::{run, Io};

fn main() -> ExitCode {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut io = Io {
        stdin: &mut stdin.lock(),
        stdout: &mut stdout.lock(),
        stderr: &mut stderr.lock(),
    };
    let code = run(std::env::args_os(), &mut io);
    ExitCode::from(code as u8)
}
