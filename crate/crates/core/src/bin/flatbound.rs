use std::io::{stderr, stdin, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let code = flatbound::cli::run(&args, &mut stdin(), &mut stdout(), &mut stderr());
    ExitCode::from(code as u8)
}
