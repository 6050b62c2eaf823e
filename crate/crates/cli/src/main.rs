use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(moonshine_cli::run(std::env::args_os()) as u8)
}
