use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(smoluchowski::cli::run(std::env::args_os()))
}
