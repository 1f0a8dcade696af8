use std::process::ExitCode;

fn main() -> ExitCode {
    tway::cli::main_with_args(std::env::args_os())
}
