use std::process::ExitCode;

fn main() -> ExitCode {
    netsov::cli::run()
}
