use std::process::ExitCode;

fn main() -> ExitCode {
    openshop::cli::main_entry()
}
