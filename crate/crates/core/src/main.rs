fn main() -> std::process::ExitCode {
    uncoupled::cli::main_with_args(std::env::args_os())
}
