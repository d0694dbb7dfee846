fn main() -> std::process::ExitCode {
    ftqec::cli::main_with_args(std::env::args_os())
}
