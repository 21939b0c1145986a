fn main() -> std::process::ExitCode {
    paiforge::cli::run(std::env::args_os())
}
