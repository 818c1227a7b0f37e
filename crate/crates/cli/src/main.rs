fn main() -> std::process::ExitCode {
    percorr_cli::main_with(std::env::args_os())
}
