fn main() -> std::process::ExitCode {
    affectsim::cli::run(std::env::args_os())
}
