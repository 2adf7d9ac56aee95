fn main() -> std::process::ExitCode {
    improper::cli::run(std::env::args_os())
}
