fn main() {
    std::process::exit(graceful_kit::cli::run(std::env::args_os()));
}
