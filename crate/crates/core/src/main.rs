fn main() {
    std::process::exit(coarsesep::cli::run_from(std::env::args_os()));
}
