fn main() {
    std::process::exit(causal_procure::cli::run(std::env::args_os()));
}
