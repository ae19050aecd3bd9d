fn main() {
    std::process::exit(vandermonde::cli::main_with_args(std::env::args_os()));
}
