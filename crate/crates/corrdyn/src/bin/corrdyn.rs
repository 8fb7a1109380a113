fn main() {
    std::process::exit(corrdyn::cli::main_with_args(std::env::args()));
}
