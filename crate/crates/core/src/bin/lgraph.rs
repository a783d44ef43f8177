fn main() {
    std::process::exit(lgraph::cli::main_with_args(std::env::args_os()));
}
