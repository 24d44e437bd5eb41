fn main() {
    std::process::exit(matsign::cli::main_with_args(std::env::args_os()));
}
