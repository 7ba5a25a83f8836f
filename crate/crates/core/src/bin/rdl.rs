fn main() {
    std::process::exit(restricted_digits::cli::main_with_args(std::env::args_os()));
}
