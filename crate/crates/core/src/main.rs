fn main() {
    std::process::exit(spinwork::cli::main_with_args(std::env::args_os()));
}
