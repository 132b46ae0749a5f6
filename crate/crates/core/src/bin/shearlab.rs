fn main() {
    std::process::exit(shearlab::cli::main_with_args(std::env::args_os()));
}
