fn main() {
    std::process::exit(eumirror::cli::main_with_args(std::env::args_os()));
}
