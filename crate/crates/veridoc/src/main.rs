fn main() {
    std::process::exit(veridoc::cli::main_with_args(std::env::args_os()));
}
