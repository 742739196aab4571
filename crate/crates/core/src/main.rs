fn main() {
    let code = mpoly_core::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
