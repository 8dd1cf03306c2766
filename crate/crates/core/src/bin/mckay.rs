fn main() {
    std::process::exit(mckay_core::cli::main_with_args(std::env::args_os()));
}
