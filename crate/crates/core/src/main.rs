fn main() {
    std::process::exit(kkf::cli::main_with_args(std::env::args_os()));
}
