fn main() {
    std::process::exit(linecover::cli::main_with_args(std::env::args_os()));
}
