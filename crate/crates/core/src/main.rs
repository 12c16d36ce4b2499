fn main() {
    std::process::exit(bendbeam::cli::main_with_args(std::env::args_os()));
}
