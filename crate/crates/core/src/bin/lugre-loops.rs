fn main() {
    std::process::exit(lugre_loops::cli::main_with_args(std::env::args_os()));
}
