fn main() {
    std::process::exit(ree_core::cli::run(std::env::args_os()));
}
