fn main() {
    std::process::exit(sul_core::cli::run(std::env::args_os()));
}
