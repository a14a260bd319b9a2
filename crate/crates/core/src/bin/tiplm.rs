fn main() {
    std::process::exit(tiplm::cli::run(std::env::args_os()));
}
