fn main() {
    std::process::exit(diskcert::cli::run());
}
