fn main() {
    std::process::exit(gausspm::cli::run());
}
