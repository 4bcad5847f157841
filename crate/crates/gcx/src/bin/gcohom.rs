fn main() {
    std::process::exit(gcx::cli::run());
}
