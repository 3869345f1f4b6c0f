fn main() {
    std::process::exit(bredon::cli::run());
}
