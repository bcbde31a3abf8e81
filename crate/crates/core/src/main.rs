fn main() {
    std::process::exit(clasp_core::cli::run());
}
