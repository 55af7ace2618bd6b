fn main() {
    std::process::exit(mgn_core::cli::run(std::env::args_os()));
}
