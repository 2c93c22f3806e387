fn main() {
    std::process::exit(wicknls::cli::run(std::env::args_os()));
}
