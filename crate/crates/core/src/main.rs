fn main() {
    std::process::exit(fundcast::cli::run(std::env::args_os()));
}
