fn main() {
    std::process::exit(qfilter::cli::run(std::env::args_os()));
}
