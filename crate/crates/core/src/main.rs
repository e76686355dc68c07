fn main() {
    std::process::exit(tempaug::cli::run(std::env::args_os()));
}
