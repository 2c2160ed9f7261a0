fn main() {
    std::process::exit(lexforge::cli::run(std::env::args_os()));
}
