fn main() {
    std::process::exit(arrangelab::cli::run(std::env::args_os()));
}
