fn main() {
    std::process::exit(polybergman::cli::run(std::env::args_os()));
}
