fn main() {
    std::process::exit(qwr::cli::run(std::env::args_os()));
}
