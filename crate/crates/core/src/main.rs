fn main() {
    std::process::exit(rellich::cli::run(std::env::args_os()));
}
