fn main() {
    std::process::exit(planarize_cli::run(std::env::args_os()));
}
