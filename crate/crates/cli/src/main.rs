fn main() {
    std::process::exit(deltakin_cli::run(std::env::args_os()));
}
