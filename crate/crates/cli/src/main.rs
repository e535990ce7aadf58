fn main() {
    std::process::exit(spinorbasis_cli::run(std::env::args_os()));
}
