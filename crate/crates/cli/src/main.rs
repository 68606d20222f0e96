fn main() {
    std::process::exit(umtlab_cli::run_cli(std::env::args_os()));
}
