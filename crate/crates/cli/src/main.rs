fn main() {
    std::process::exit(liegrowth_cli::run(std::env::args_os()));
}
