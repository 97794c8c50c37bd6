fn main() {
    std::process::exit(virmod_cli::run(std::env::args_os()));
}
