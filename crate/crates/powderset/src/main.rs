fn main() {
    std::process::exit(powderset::cli::run(std::env::args_os()));
}
