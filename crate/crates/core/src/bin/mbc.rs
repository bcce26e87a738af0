fn main() {
    std::process::exit(manybody::cli::run(std::env::args_os()));
}
