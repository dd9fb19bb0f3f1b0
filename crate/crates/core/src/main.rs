fn main() {
    std::process::exit(polar3::cli::run(std::env::args_os()));
}
