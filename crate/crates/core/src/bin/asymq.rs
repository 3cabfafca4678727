fn main() {
    std::process::exit(asymq::cli::run(std::env::args_os()));
}
