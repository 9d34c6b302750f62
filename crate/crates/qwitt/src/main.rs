fn main() {
    std::process::exit(qwitt::cli::run(std::env::args_os()));
}
