fn main() {
    std::process::exit(quasi1d::cli::run(std::env::args_os()));
}
