fn main() {
    std::process::exit(randfun::cli::run(std::env::args_os()));
}
