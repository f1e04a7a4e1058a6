fn main() {
    std::process::exit(heffter::cli::run(std::env::args_os()));
}
