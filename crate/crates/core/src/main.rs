fn main() {
    std::process::exit(editvec::cli::run(std::env::args_os()));
}
