fn main() {
    std::process::exit(dualram::cli::run(std::env::args_os()));
}
