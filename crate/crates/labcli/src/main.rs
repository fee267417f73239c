fn main() {
    std::process::exit(hqd_lab::cli::run(std::env::args_os()));
}
