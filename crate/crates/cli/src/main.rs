fn main() {
    std::process::exit(ncconvex_cli::run(std::env::args_os()));
}
