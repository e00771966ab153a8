fn main() {
    std::process::exit(tiling_cli::run(std::env::args_os()));
}
