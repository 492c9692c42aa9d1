fn main() {
    std::process::exit(vortex_core::cli::run(std::env::args_os()));
}
