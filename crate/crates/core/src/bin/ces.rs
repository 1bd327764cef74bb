fn main() {
    std::process::exit(ces_core::cli::cli_main(std::env::args_os()));
}
