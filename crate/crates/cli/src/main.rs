fn main() {
    std::process::exit(powmap_cli::main_with_args(std::env::args_os()));
}
