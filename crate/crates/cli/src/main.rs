fn main() {
    std::process::exit(epperturb_cli::main_with_args(std::env::args_os()));
}
