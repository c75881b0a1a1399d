fn main() {
    std::process::exit(quasihull::cli::main_entry(std::env::args_os()));
}
