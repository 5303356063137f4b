fn main() {
    std::process::exit(hardylab::cli::main_entry(std::env::args()));
}
