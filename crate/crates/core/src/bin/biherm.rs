fn main() {
    std::process::exit(biherm::cli::main_entry());
}
