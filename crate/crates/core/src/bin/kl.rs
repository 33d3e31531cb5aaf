fn main() {
    std::process::exit(kl_core::cli::main_entry());
}
