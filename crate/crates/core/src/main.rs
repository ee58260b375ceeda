fn main() {
    std::process::exit(parity_lab::harness::cli::main());
}
