fn main() {
    std::process::exit(pulsewall::cli::main());
}
