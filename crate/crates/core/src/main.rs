fn main() {
    std::process::exit(lahyper::cli::main());
}
