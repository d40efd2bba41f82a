fn main() {
    std::process::exit(longref::cli::main());
}
