fn main() {
    std::process::exit(momix::cli::main());
}
