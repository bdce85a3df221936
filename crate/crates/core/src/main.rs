fn main() {
    std::process::exit(semiftvn::cli::main());
}
