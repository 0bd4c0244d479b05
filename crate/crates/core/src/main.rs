fn main() {
    std::process::exit(critent::cli::run(std::env::args()));
}
