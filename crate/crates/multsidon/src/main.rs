fn main() { std::process::exit(multsidon::cli::run()) }
