fn main() { std::process::exit(syncstr::cli::run(std::env::args().skip(1))); }
