fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(ptlab::cli::run(&argv));
}
