fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(vanseq_cli::run(&argv));
}
