fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, out) = nomc::cli::run_command(&argv);
    print!("{out}");
    std::process::exit(code);
}
