fn main() {
    let code = diagonal_complex::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
