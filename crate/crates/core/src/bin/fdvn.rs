use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let out = fdvn::cli::run(&argv, &mut std::io::stdin().lock());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
