//! Runs the acceptance battery: `cargo run --example acceptance_suite -- [smoke|full] [seed]`.

use fdvn::verify::{self, Level};

fn main() -> fdvn::Result<()> {
    let mut args = std::env::args().skip(1);
    let level: Level = args.next().as_deref().unwrap_or("smoke").parse()?;
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let results = verify::run_all(level, seed);
    for r in &results {
        println!(
            "{:>2} {} {:<48} {:>6} ms  {}",
            r.id,
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            r.millis,
            r.detail
        );
    }
    if results.iter().any(|r| !r.passed) {
        std::process::exit(3);
    }
    Ok(())
}
