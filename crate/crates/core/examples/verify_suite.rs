//! Runs the property suite through the command-line entry point.
//!
//!     cargo run --release --example verify_suite -- 7

fn main() {
    let seed = std::env::args().nth(1).unwrap_or_else(|| "0".into());
    let argv = ["algsunit", "--output", "table", "--seed", &seed, "verify"];
    let code = algsunit::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
