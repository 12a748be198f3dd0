//! Runs one pipeline stage on a problem file and prints the report.
//!
//! cargo run --example run_problem -- corpus/one-wave-massshell-2-2.txt verify

use padepde::frontend::{run_pipeline, Command, ProblemFile, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "corpus/one-wave-massshell-2-2.txt".into());
    let command = match args.next().as_deref() {
        Some("expand") => Command::Expand,
        Some("pade") => Command::Pade,
        Some("conditions") => Command::Conditions,
        _ => Command::Verify,
    };
    let text = std::fs::read_to_string(&path).expect("readable problem file");
    let pf = ProblemFile::parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
    let t = std::time::Instant::now();
    match run_pipeline(&pf, command, &RunOptions::default()) {
        Ok(r) => print!("{}", r.to_text()),
        Err(e) => eprintln!("error: {e}"),
    }
    eprintln!("({:.2?})", t.elapsed());
}
