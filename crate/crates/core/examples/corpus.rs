//! Runs the bundled scenarios, optionally filtered, and prints the table.
//!
//! cargo run --example corpus -- two-wave

use padepde::phi4corpus::{run_corpus, CorpusOptions};

fn main() {
    let opts = CorpusOptions { filter: std::env::args().nth(1), ..CorpusOptions::default() };
    print!("{}", run_corpus(&opts).to_text());
}
