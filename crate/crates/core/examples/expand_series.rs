//! Taylor expansion of a single plane wave on the mass shell, seed 0,
//! through rho1^7.

use padepde::phi4corpus::scenario;

fn main() {
    let sc = scenario("one-wave-massshell-2-2").expect("bundled scenario");
    let pf = &sc.problem;
    let series = pf.expand(7).expect("series");
    for (j, c) in series.coefficients() {
        println!("rho1^{}: {}", j[0], c.to_text(&pf.table));
    }
}
