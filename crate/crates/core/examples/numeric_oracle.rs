//! Evaluates ansatzes directly in the spacetime equation at random points
//! whose wave vectors satisfy the scenario's constraints.

use padepde::algebra::RationalFunction;
use padepde::pade::RationalAnsatz;
use padepde::phi4corpus::{numeric_residual, sample_assignment, scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for slug in ["one-wave-massshell-2-2", "one-wave-massshell-1-1", "two-wave-massshell-2-2-condN2"] {
        let sc = scenario(slug).expect("bundled scenario");
        let pf = &sc.problem;
        let assign = sample_assignment(pf, &sc.assignment_rules(), 20, &mut rng).expect("assignment");
        let ans = sc.ansatz().expect("ansatz");
        let r = numeric_residual(&ans, pf, &assign).expect("residual");
        println!("{:<36} {}  max |E(phi)| = {r:.3e}", sc.name, ans.to_text(&pf.table));
    }
    // the vacuum is a solution for any parameters
    let sc = scenario("one-wave-massshell-1-1").expect("bundled scenario");
    let pf = &sc.problem;
    let assign = sample_assignment(pf, &sc.assignment_rules(), 20, &mut rng).expect("assignment");
    let zero = RationalAnsatz::new(pf.rho.clone(), RationalFunction::zero());
    println!("phi = 0: {:.3e}", numeric_residual(&zero, pf, &assign).expect("residual"));
}
