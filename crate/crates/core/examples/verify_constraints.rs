//! Exactness of the two-wave ansatzes with and without the extra relation
//! on X = k10*k20 - k1.k2.

use padepde::phi4corpus::scenario;

fn main() {
    for slug in ["two-wave-massshell-2-2-condN2", "two-wave-secondbranch-1-1-condN2v2"] {
        let sc = scenario(slug).expect("bundled scenario");
        let pf = &sc.problem;
        let ans = sc.ansatz().expect("ansatz");
        for rules in [pf.run.rules.clone(), Vec::new()] {
            let v = pf.verify_with(&ans, &rules).expect("verify");
            println!(
                "{:<40} rules [{}]: exact = {}, {} conditions",
                sc.name,
                rules.join(", "),
                v.exact,
                v.residual_conditions.len()
            );
        }
    }
}
