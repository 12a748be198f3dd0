//! Diagonal approximants [n/n] of the second-branch one-wave expansion,
//! collapsed at xi = 1, compared with [2/2].

use padepde::phi4corpus::scenario;

fn main() {
    let sc = scenario("one-wave-secondbranch-stability").expect("bundled scenario");
    let pf = &sc.problem;
    let rs = pf.base_rules();
    let series = pf.expand(10).expect("series");
    let (_, reference) = pf.pade(&series, 2, 2).expect("[2/2]");
    for n in 1..=5 {
        let (_, ans) = pf.pade(&series, n, n).expect("pade");
        let same = ans.equals_mod(&reference, &rs).expect("comparison");
        println!("[{n}/{n}] {} {}", if same { "==" } else { "!=" }, ans.to_text(&pf.table));
    }
}
