//! Two colliding plane waves on the mass shell: derives the [2/2] ansatz,
//! checks it against the closed form shipped in the corpus and factors the
//! exactness conditions in the pair invariant X = k10*k20 - k1.k2.

use padepde::frontend::{parse_polynomial, ProblemFile};
use padepde::pade::RationalAnsatz;
use padepde::residual::factor_check;
use padepde::series::index_text;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "corpus/two-wave-massshell-2-2.txt".into());
    let pf = ProblemFile::parse(&std::fs::read_to_string(&path).expect("problem file")).expect("valid problem");
    let t = &pf.table;
    let (l, m) = (pf.run.l, pf.run.m);

    let series = pf.expand((l + m) as u32).expect("series");
    let (_, derived) = pf.pade(&series, l, m).expect("pade");
    let closed = RationalAnsatz::new(pf.rho.clone(), pf.candidate.clone().expect("candidate"));
    let same = derived.equals_mod(&closed, &pf.base_rules()).expect("comparison");
    println!("[{l}/{m}] derived == closed: {same}");

    let cs = pf.conditions_for(&closed, &[]).expect("conditions");
    let x = "k10*k20 - k11*k21 - k12*k22 - k13*k23";
    let names = ["X - m^2", "X + m^2", "X + 2*m^2", "X - 2*m^2"];
    let candidates: Vec<_> = names
        .iter()
        .map(|n| parse_polynomial(&n.replace('X', &format!("({x})")), t).expect("factor"))
        .collect();
    for (j, rep) in factor_check(&cs, &candidates) {
        let powers: Vec<String> = names
            .iter()
            .zip(&rep.multiplicities)
            .filter(|(_, &k)| k > 0)
            .map(|(n, k)| format!("({n})^{k}"))
            .collect();
        println!("E[{}] = {} * {}", index_text(&j), rep.cofactor.to_text(t), powers.join("*"));
    }
    println!("D = ({})^{}", closed.den().to_text(t), pf.equation.clearing_power());
}
