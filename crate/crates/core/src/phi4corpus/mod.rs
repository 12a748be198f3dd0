//! The bundled scenario catalog for the λφ⁴ equation, its golden outputs
//! and the numeric cross-check against the spacetime equation.

pub mod jet;
pub mod numeric;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use numeric::{
    conditions_defect, numeric_residual, sample_assignment, NumericAssignment, NumericError, POLE_GUARD,
};

use crate::frontend::{
    parse_polynomial, parse_rational, run_pipeline, AnsatzSource, Command, FrontendError, ProblemFile, Report, RunOptions,
    VerdictReport,
};
use crate::algebra::Polynomial;
use crate::pade::RationalAnsatz;

pub const DEFAULT_SEED: u64 = 20_240_917;
/// Bound on the residual of an exact scenario.
pub const EXACT_TOLERANCE: f64 = 1e-8;
/// Residual some assignment must reach for an inexact scenario.
pub const INEXACT_FLOOR: f64 = 1e-3;
/// Relative agreement between the conditions and the pointwise residual.
pub const CONDITIONS_TOLERANCE: f64 = 1e-6;

macro_rules! scenario_files {
    ($($slug:literal),* $(,)?) => {
        &[$(($slug,
            include_str!(concat!("../../corpus/", $slug, ".txt")),
            include_str!(concat!("../../corpus/golden/", $slug, ".txt")))),*]
    };
}

/// `(slug, problem file, golden text)` in catalog order.
pub const CATALOG: &[(&str, &str, &str)] = scenario_files![
    "one-wave-massshell-1-1",
    "one-wave-massshell-2-2",
    "one-wave-massshell-stability",
    "one-wave-secondbranch-1-1",
    "one-wave-secondbranch-2-2",
    "one-wave-secondbranch-stability",
    "two-wave-massshell-1-1",
    "two-wave-massshell-1-1-kleingordon",
    "two-wave-massshell-2-2",
    "two-wave-massshell-2-2-condN2",
    "two-wave-secondbranch-1-1",
    "two-wave-secondbranch-1-1-condN2v2",
];

#[derive(Debug)]
pub struct Scenario {
    pub slug: &'static str,
    pub name: String,
    pub problem: ProblemFile,
    pub golden: &'static str,
}

impl Scenario {
    /// Rules the numeric assignment has to satisfy: the ones spent on the
    /// equation plus the ones the verdict is taken under.
    pub fn assignment_rules(&self) -> Vec<String> {
        let mut r = self.problem.run.reduce.clone();
        r.extend(self.problem.run.rules.iter().cloned());
        r
    }

    pub fn expected_exact(&self) -> Option<bool> {
        self.problem.expected_verdict()
    }

    pub fn ansatz(&self) -> Result<RationalAnsatz, FrontendError> {
        self.problem.selected_ansatz(self.problem.run.l, self.problem.run.m)
    }

    /// The canonical text compared against the golden file.
    pub fn canonical_text(&self) -> Result<String, FrontendError> {
        Ok(self.reports()?.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"))
    }

    fn reports(&self) -> Result<Vec<Report>, FrontendError> {
        let opts = RunOptions::default();
        let mut out = vec![run_pipeline(&self.problem, Command::Expand, &opts)?];
        if self.problem.run.ansatz == AnsatzSource::Pade {
            out.push(run_pipeline(&self.problem, Command::Pade, &opts)?);
        }
        out.push(run_pipeline(&self.problem, Command::Verify, &opts)?);
        Ok(out)
    }
}

pub fn load_scenario(slug: &'static str, text: &str, golden: &'static str) -> Result<Scenario, FrontendError> {
    let problem = ProblemFile::parse(text)?;
    Ok(Scenario { slug, name: problem.name.clone(), problem, golden })
}

/// Every catalog entry, parsed.
pub fn catalog() -> Vec<Scenario> {
    CATALOG
        .iter()
        .map(|&(slug, text, golden)| load_scenario(slug, text, golden).expect("bundled scenario parses"))
        .collect()
}

pub fn scenario(slug: &str) -> Option<Scenario> {
    CATALOG
        .iter()
        .find(|e| e.0 == slug)
        .map(|&(slug, text, golden)| load_scenario(slug, text, golden).expect("bundled scenario parses"))
}

/// Substring match; `*` separates pieces that must occur in order.
pub fn matches_filter(pattern: &str, name: &str) -> bool {
    let mut rest = name;
    for piece in pattern.split('*').filter(|p| !p.is_empty()) {
        match rest.find(piece) {
            Some(at) => rest = &rest[at + piece.len()..],
            None => return false,
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub filter: Option<String>,
    pub seed: u64,
    pub numeric: bool,
    pub points: usize,
    pub assignments: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { filter: None, seed: DEFAULT_SEED, numeric: true, points: 20, assignments: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericReport {
    /// Largest residual per assignment.
    pub residuals: Vec<f64>,
    pub max: f64,
    pub conditions_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub file: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericReport>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub scenarios: Vec<ScenarioReport>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.scenarios {
            s.push_str(&format!("{} {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name));
            for c in &r.checks {
                if !c.ok {
                    s.push_str(&format!("    {}: {}\n", c.name, c.detail));
                }
            }
        }
        s.push_str(&format!("{} passed, {} failed (seed {})\n", self.passed, self.failed, self.seed));
        s
    }
}

fn check(checks: &mut Vec<Check>, name: &str, ok: bool, detail: impl Into<String>) {
    checks.push(Check { name: name.to_string(), ok, detail: detail.into() });
}

fn parse_index(prefix: &str, key: &str) -> Option<Vec<u32>> {
    let inner = key.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Compares the expansion and the ansatz against the `[expect]` values.
fn expectation_checks(sc: &Scenario, checks: &mut Vec<Check>) -> Result<(), FrontendError> {
    let pf = &sc.problem;
    let rs = pf.base_rules();
    let series_keys: Vec<(&String, Vec<u32>)> =
        pf.expect.keys().filter_map(|k| parse_index("c", k).map(|j| (k, j))).collect();
    if !series_keys.is_empty() {
        let top = series_keys.iter().map(|(_, j)| j.iter().sum::<u32>()).max().unwrap_or(0);
        let series = pf.expand(top)?;
        for (key, j) in series_keys {
            let want = parse_rational(&pf.expect[key], &pf.table)?;
            let got = series.coefficient(&j);
            let ok = got.equals_mod(&want, &rs)?;
            check(checks, key, ok, format!("got {}", got.to_text(&pf.table)));
        }
    }
    if let Some(text) = pf.expect.get("ansatz") {
        let want = RationalAnsatz::new(pf.rho.clone(), parse_rational(text, &pf.table)?);
        let got = sc.ansatz()?;
        let ok = got.equals_mod(&want, &rs)?;
        check(checks, "ansatz", ok, format!("got {}", got.to_text(&pf.table)));
    }
    let cond_keys: Vec<(&String, Vec<u32>)> =
        pf.expect.keys().filter_map(|k| parse_index("E", k).map(|j| (k, j))).collect();
    if !cond_keys.is_empty() || pf.expect.contains_key("D") {
        let rs = rs.union(&pf.rules_named(&pf.run.rules)?);
        let cs = pf.conditions_for(&sc.ansatz()?, &pf.run.rules)?;
        let zero = Polynomial::zero();
        for (key, j) in cond_keys {
            let want = parse_polynomial(&pf.expect[key], &pf.table)?;
            let got = cs.get(&j).unwrap_or(&zero);
            let ok = rs.vanishes(&got.sub(&want))?;
            check(checks, key, ok, format!("got {}", got.to_text(&pf.table)));
        }
        if let Some(text) = pf.expect.get("D") {
            let want = parse_polynomial(text, &pf.table)?;
            let ok = rs.vanishes(&cs.denominator.sub(&want))?;
            check(checks, "D", ok, format!("got {}", cs.denominator.to_text(&pf.table)));
        }
    }
    Ok(())
}

fn numeric_checks(sc: &Scenario, opts: &CorpusOptions, index: usize) -> Result<NumericReport, String> {
    let pf = &sc.problem;
    let rules = sc.assignment_rules();
    let ans = sc.ansatz().map_err(|e| e.to_string())?;
    let cs = pf.conditions_for(&ans, &pf.run.rules).map_err(|e| e.to_string())?;
    let mut residuals = Vec::new();
    let mut defect = 0.0f64;
    for a in 0..opts.assignments {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream((index * 64 + a) as u64);
        let mut last = String::new();
        let mut done = false;
        for _ in 0..20 {
            let assign = sample_assignment(pf, &rules, opts.points, &mut rng).map_err(|e| e.to_string())?;
            match numeric_residual(&ans, pf, &assign) {
                Ok(r) => {
                    residuals.push(r);
                    defect = defect.max(conditions_defect(&ans, &cs, pf, &assign).map_err(|e| e.to_string())?);
                    done = true;
                    break;
                }
                Err(e @ NumericError::NearPole { .. }) => last = e.to_string(),
                Err(e) => return Err(e.to_string()),
            }
        }
        if !done {
            return Err(last);
        }
    }
    let max = residuals.iter().copied().fold(0.0, f64::max);
    Ok(NumericReport { residuals, max, conditions_defect: defect })
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join("golden")
}

/// Runs one scenario; failures are recorded in the report, never raised.
pub fn run_scenario(sc: &Scenario, opts: &CorpusOptions, index: usize) -> ScenarioReport {
    let mut checks = Vec::new();
    let pf = &sc.problem;
    let mut verdict = None;
    match run_pipeline(pf, Command::Verify, &RunOptions::default()) {
        Ok(rep) => {
            let v = rep.verdict.expect("verify reports a verdict");
            if let Some(want) = v.expected {
                check(&mut checks, "verdict", v.exact == want, format!("exact = {}", v.exact));
            }
            let n = rep.conditions.as_ref().map_or(0, |c| c.conditions.len());
            if let Some(want) = pf.expect.get("conditions") {
                check(&mut checks, "conditions", want.trim() == n.to_string(), format!("{n} conditions"));
            }
            if let Some(want) = pf.expect.get("indices") {
                let got: Vec<String> = rep
                    .conditions
                    .as_ref()
                    .map(|c| c.conditions.iter().map(|v| format!("({})", v.index)).collect())
                    .unwrap_or_default();
                let want: Vec<String> = want.split_whitespace().map(str::to_string).collect();
                check(&mut checks, "indices", got == want, got.join(" "));
            }
            verdict = Some(v);
        }
        Err(e) => check(&mut checks, "verify", false, e.to_string()),
    }
    if let Err(e) = expectation_checks(sc, &mut checks) {
        check(&mut checks, "expect", false, e.to_string());
    }
    if pf.run.ansatz == AnsatzSource::Pade && !pf.run.stability.is_empty() {
        match run_pipeline(pf, Command::Pade, &RunOptions::default()) {
            Ok(rep) => {
                let p = rep.pade.expect("pade report");
                let bad: Vec<String> = p.stability.iter().filter(|e| !e.equal).map(|e| format!("[{0}/{0}]", e.n)).collect();
                check(&mut checks, "stability", bad.is_empty(), format!("differs: {}", bad.join(" ")));
            }
            Err(e) => check(&mut checks, "stability", false, e.to_string()),
        }
    }
    match sc.canonical_text() {
        Ok(text) => {
            if std::env::var_os("PADEPDE_BLESS").is_some() {
                let path = golden_dir().join(format!("{}.txt", sc.slug));
                let ok = std::fs::write(&path, &text).is_ok();
                check(&mut checks, "golden", ok, format!("wrote {}", path.display()));
            } else {
                check(&mut checks, "golden", text == sc.golden, "canonical output differs from the golden file");
            }
        }
        Err(e) => check(&mut checks, "golden", false, e.to_string()),
    }
    let mut numeric = None;
    if opts.numeric {
        match numeric_checks(sc, opts, index) {
            Ok(n) => {
                match sc.expected_exact() {
                    Some(true) => check(&mut checks, "numeric", n.max <= EXACT_TOLERANCE, format!("max residual {:e}", n.max)),
                    Some(false) => check(&mut checks, "numeric", n.max >= INEXACT_FLOOR, format!("max residual {:e}", n.max)),
                    None => {}
                }
                check(
                    &mut checks,
                    "numeric conditions",
                    n.conditions_defect <= CONDITIONS_TOLERANCE,
                    format!("relative defect {:e}", n.conditions_defect),
                );
                numeric = Some(n);
            }
            Err(e) => check(&mut checks, "numeric", false, e),
        }
    }
    ScenarioReport {
        name: sc.name.clone(),
        file: format!("{}.txt", sc.slug),
        passed: checks.iter().all(|c| c.ok),
        verdict,
        numeric,
        checks,
    }
}

/// Runs the catalog entries selected by `opts.filter` in catalog order.
pub fn run_corpus(opts: &CorpusOptions) -> CorpusReport {
    let mut scenarios = Vec::new();
    for (index, sc) in catalog().iter().enumerate() {
        if let Some(f) = &opts.filter {
            if !matches_filter(f, &sc.name) && !matches_filter(f, sc.slug) {
                continue;
            }
        }
        scenarios.push(run_scenario(sc, opts, index));
    }
    let passed = scenarios.iter().filter(|r| r.passed).count();
    CorpusReport { seed: opts.seed, passed, failed: scenarios.len() - passed, scenarios }
}
