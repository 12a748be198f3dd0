use serde::Serialize;

use crate::algebra::RewriteSystem;
use crate::pade::{collapse, grade, pade_solve, PadeApproximant, RationalAnsatz};
use crate::residual::{conditions, verify, ConditionSet, ExactnessVerdict};
use crate::series::{index_text, seed_roots, solve_series, PowerSeries, SeedRoot};

use super::{AnsatzSource, FrontendError, ProblemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Expand,
    Pade,
    Conditions,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Pade => "pade",
            Command::Conditions => "conditions",
            Command::Verify => "verify",
        }
    }
}

/// Command line overrides of the `[run]` section.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub order: Option<u32>,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub rules: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedValue {
    pub index: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub order: u32,
    pub seeds: Vec<String>,
    pub coefficients: Vec<IndexedValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityEntry {
    pub n: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadeReport {
    pub l: usize,
    pub m: usize,
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub ansatz: String,
    pub degenerate_at_origin: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stability: Vec<StabilityEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionsReport {
    pub ansatz: String,
    pub rules: Vec<String>,
    pub conditions: Vec<IndexedValue>,
    pub denominator: String,
    pub max_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub exact: bool,
    pub denominator_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub problem: String,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pade: Option<PadeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human readable form, in the canonical textual notation.
    pub fn to_text(&self) -> String {
        let mut s = format!("problem: {}\ncommand: {}\n", self.problem, self.command.name());
        if let Some(sr) = &self.series {
            s.push_str(&format!("series to order {}\n", sr.order));
            for v in &sr.coefficients {
                s.push_str(&format!("  c[{}] = {}\n", v.index, v.value));
            }
        }
        if let Some(p) = &self.pade {
            s.push_str(&format!("pade [{}/{}]\n", p.l, p.m));
            for (j, v) in p.p.iter().enumerate() {
                s.push_str(&format!("  p[{j}] = {v}\n"));
            }
            for (j, v) in p.q.iter().enumerate() {
                s.push_str(&format!("  q[{j}] = {v}\n"));
            }
            s.push_str(&format!("  ansatz = {}\n", p.ansatz));
            if p.degenerate_at_origin {
                s.push_str("  denominator vanishes at the origin\n");
            }
            for e in &p.stability {
                let rel = if e.equal { "==" } else { "!=" };
                s.push_str(&format!("  [{n}/{n}] {rel} [{}/{}]\n", p.l, p.m, n = e.n));
            }
        }
        if let Some(c) = &self.conditions {
            s.push_str(&format!("conditions for {}\n", c.ansatz));
            if !c.rules.is_empty() {
                s.push_str(&format!("  rules: {}\n", c.rules.join(", ")));
            }
            for v in &c.conditions {
                s.push_str(&format!("  E[{}] = {}\n", v.index, v.value));
            }
            s.push_str(&format!("  D = {}\n", c.denominator));
        }
        if let Some(v) = &self.verdict {
            s.push_str(&format!("exact: {}\n", v.exact));
            if !v.denominator_ok {
                s.push_str("denominator vanishes under the rules\n");
            }
        }
        s
    }
}

impl ProblemFile {
    /// Taylor expansion of the reduced equation to total degree `n`. Only
    /// the extension rules act on the coefficients; the `reduce`
    /// constraints have already been spent on the equation.
    pub fn expand(&self, n: u32) -> Result<PowerSeries, FrontendError> {
        let eq = self.reduced_equation()?;
        let rs = self.base_rules();
        let seed = SeedRoot { value: self.seed.clone() };
        Ok(solve_series(&eq, &seed, &self.frees, n, &self.table, &rs)?)
    }

    /// Constant solutions among `0` and the declared candidates.
    pub fn seeds(&self) -> Result<Vec<SeedRoot>, FrontendError> {
        let eq = self.reduced_equation()?;
        Ok(seed_roots(&eq, &self.candidates, &self.base_rules())?)
    }

    /// `[L/M]` approximant of an expansion and its collapse at `ξ = 1`.
    pub fn pade(
        &self,
        series: &PowerSeries,
        l: usize,
        m: usize,
    ) -> Result<(PadeApproximant, RationalAnsatz), FrontendError> {
        let rs = self.base_rules();
        let g = grade(series, (l + m) as u32)?;
        let pa = pade_solve(&g, l, m, &rs)?;
        let ans = collapse(&pa, &rs)?;
        Ok((pa, ans))
    }

    /// The ansatz selected by `[run] ansatz`.
    pub fn selected_ansatz(&self, l: usize, m: usize) -> Result<RationalAnsatz, FrontendError> {
        match self.run.ansatz {
            AnsatzSource::Candidate => {
                let c = self.candidate.clone().ok_or(FrontendError::MissingSection("candidate".into()))?;
                Ok(RationalAnsatz::new(self.rho.clone(), c))
            }
            AnsatzSource::Pade => {
                let series = self.expand((l + m) as u32)?;
                Ok(self.pade(&series, l, m)?.1)
            }
        }
    }

    /// Conditions under the extension rules plus `extra`.
    pub fn conditions_for(
        &self,
        ansatz: &RationalAnsatz,
        extra: &[String],
    ) -> Result<ConditionSet, FrontendError> {
        let rs = self.base_rules().union(&self.rules_named(extra)?);
        Ok(conditions(ansatz, &self.reduced_equation()?, &rs)?)
    }

    pub fn verify_with(
        &self,
        ansatz: &RationalAnsatz,
        extra: &[String],
    ) -> Result<ExactnessVerdict, FrontendError> {
        let extra: RewriteSystem = self.rules_named(extra)?;
        Ok(verify(ansatz, &self.reduced_equation()?, &self.base_rules(), &extra)?)
    }

    pub fn expected_verdict(&self) -> Option<bool> {
        match self.expect.get("verdict").map(String::as_str) {
            Some("exact") => Some(true),
            Some("inexact") => Some(false),
            _ => None,
        }
    }
}

fn conditions_report(pf: &ProblemFile, ans: &RationalAnsatz, cs: &ConditionSet, rules: &[String]) -> ConditionsReport {
    ConditionsReport {
        ansatz: ans.to_text(&pf.table),
        rules: rules.to_vec(),
        conditions: cs
            .iter()
            .into_iter()
            .map(|(j, p)| IndexedValue { index: index_text(j), value: p.to_text(&pf.table) })
            .collect(),
        denominator: cs.denominator.to_text(&pf.table),
        max_degree: cs.max_degree,
    }
}

fn series_report(pf: &ProblemFile, series: &PowerSeries) -> Result<SeriesReport, FrontendError> {
    let seeds = if pf.candidates.is_empty() {
        Vec::new()
    } else {
        pf.seeds()?.iter().map(|s| s.value.to_text(&pf.table)).collect()
    };
    Ok(SeriesReport {
        order: series.truncation(),
        seeds,
        coefficients: series
            .coefficients()
            .into_iter()
            .map(|(j, c)| IndexedValue { index: index_text(j), value: c.to_text(&pf.table) })
            .collect(),
    })
}

pub fn run_pipeline(pf: &ProblemFile, command: Command, opts: &RunOptions) -> Result<Report, FrontendError> {
    let l = opts.l.unwrap_or(pf.run.l);
    let m = opts.m.unwrap_or(pf.run.m);
    let mut report = Report {
        problem: pf.name.clone(),
        command,
        series: None,
        pade: None,
        conditions: None,
        verdict: None,
    };
    match command {
        Command::Expand => {
            let n = opts.order.or(pf.run.order).unwrap_or((l + m) as u32);
            let series = pf.expand(n)?;
            report.series = Some(series_report(pf, &series)?);
        }
        Command::Pade => {
            let top = pf.run.stability.iter().map(|&n| 2 * n).max().unwrap_or(0).max(l + m);
            let n = opts.order.map_or(top as u32, |o| o.max(top as u32));
            let series = pf.expand(n)?;
            let (pa, ans) = pf.pade(&series, l, m)?;
            let rs = pf.base_rules();
            let mut stability = Vec::new();
            for &k in &pf.run.stability {
                let (_, other) = pf.pade(&series, k, k)?;
                stability.push(StabilityEntry { n: k, equal: other.equals_mod(&ans, &rs)? });
            }
            report.series = Some(series_report(pf, &series.truncate_to((l + m) as u32))?);
            report.pade = Some(PadeReport {
                l,
                m,
                p: pa.p.iter().map(|p| p.to_text(&pf.table)).collect(),
                q: pa.q.iter().map(|q| q.to_text(&pf.table)).collect(),
                ansatz: ans.to_text(&pf.table),
                degenerate_at_origin: ans.degenerate_at_origin(&rs)?,
                stability,
            });
        }
        Command::Conditions => {
            let rules = opts.rules.clone().unwrap_or_default();
            let ans = pf.selected_ansatz(l, m)?;
            let cs = pf.conditions_for(&ans, &rules)?;
            report.conditions = Some(conditions_report(pf, &ans, &cs, &rules));
        }
        Command::Verify => {
            let rules = opts.rules.clone().unwrap_or_else(|| pf.run.rules.clone());
            let ans = pf.selected_ansatz(l, m)?;
            let v = pf.verify_with(&ans, &rules)?;
            report.conditions = Some(conditions_report(pf, &ans, &v.residual_conditions, &rules));
            report.verdict = Some(VerdictReport {
                exact: v.exact,
                denominator_ok: v.denominator_ok,
                expected: pf.expected_verdict(),
            });
        }
    }
    Ok(report)
}
