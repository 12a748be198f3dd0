use std::collections::BTreeMap;

use crate::algebra::{
    is_identifier, Monomial, Polynomial, RationalFunction, RewriteSystem, Rule, Symbol,
    SymbolTable,
};
use crate::series::{
    check_rho_symbols, transform, AnsatzDefinition, EulerEquation, MultiIndex, SpacetimeEquation,
    SpacetimeTerm,
};

use super::parse::{
    parse_field, parse_polynomial_at, parse_rational_at, parse_symbol, FieldContext, Located,
};
use super::FrontendError;

const SECTIONS: &[&str] = &[
    "problem",
    "symbols",
    "extensions",
    "ansatz",
    "equation",
    "constraints",
    "seeds",
    "frees",
    "run",
    "candidate",
    "expect",
];

/// Which ansatz `conditions` and `verify` work on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnsatzSource {
    Pade,
    Candidate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    pub order: Option<u32>,
    pub l: usize,
    pub m: usize,
    /// Constraints applied to the equation before solving.
    pub reduce: Vec<String>,
    /// Extra rules for `verify`.
    pub rules: Vec<String>,
    /// Diagonal entries `[n/n]` compared against `[L/M]`.
    pub stability: Vec<usize>,
    pub ansatz: AnsatzSource,
    pub seed: Option<u64>,
}

/// A fully resolved problem.
#[derive(Debug)]
pub struct ProblemFile {
    pub name: String,
    pub meta: BTreeMap<String, String>,
    pub table: SymbolTable,
    pub coordinates: Vec<String>,
    pub rho: Vec<Symbol>,
    pub ansatz: Option<AnsatzDefinition>,
    pub spacetime: Option<SpacetimeEquation>,
    /// The equation in ρ variables before any constraint is applied.
    pub equation: EulerEquation,
    pub constraints: Vec<(String, Rule)>,
    pub seed: RationalFunction,
    pub candidates: Vec<RationalFunction>,
    pub frees: Vec<(MultiIndex, Symbol)>,
    pub run: RunParams,
    pub candidate: Option<RationalFunction>,
    pub expect: BTreeMap<String, String>,
}

struct Entry {
    key: Located,
    value: Located,
}

struct Section {
    line: usize,
    entries: Vec<Entry>,
}

fn split_sections(text: &str) -> Result<BTreeMap<String, Section>, FrontendError> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let src = {
            let mut l = Located::plain(line);
            for p in &mut l.pos {
                p.0 = line_no;
            }
            l
        };
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(src.error(0, "malformed section header"));
            };
            if !SECTIONS.contains(&name) {
                return Err(src.error(0, format!("unknown section [{name}]")));
            }
            if out.contains_key(name) {
                return Err(src.error(0, format!("section [{name}] repeated")));
            }
            out.insert(name.to_string(), Section { line: line_no, entries: Vec::new() });
            current = Some(name.to_string());
            continue;
        }
        let Some(sec) = current.as_ref().and_then(|c| out.get_mut(c)) else {
            return Err(src.error(0, "entry outside of a section"));
        };
        if line.starts_with(char::is_whitespace) {
            // continuation of the previous value
            let Some(last) = sec.entries.last_mut() else {
                return Err(src.error(0, "continuation line without an entry"));
            };
            let cont = src.trim();
            last.value.text.push(' ');
            last.value.pos.push(cont.at(0));
            last.value.text.push_str(&cont.text);
            last.value.pos.extend(cont.pos);
            continue;
        }
        let Some((key, value)) = src.split_once("=") else {
            return Err(src.error(0, "expected `key = value`"));
        };
        sec.entries.push(Entry { key, value });
    }
    Ok(out)
}

fn list(v: &Located) -> Vec<Located> {
    if v.text.trim().is_empty() {
        return Vec::new();
    }
    v.split_top(',')
}

fn names(v: &Located) -> Result<Vec<String>, FrontendError> {
    list(v)
        .into_iter()
        .map(|n| {
            if is_identifier(&n.text) {
                Ok(n.text)
            } else {
                Err(n.error(0, format!("`{}` is not a valid name", n.text)))
            }
        })
        .collect()
}

fn integer<T: std::str::FromStr>(v: &Located) -> Result<T, FrontendError> {
    v.text.trim().parse().map_err(|_| v.error(0, "expected a nonnegative integer"))
}

fn unknown_key(e: &Entry, section: &str) -> FrontendError {
    e.key.error(0, format!("unknown key `{}` in [{section}]", e.key.text))
}

fn algebra_err(src: &Located, err: crate::algebra::AlgebraError) -> FrontendError {
    src.error(0, err.to_string())
}

/// Parses `name = pattern -> replacement`.
fn parse_rule(value: &Located, table: &SymbolTable) -> Result<Rule, FrontendError> {
    let Some((lhs, rhs)) = value.split_once("->") else {
        return Err(value.error(0, "expected `pattern -> replacement`"));
    };
    let pat = parse_polynomial_at(&lhs, table)?;
    let Some((mono, coef)) = pat.leading_term().filter(|_| pat.is_monomial()) else {
        return Err(lhs.error(0, "rule pattern must be a single monomial"));
    };
    if !num_traits::One::is_one(coef) {
        return Err(lhs.error(0, "rule pattern must have coefficient 1"));
    }
    let rep = parse_polynomial_at(&rhs, table)?;
    Rule::new(mono.clone(), rep).map_err(|e| algebra_err(value, e))
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, FrontendError> {
        let mut sections = split_sections(text)?;
        let table = SymbolTable::new();
        let mut meta = BTreeMap::new();
        let mut name = String::from("problem");
        if let Some(sec) = sections.remove("problem") {
            for e in sec.entries {
                if e.key.text == "name" {
                    name = e.value.text.clone();
                }
                meta.insert(e.key.text.clone(), e.value.text.clone());
            }
        }

        let Some(symbols) = sections.remove("symbols") else {
            return Err(FrontendError::MissingSection("symbols".into()));
        };
        let mut coordinates = Vec::new();
        let mut rho_names: Option<(Located, Vec<String>)> = None;
        for e in &symbols.entries {
            match e.key.text.as_str() {
                "parameters" => {
                    for (n, src) in names(&e.value)?.into_iter().zip(list(&e.value)) {
                        table.parameter(&n).map_err(|err| algebra_err(&src, err))?;
                    }
                }
                "coordinates" => coordinates = names(&e.value)?,
                "rho" => rho_names = Some((e.value.clone(), names(&e.value)?)),
                _ => return Err(unknown_key(e, "symbols")),
            }
        }

        if let Some(sec) = sections.remove("extensions") {
            for e in sec.entries {
                let Some((sym, exp)) = e.key.split_once("^") else {
                    return Err(e.key.error(0, "expected `name^k = value`"));
                };
                if !is_identifier(&sym.text) {
                    return Err(sym.error(0, "invalid extension name"));
                }
                let k: u32 = integer(&exp)?;
                let value = parse_polynomial_at(&e.value, &table)?;
                table.extension(&sym.text, k, value).map_err(|err| algebra_err(&e.key, err))?;
            }
        }

        // ρ variables last, so they are the smallest in the term order
        let Some((rho_src, rho_list)) = rho_names else {
            return Err(FrontendError::MissingSection("symbols.rho".into()));
        };
        let mut rho = Vec::new();
        for n in rho_list {
            rho.push(table.rho(&n).map_err(|err| algebra_err(&rho_src, err))?);
        }
        check_rho_symbols(&table, &rho).map_err(|e| rho_src.error(0, e.to_string()))?;

        let ansatz = match sections.remove("ansatz") {
            None => None,
            Some(sec) => {
                let mut rows: Vec<Option<Vec<RationalFunction>>> = vec![None; rho.len()];
                for e in &sec.entries {
                    let sym = parse_symbol(&e.key, &table)?;
                    let Some(k) = rho.iter().position(|&r| r == sym) else {
                        return Err(e.key.error(0, "ansatz entries are keyed by rho variables"));
                    };
                    let entries = list(&e.value)
                        .iter()
                        .map(|v| parse_rational_at(v, &table))
                        .collect::<Result<Vec<_>, _>>()?;
                    if entries.len() != coordinates.len() {
                        return Err(e.value.error(0, "one derivative per coordinate expected"));
                    }
                    rows[k] = Some(entries);
                }
                let mut table_rows = vec![Vec::new(); coordinates.len()];
                for (k, row) in rows.into_iter().enumerate() {
                    let Some(row) = row else {
                        return Err(FrontendError::MissingSection(format!(
                            "ansatz.{}",
                            table.name(rho[k])
                        )));
                    };
                    for (mu, f) in row.into_iter().enumerate() {
                        table_rows[mu].push(f);
                    }
                }
                let def = AnsatzDefinition::new(rho.clone(), table_rows)
                    .map_err(|e| FrontendError::Problem(e.to_string()))?;
                Some(def)
            }
        };

        let Some(eq_sec) = sections.remove("equation") else {
            return Err(FrontendError::MissingSection("equation".into()));
        };
        let rho_names: Vec<String> = rho.iter().map(|&r| table.name(r).to_string()).collect();
        let mut spacetime = None;
        let mut equation = None;
        for e in &eq_sec.entries {
            match e.key.text.as_str() {
                "spacetime" => {
                    let ctx = FieldContext { field: "phi", vars: &coordinates };
                    let fe = parse_field(&e.value, &table, ctx)?;
                    let terms = fe
                        .terms
                        .into_iter()
                        .map(|(factors, coef)| SpacetimeTerm { coef, factors })
                        .collect();
                    let st = SpacetimeEquation::new(coordinates.len(), terms)
                        .map_err(|err| e.value.error(0, err.to_string()))?;
                    let Some(def) = &ansatz else {
                        return Err(FrontendError::MissingSection("ansatz".into()));
                    };
                    let eu = transform(&st, def).map_err(|err| e.value.error(0, err.to_string()))?;
                    let eu = eu
                        .reduce(&table.extension_rules())
                        .map_err(|err| algebra_err(&e.value, err))?;
                    spacetime = Some(st);
                    equation = Some(eu);
                }
                "rho" => {
                    let ctx = FieldContext { field: "phi", vars: &rho_names };
                    let fe = parse_field(&e.value, &table, ctx)?;
                    let eu = EulerEquation::from_parts(rho.clone(), fe.terms.into_iter().map(|(f, c)| (c, f)).collect())
                        .map_err(|err| e.value.error(0, err.to_string()))?;
                    equation = Some(eu);
                }
                _ => return Err(unknown_key(e, "equation")),
            }
        }
        let Some(equation) = equation else {
            return Err(FrontendError::MissingSection("equation".into()));
        };

        let mut constraints = Vec::new();
        if let Some(sec) = sections.remove("constraints") {
            for e in &sec.entries {
                if !is_identifier(&e.key.text) {
                    return Err(e.key.error(0, "invalid constraint name"));
                }
                constraints.push((e.key.text.clone(), parse_rule(&e.value, &table)?));
            }
        }

        let mut seed = RationalFunction::zero();
        let mut candidates = Vec::new();
        if let Some(sec) = sections.remove("seeds") {
            for e in &sec.entries {
                match e.key.text.as_str() {
                    "seed" => seed = parse_rational_at(&e.value, &table)?,
                    "candidates" => {
                        for v in list(&e.value) {
                            candidates.push(parse_rational_at(&v, &table)?);
                        }
                    }
                    _ => return Err(unknown_key(e, "seeds")),
                }
            }
        }

        let mut frees = Vec::new();
        if let Some(sec) = sections.remove("frees") {
            for e in &sec.entries {
                let sym = parse_symbol(&e.key, &table)?;
                let idx = list(&e.value).iter().map(integer::<u32>).collect::<Result<Vec<_>, _>>()?;
                if idx.len() != rho.len() {
                    return Err(e.value.error(0, "index length must match the rho variables"));
                }
                frees.push((idx, sym));
            }
        }

        let mut run = RunParams {
            order: None,
            l: 1,
            m: 1,
            reduce: Vec::new(),
            rules: Vec::new(),
            stability: Vec::new(),
            ansatz: AnsatzSource::Pade,
            seed: None,
        };
        let mut ansatz_given = false;
        if let Some(sec) = sections.remove("run") {
            for e in &sec.entries {
                match e.key.text.as_str() {
                    "order" => run.order = Some(integer(&e.value)?),
                    "L" => run.l = integer(&e.value)?,
                    "M" => run.m = integer(&e.value)?,
                    "reduce" => run.reduce = names(&e.value)?,
                    "rules" => run.rules = names(&e.value)?,
                    "stability" => {
                        run.stability = list(&e.value).iter().map(integer).collect::<Result<_, _>>()?
                    }
                    "seed" => run.seed = Some(integer(&e.value)?),
                    "ansatz" => {
                        ansatz_given = true;
                        run.ansatz = match e.value.text.as_str() {
                            "pade" => AnsatzSource::Pade,
                            "candidate" => AnsatzSource::Candidate,
                            _ => return Err(e.value.error(0, "expected `pade` or `candidate`")),
                        }
                    }
                    _ => return Err(unknown_key(e, "run")),
                }
            }
        }
        for (n, src) in run.reduce.iter().chain(&run.rules).zip(std::iter::repeat(&symbols.line)) {
            if !constraints.iter().any(|(c, _)| c == n) {
                return Err(FrontendError::UnknownRule { name: n.clone(), line: *src });
            }
        }

        let mut candidate = None;
        if let Some(sec) = sections.remove("candidate") {
            for e in &sec.entries {
                match e.key.text.as_str() {
                    "ansatz" => candidate = Some(parse_rational_at(&e.value, &table)?),
                    _ => return Err(unknown_key(e, "candidate")),
                }
            }
            if !ansatz_given && candidate.is_some() {
                run.ansatz = AnsatzSource::Candidate;
            }
        }
        if run.ansatz == AnsatzSource::Candidate && candidate.is_none() {
            return Err(FrontendError::MissingSection("candidate".into()));
        }

        let mut expect = BTreeMap::new();
        if let Some(sec) = sections.remove("expect") {
            for e in sec.entries {
                expect.insert(e.key.text, e.value.text);
            }
        }

        Ok(ProblemFile {
            name,
            meta,
            table,
            coordinates,
            rho,
            ansatz,
            spacetime,
            equation,
            constraints,
            seed,
            candidates,
            frees,
            run,
            candidate,
            expect,
        })
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.constraints.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    /// Rewrite system of the named constraints.
    pub fn rules_named(&self, names: &[String]) -> Result<RewriteSystem, FrontendError> {
        let mut rs = RewriteSystem::empty();
        for n in names {
            let Some(r) = self.rule(n) else {
                return Err(FrontendError::UnknownRule { name: n.clone(), line: 0 });
            };
            rs.push(r.clone());
        }
        Ok(rs)
    }

    /// Extension rules alone.
    pub fn base_rules(&self) -> RewriteSystem {
        self.table.extension_rules()
    }

    /// Extension rules plus the constraints applied to the equation.
    pub fn equation_rules(&self) -> Result<RewriteSystem, FrontendError> {
        Ok(self.base_rules().union(&self.rules_named(&self.run.reduce)?))
    }

    /// The equation after applying the `reduce` constraints.
    pub fn reduced_equation(&self) -> Result<EulerEquation, FrontendError> {
        Ok(self.equation.reduce(&self.equation_rules()?)?)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.table.lookup(name)
    }

    pub fn poly(&self, name: &str) -> Option<Polynomial> {
        self.symbol(name).map(Polynomial::var)
    }

    pub fn monomial(&self, name: &str) -> Option<Monomial> {
        self.symbol(name).map(Monomial::var)
    }
}
