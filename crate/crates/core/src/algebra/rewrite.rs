use std::collections::HashMap;

use num_traits::Zero;

use super::{AlgebraError, Monomial, Polynomial, Rational, Symbol};

/// Oriented rule `pattern -> replacement`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pattern: Monomial,
    replacement: Polynomial,
}

impl Rule {
    /// Accepts a rule only when every replacement term has strictly lower
    /// degree in the pattern's symbols than the pattern itself.
    pub fn new(pattern: Monomial, replacement: Polynomial) -> Result<Rule, AlgebraError> {
        if pattern.is_one() {
            return Err(AlgebraError::InvalidRule("rule pattern must not be 1".into()));
        }
        let syms: Vec<Symbol> = pattern.symbols().collect();
        let bound = pattern.degree();
        for (m, _) in replacement.terms() {
            let d: u32 = syms.iter().map(|&s| m.exponent(s)).sum();
            if d >= bound {
                return Err(AlgebraError::InvalidRule(
                    "replacement does not lower the degree in the pattern symbols".into(),
                ));
            }
        }
        Ok(Rule { pattern, replacement })
    }

    pub fn pattern(&self) -> &Monomial {
        &self.pattern
    }

    pub fn replacement(&self) -> &Polynomial {
        &self.replacement
    }

    fn is_pure_power(&self) -> bool {
        self.pattern.pairs().len() == 1
    }
}

/// Ordered list of rules applied to a fixpoint. Single-symbol power rules
/// are tried before mixed products, otherwise rules keep insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
}

const MAX_DEPTH: usize = 4096;

impl RewriteSystem {
    pub fn new(rules: Vec<Rule>) -> Result<RewriteSystem, AlgebraError> {
        let mut rs = RewriteSystem::default();
        for r in rules {
            rs.push(r);
        }
        Ok(rs)
    }

    pub fn empty() -> RewriteSystem {
        RewriteSystem::default()
    }

    pub fn push(&mut self, rule: Rule) {
        if self.rules.contains(&rule) {
            return;
        }
        if rule.is_pure_power() {
            let at = self.rules.iter().position(|r| !r.is_pure_power()).unwrap_or(self.rules.len());
            self.rules.insert(at, rule);
        } else {
            self.rules.push(rule);
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rules of `self` followed by those of `other` (duplicates dropped).
    pub fn union(&self, other: &RewriteSystem) -> RewriteSystem {
        let mut out = self.clone();
        for r in &other.rules {
            out.push(r.clone());
        }
        out
    }

    /// Reduces `p` until no monomial matches a rule pattern.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if self.rules.is_empty() {
            return Ok(p.clone());
        }
        let budget = 64 * (p.degree() as usize + 1) * (self.rules.len() + 1) * (p.len() + 1)
            + 100_000;
        let mut ctx = Reducer { rules: &self.rules, memo: HashMap::new(), steps: 0, budget };
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let nf = ctx.normal_form(m, 0)?;
            for (t, k) in nf.terms() {
                out.add_term(t.clone(), k * c);
            }
        }
        Ok(out)
    }

    /// True when `p` reduces to zero.
    pub fn vanishes(&self, p: &Polynomial) -> Result<bool, AlgebraError> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Checks local confluence by reducing every critical pair: for each
    /// pair of rules whose patterns share a symbol, the lcm of the patterns
    /// is rewritten one step by each rule and both results are reduced to
    /// normal form. Returns the first overlap that does not join.
    pub fn check_confluence(&self) -> Result<(), Monomial> {
        for (i, a) in self.rules.iter().enumerate() {
            for b in &self.rules[i..] {
                let shares = a.pattern.symbols().any(|s| b.pattern.exponent(s) > 0);
                if !shares {
                    continue;
                }
                let overlap = a.pattern.lcm(&b.pattern);
                let via = |r: &Rule| -> Result<Polynomial, AlgebraError> {
                    let rest = overlap.div(&r.pattern).expect("pattern divides lcm");
                    let step = r.replacement.mul_monomial(&rest, &Rational::from_integer(1.into()));
                    self.reduce(&step)
                };
                match (via(a), via(b)) {
                    (Ok(x), Ok(y)) if x == y => {}
                    _ => return Err(overlap),
                }
            }
        }
        Ok(())
    }
}

struct Reducer<'a> {
    rules: &'a [Rule],
    memo: HashMap<Monomial, Polynomial>,
    steps: usize,
    budget: usize,
}

impl Reducer<'_> {
    fn normal_form(&mut self, m: &Monomial, depth: usize) -> Result<Polynomial, AlgebraError> {
        if let Some(p) = self.memo.get(m) {
            return Ok(p.clone());
        }
        self.steps += 1;
        if self.steps > self.budget || depth > MAX_DEPTH {
            return Err(AlgebraError::NonTerminating);
        }
        let hit = self.rules.iter().find_map(|r| m.div(&r.pattern).map(|rest| (r, rest)));
        let result = match hit {
            None => Polynomial::from(m.clone()),
            Some((rule, rest)) => {
                let mut acc = Polynomial::zero();
                for (t, c) in rule.replacement.terms() {
                    if c.is_zero() {
                        continue;
                    }
                    let nf = self.normal_form(&rest.mul(t), depth + 1)?;
                    for (tm, k) in nf.terms() {
                        acc.add_term(tm.clone(), k * c);
                    }
                }
                acc
            }
        };
        self.memo.insert(m.clone(), result.clone());
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;

    #[test]
    fn imaginary_unit_cubed() {
        let t = SymbolTable::new();
        let i = t.extension("i", 2, Polynomial::constant_i64(-1)).unwrap();
        let rs = t.extension_rules();
        let r = rs.reduce(&Polynomial::var(i).pow(3)).unwrap();
        assert_eq!(r, Polynomial::var(i).neg());
    }

    #[test]
    fn mass_shell_squares() {
        let t = SymbolTable::new();
        let k10 = t.parameter("k10").unwrap();
        let k20 = t.parameter("k20").unwrap();
        let a = t.parameter("a").unwrap();
        let b = t.parameter("b").unwrap();
        let m = t.parameter("m").unwrap();
        let m2 = Polynomial::var(m).pow(2);
        let ra = Polynomial::var(a).sub(&m2);
        let rb = Polynomial::var(b).sub(&m2);
        let rs = RewriteSystem::new(vec![
            Rule::new(Monomial::power(k10, 2), ra.clone()).unwrap(),
            Rule::new(Monomial::power(k20, 2), rb.clone()).unwrap(),
        ])
        .unwrap();
        let p = Polynomial::var(k10).pow(2).mul(&Polynomial::var(k20).pow(2));
        assert_eq!(rs.reduce(&p).unwrap(), ra.mul(&rb));
        assert!(rs.check_confluence().is_ok());
    }

    #[test]
    fn rejects_degree_raising_rule() {
        let t = SymbolTable::new();
        let x = t.parameter("x").unwrap();
        let r = Rule::new(Monomial::var(x), Polynomial::var(x).pow(2));
        assert!(matches!(r, Err(AlgebraError::InvalidRule(_))));
    }

    #[test]
    fn cyclic_rules_hit_the_budget() {
        let t = SymbolTable::new();
        let a = t.parameter("a").unwrap();
        let b = t.parameter("b").unwrap();
        let rs = RewriteSystem::new(vec![
            Rule::new(Monomial::var(a), Polynomial::var(b).pow(2)).unwrap(),
            Rule::new(Monomial::var(b), Polynomial::var(a)).unwrap(),
        ])
        .unwrap();
        assert!(matches!(rs.reduce(&Polynomial::var(a)), Err(AlgebraError::NonTerminating)));
    }

    #[test]
    fn mixed_product_rule_after_squares_is_not_confluent() {
        let t = SymbolTable::new();
        let k10 = t.parameter("k10").unwrap();
        let k20 = t.parameter("k20").unwrap();
        let a = Polynomial::var(t.parameter("a").unwrap());
        let b = Polynomial::var(t.parameter("b").unwrap());
        let c = Polynomial::var(t.parameter("c").unwrap());
        let rs = RewriteSystem::new(vec![
            Rule::new(Monomial::power(k10, 2), a).unwrap(),
            Rule::new(Monomial::power(k20, 2), b).unwrap(),
            Rule::new(Monomial::from_pairs([(k10, 1), (k20, 1)]), c).unwrap(),
        ])
        .unwrap();
        assert!(rs.check_confluence().is_err());
    }
}
