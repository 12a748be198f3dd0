//! Substitution of a rational ansatz into an equation in ρ variables and
//! extraction of the polynomial conditions for it to be exact.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{
    lcm_heuristic, AlgebraError, Polynomial, RewriteSystem, Symbol, SymbolTable,
};
use crate::pade::RationalAnsatz;
use crate::series::{graded_cmp, index_text, EulerEquation, MultiIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResidualError {
    #[error("ansatz denominator vanishes under the active rules")]
    ZeroDenominator,
    #[error("ansatz and equation use different rho variables")]
    RhoMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coefficients `E[J]` of the cleared residual numerator, by ρ index, and
/// the clearing denominator `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionSet {
    rho: Vec<Symbol>,
    conditions: BTreeMap<MultiIndex, Polynomial>,
    pub denominator: Polynomial,
    /// Largest total ρ degree the cleared numerator can reach.
    pub max_degree: u32,
}

impl ConditionSet {
    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn get(&self, j: &[u32]) -> Option<&Polynomial> {
        self.conditions.get(j)
    }

    /// Conditions ordered by total degree, then first index descending.
    pub fn iter(&self) -> Vec<(&MultiIndex, &Polynomial)> {
        let mut v: Vec<_> = self.conditions.iter().collect();
        v.sort_by(|a, b| graded_cmp(a.0, b.0));
        v
    }

    /// Same denominator, each condition replaced by `f(J, E_J)`; zero
    /// results are dropped.
    pub fn map(&self, f: impl Fn(&MultiIndex, &Polynomial) -> Polynomial) -> ConditionSet {
        let conditions = self
            .conditions
            .iter()
            .map(|(j, p)| (j.clone(), f(j, p)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        ConditionSet { conditions, ..self.clone() }
    }

    pub fn indices(&self) -> Vec<MultiIndex> {
        self.iter().into_iter().map(|(j, _)| j.clone()).collect()
    }

    /// One `E[J] = ...` line per condition followed by `D = ...`.
    pub fn to_text(&self, table: &SymbolTable) -> String {
        let mut s = String::new();
        for (j, p) in self.iter() {
            s.push_str(&format!("E[{}] = {}\n", index_text(j), p.display(table)));
        }
        s.push_str(&format!("D = {}\n", self.denominator.display(table)));
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessVerdict {
    pub exact: bool,
    pub residual_conditions: ConditionSet,
    pub denominator_ok: bool,
}

/// Numerators `A_β` with `∂^β(N/D) = A_β / D^(|β|+1)`.
struct Quotients<'a> {
    rho: &'a [Symbol],
    den: &'a Polynomial,
    den_grad: Vec<Polynomial>,
    memo: HashMap<MultiIndex, Polynomial>,
}

impl<'a> Quotients<'a> {
    fn new(rho: &'a [Symbol], num: &Polynomial, den: &'a Polynomial) -> Self {
        let den_grad = rho.iter().map(|&r| den.derivative(r)).collect();
        let mut memo = HashMap::new();
        memo.insert(vec![0; rho.len()], num.clone());
        Quotients { rho, den, den_grad, memo }
    }

    fn get(&mut self, beta: &[u32]) -> Polynomial {
        if let Some(p) = self.memo.get(beta) {
            return p.clone();
        }
        let k = beta.iter().position(|&e| e > 0).expect("zero index is memoized");
        let mut lower = beta.to_vec();
        lower[k] -= 1;
        let a = self.get(&lower);
        let e: u32 = lower.iter().sum::<u32>() + 1;
        // ∂(A/D^e) = (∂A·D - e·A·∂D) / D^(e+1)
        let v = a
            .derivative(self.rho[k])
            .mul(self.den)
            .sub(&a.mul(&self.den_grad[k]).scale(&crate::algebra::int(e as i64)));
        self.memo.insert(beta.to_vec(), v.clone());
        v
    }
}

/// Substitutes `φ̂ = num/den`, multiplies through by `den^w` (and the
/// coefficient denominators), reduces by `rs` and collects by ρ monomial.
pub fn conditions(
    ansatz: &RationalAnsatz,
    eq: &EulerEquation,
    rs: &RewriteSystem,
) -> Result<ConditionSet, ResidualError> {
    if ansatz.rho() != eq.rho() {
        return Err(ResidualError::RhoMismatch);
    }
    let rho = eq.rho();
    let den = ansatz.den();
    if rs.vanishes(den)? {
        return Err(ResidualError::ZeroDenominator);
    }
    let w = eq.clearing_power();
    let mut coef_den = Polynomial::one();
    for t in eq.terms() {
        if !t.coef.den().divides(&coef_den) {
            coef_den = lcm_heuristic(&coef_den, t.coef.den());
        }
    }
    let mut quot = Quotients::new(rho, ansatz.num(), den);
    let mut den_pows = vec![Polynomial::one()];
    for k in 1..=w as usize {
        den_pows.push(den_pows[k - 1].mul(den));
    }
    let mut total = Polynomial::zero();
    for t in eq.terms() {
        let scale = coef_den.div_exact(t.coef.den())?;
        let mut v = t.coef.num().mul(&scale).mul(&Polynomial::from(t.rho.clone()));
        let mut used = 0;
        for beta in &t.factors {
            v = v.mul(&quot.get(beta));
            used += beta.iter().sum::<u32>() + 1;
        }
        v = v.mul(&den_pows[(w - used) as usize]);
        total = total.add(&v);
    }
    let max_degree = total.degree_over(rho);
    let reduced = rs.reduce(&total)?;
    let mut out = BTreeMap::new();
    for (m, c) in reduced.collect(rho) {
        if !c.is_zero() {
            out.insert(m.exponents_over(rho), c);
        }
    }
    let denominator = rs.reduce(&den_pows[w as usize])?;
    Ok(ConditionSet { rho: rho.to_vec(), conditions: out, denominator, max_degree })
}

/// Conditions under `rs_base ∪ extra_rules`; exact when none survive and
/// the clearing denominator does not vanish.
pub fn verify(
    ansatz: &RationalAnsatz,
    eq: &EulerEquation,
    rs_base: &RewriteSystem,
    extra_rules: &RewriteSystem,
) -> Result<ExactnessVerdict, ResidualError> {
    let rs = rs_base.union(extra_rules);
    let cs = conditions(ansatz, eq, &rs)?;
    let denominator_ok = !cs.denominator.is_zero();
    Ok(ExactnessVerdict { exact: cs.is_empty() && denominator_ok, residual_conditions: cs, denominator_ok })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorReport {
    /// How many times each candidate divides the condition.
    pub multiplicities: Vec<u32>,
    pub cofactor: Polynomial,
}

/// Strips every candidate from every condition by repeated exact division.
/// Constant candidates are never divided out and report multiplicity 0.
pub fn factor_check(cs: &ConditionSet, candidates: &[Polynomial]) -> BTreeMap<MultiIndex, FactorReport> {
    let mut out = BTreeMap::new();
    for (j, cond) in cs.iter() {
        let mut rest = cond.clone();
        let mut mult = Vec::with_capacity(candidates.len());
        for c in candidates {
            let mut k = 0;
            if !c.is_constant() {
                while let Ok(q) = rest.div_exact(c) {
                    rest = q;
                    k += 1;
                }
            }
            mult.push(k);
        }
        out.insert(j.clone(), FactorReport { multiplicities: mult, cofactor: rest });
    }
    out
}
