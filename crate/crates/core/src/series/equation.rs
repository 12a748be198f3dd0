use std::collections::BTreeMap;
use std::fmt::Write;

use crate::algebra::{
    AlgebraError, Monomial, Polynomial, RationalFunction, RewriteSystem, Symbol, SymbolKind,
    SymbolTable,
};

use super::{MultiIndex, SeriesError};

/// First derivatives of the ρ variables: `table[mu][k]` is `∂_mu ρ_k`
/// written as a polynomial in the ρ symbols and parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzDefinition {
    rho: Vec<Symbol>,
    table: Vec<Vec<Polynomial>>,
}

impl AnsatzDefinition {
    /// Entries must be polynomials (a constant denominator is allowed).
    pub fn new(
        rho: Vec<Symbol>,
        table: Vec<Vec<RationalFunction>>,
    ) -> Result<AnsatzDefinition, SeriesError> {
        let mut rows = Vec::with_capacity(table.len());
        for (mu, row) in table.into_iter().enumerate() {
            if row.len() != rho.len() {
                return Err(SeriesError::UnsupportedAnsatz(format!(
                    "coordinate {mu} has {} entries for {} rho variables",
                    row.len(),
                    rho.len()
                )));
            }
            let mut out = Vec::with_capacity(row.len());
            for (k, f) in row.into_iter().enumerate() {
                match f.as_polynomial() {
                    Some(p) => out.push(p),
                    None => {
                        return Err(SeriesError::UnsupportedAnsatz(format!(
                            "entry ({mu}, {k}) is not polynomial in the rho variables"
                        )))
                    }
                }
            }
            rows.push(out);
        }
        Ok(AnsatzDefinition { rho, table: rows })
    }

    /// Plane waves `ρ_k = exp(i k_k·x)`: `∂_mu ρ_k = i*k[k][mu]*ρ_k`.
    pub fn exponential(rho: Vec<Symbol>, unit: Symbol, wave: &[Vec<Symbol>]) -> AnsatzDefinition {
        let dim = wave.first().map_or(0, |w| w.len());
        let table = (0..dim)
            .map(|mu| {
                rho.iter()
                    .zip(wave)
                    .map(|(&r, k)| {
                        Polynomial::var(unit).mul(&Polynomial::var(k[mu])).mul(&Polynomial::var(r))
                    })
                    .collect()
            })
            .collect();
        AnsatzDefinition { rho, table }
    }

    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn dimension(&self) -> usize {
        self.table.len()
    }

    pub fn entry(&self, mu: usize, k: usize) -> &Polynomial {
        &self.table[mu][k]
    }

    /// `∂_mu g` for `g` depending on the coordinates only through ρ.
    fn chain(&self, mu: usize, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, &r) in self.rho.iter().enumerate() {
            let dg = g.derivative(r);
            if !dg.is_zero() {
                out = out.add(&self.table[mu][k].mul(&dg));
            }
        }
        out
    }
}

/// One term `coef * Π_f ∂^{α_f} φ` of a spacetime equation.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeTerm {
    pub coef: RationalFunction,
    pub factors: Vec<MultiIndex>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeEquation {
    dimension: usize,
    terms: Vec<SpacetimeTerm>,
}

impl SpacetimeEquation {
    pub fn new(dimension: usize, terms: Vec<SpacetimeTerm>) -> Result<SpacetimeEquation, SeriesError> {
        if terms.is_empty() {
            return Err(SeriesError::EmptyEquation);
        }
        for t in &terms {
            if t.factors.iter().any(|a| a.len() != dimension) {
                return Err(SeriesError::DimensionMismatch);
            }
        }
        Ok(SpacetimeEquation { dimension, terms })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &[SpacetimeTerm] {
        &self.terms
    }
}

/// One term `coef * ρ^rho * Π_f ∂^{β_f} φ̂`. `factors` is sorted, so a
/// term is identified by `(factors, rho)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerTerm {
    pub coef: RationalFunction,
    pub rho: Monomial,
    pub factors: Vec<MultiIndex>,
}

/// A PDE in the ρ variables.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerEquation {
    rho: Vec<Symbol>,
    terms: Vec<EulerTerm>,
}

type TermKey = (Vec<MultiIndex>, Monomial);

impl EulerEquation {
    /// Builds a canonical equation from `(coef, factors)` pairs. The
    /// coefficient numerator may contain ρ symbols; the denominator may not.
    pub fn from_parts(
        rho: Vec<Symbol>,
        parts: Vec<(RationalFunction, Vec<MultiIndex>)>,
    ) -> Result<EulerEquation, SeriesError> {
        let mut acc: BTreeMap<TermKey, RationalFunction> = BTreeMap::new();
        for (coef, mut factors) in parts {
            if factors.iter().any(|b| b.len() != rho.len()) {
                return Err(SeriesError::DimensionMismatch);
            }
            if coef.den().mentions_any(&rho) {
                return Err(SeriesError::UnsupportedAnsatz(
                    "coefficient denominator depends on a rho variable".into(),
                ));
            }
            factors.sort();
            let den = coef.den().clone();
            for (m, c) in coef.num().collect(&rho) {
                let rf = RationalFunction::new(c, den.clone()).expect("nonzero denominator");
                let key = (factors.clone(), m);
                let sum = match acc.remove(&key) {
                    Some(prev) => prev.add(&rf),
                    None => rf,
                };
                acc.insert(key, sum);
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((factors, rho), coef)| EulerTerm { coef, rho, factors })
            .collect();
        Ok(EulerEquation { rho, terms })
    }

    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn terms(&self) -> &[EulerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Reduces every coefficient and drops the ones that vanish.
    pub fn reduce(&self, rs: &RewriteSystem) -> Result<EulerEquation, AlgebraError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let coef = t.coef.reduce(rs)?;
            if !coef.is_zero() {
                terms.push(EulerTerm { coef, ..t.clone() });
            }
        }
        Ok(EulerEquation { rho: self.rho.clone(), terms })
    }

    pub fn scale(&self, c: &RationalFunction) -> EulerEquation {
        let parts = self
            .terms
            .iter()
            .map(|t| (t.coef.mul(c).mul_poly(&Polynomial::from(t.rho.clone())), t.factors.clone()))
            .collect();
        EulerEquation::from_parts(self.rho.clone(), parts).expect("already canonical")
    }

    pub fn add(&self, other: &EulerEquation) -> Result<EulerEquation, SeriesError> {
        if self.rho != other.rho {
            return Err(SeriesError::DimensionMismatch);
        }
        let parts = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|t| (t.coef.mul_poly(&Polynomial::from(t.rho.clone())), t.factors.clone()))
            .collect();
        EulerEquation::from_parts(self.rho.clone(), parts)
    }

    /// The common grading shift `γ - Σ β_f` of every term, per ρ variable.
    /// Plugging `ρ^J` contributions whose indices sum to `J` into a term
    /// yields the output monomial `ρ^(J + shift)`.
    pub fn shift(&self) -> Result<Vec<i64>, SeriesError> {
        let mut shift: Option<Vec<i64>> = None;
        for t in &self.terms {
            let s: Vec<i64> = self
                .rho
                .iter()
                .enumerate()
                .map(|(d, &r)| {
                    t.rho.exponent(r) as i64 - t.factors.iter().map(|b| b[d] as i64).sum::<i64>()
                })
                .collect();
            match &shift {
                None => shift = Some(s),
                Some(prev) if *prev != s => return Err(SeriesError::NotGraded),
                Some(_) => {}
            }
        }
        Ok(shift.unwrap_or_else(|| vec![0; self.rho.len()]))
    }

    /// Power of the ansatz denominator that clears every term after
    /// substituting a quotient: a factor `∂^β φ̂` carries `den^(|β|+1)`.
    pub fn clearing_power(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.factors.iter().map(|b| b.iter().sum::<u32>() + 1).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Largest number of φ̂ factors in a term.
    pub fn nonlinearity(&self) -> usize {
        self.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0)
    }

    /// Value of the equation on the constant field `φ̂ = c`, by ρ monomial.
    pub fn at_constant(&self, c: &RationalFunction) -> BTreeMap<Monomial, RationalFunction> {
        let mut out: BTreeMap<Monomial, RationalFunction> = BTreeMap::new();
        for t in &self.terms {
            if t.factors.iter().any(|b| b.iter().any(|&e| e > 0)) {
                continue;
            }
            let v = t.coef.mul(&c.pow(t.factors.len() as u32));
            let e = out.entry(t.rho.clone()).or_insert_with(RationalFunction::zero);
            *e = e.add(&v);
        }
        out
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (n, t) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                s.push_str(" + ");
            }
            write!(s, "({})", t.coef.display(table)).unwrap();
            if !t.rho.is_one() {
                write!(s, "*{}", t.rho.to_text(table)).unwrap();
            }
            for b in &t.factors {
                s.push('*');
                s.push_str(&factor_text(&self.rho, b, table));
            }
        }
        s
    }
}

/// `phi` or `d(phi; rho1^2 rho2)`.
pub fn factor_text(vars: &[Symbol], beta: &[u32], table: &SymbolTable) -> String {
    if beta.iter().all(|&e| e == 0) {
        return "phi".into();
    }
    let parts: Vec<String> = vars
        .iter()
        .zip(beta)
        .filter(|(_, &e)| e > 0)
        .map(|(&v, &e)| {
            if e == 1 {
                table.name(v).to_string()
            } else {
                format!("{}^{e}", table.name(v))
            }
        })
        .collect();
    format!("d(phi; {})", parts.join(" "))
}

/// `Σ_β g_β ∂^β φ̂` with `g_β` polynomial in ρ and parameters.
type DiffExpr = BTreeMap<MultiIndex, Polynomial>;

fn apply_coordinate(ansatz: &AnsatzDefinition, mu: usize, expr: &DiffExpr) -> DiffExpr {
    let mut out: DiffExpr = BTreeMap::new();
    let mut push = |beta: MultiIndex, g: Polynomial| {
        if g.is_zero() {
            return;
        }
        let e = out.entry(beta).or_default();
        *e = e.add(&g);
    };
    for (beta, g) in expr {
        push(beta.clone(), ansatz.chain(mu, g));
        for k in 0..ansatz.rho.len() {
            let mut next = beta.clone();
            next[k] += 1;
            push(next, g.mul(&ansatz.table[mu][k]));
        }
    }
    out.retain(|_, g| !g.is_zero());
    out
}

/// Rewrites a spacetime equation in the ρ variables by the chain rule
/// `∂_mu = Σ_k F[mu][k] ∂_{ρ_k}`. The result is not reduced; apply
/// [`EulerEquation::reduce`] with the extension rules afterwards.
pub fn transform(
    eq: &SpacetimeEquation,
    ansatz: &AnsatzDefinition,
) -> Result<EulerEquation, SeriesError> {
    if ansatz.dimension() != eq.dimension() {
        return Err(SeriesError::DimensionMismatch);
    }
    let nrho = ansatz.rho.len();
    let mut cache: BTreeMap<MultiIndex, DiffExpr> = BTreeMap::new();
    let mut expand = |alpha: &MultiIndex| -> DiffExpr {
        if let Some(e) = cache.get(alpha) {
            return e.clone();
        }
        let mut expr: DiffExpr = BTreeMap::new();
        expr.insert(vec![0; nrho], Polynomial::one());
        for (mu, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                expr = apply_coordinate(ansatz, mu, &expr);
            }
        }
        cache.insert(alpha.clone(), expr.clone());
        expr
    };
    let mut parts = Vec::new();
    for term in &eq.terms {
        // expand the product of the factors' sums
        let mut partial: Vec<(Polynomial, Vec<MultiIndex>)> = vec![(Polynomial::one(), Vec::new())];
        for alpha in &term.factors {
            let expr = expand(alpha);
            let mut next = Vec::with_capacity(partial.len() * expr.len());
            for (g, fs) in &partial {
                for (beta, h) in &expr {
                    let mut fs = fs.clone();
                    fs.push(beta.clone());
                    next.push((g.mul(h), fs));
                }
            }
            partial = next;
        }
        for (g, fs) in partial {
            parts.push((term.coef.mul_poly(&g), fs));
        }
    }
    EulerEquation::from_parts(ansatz.rho.clone(), parts)
}

/// Checks that the ρ symbols are registered as ρ variables.
pub(crate) fn check_rho_symbols(table: &SymbolTable, rho: &[Symbol]) -> Result<(), SeriesError> {
    for &r in rho {
        if table.kind(r) != SymbolKind::RhoVariable {
            return Err(SeriesError::UnsupportedAnsatz(format!(
                "{} is not a rho variable",
                table.name(r)
            )));
        }
    }
    Ok(())
}
