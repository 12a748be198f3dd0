use std::collections::BTreeMap;

use crate::algebra::{
    Polynomial, Rational, RationalFunction, RewriteSystem, Symbol, SymbolTable,
};

use super::{EulerEquation, EulerTerm, MultiIndex, SeriesError};

/// Constant term `c_0` of a series solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedRoot {
    pub value: RationalFunction,
}

/// Keeps the candidates on which the equation vanishes, with `0` tried
/// first. Candidates are verified, never solved for.
pub fn seed_roots(
    eq: &EulerEquation,
    candidates: &[RationalFunction],
    rs: &RewriteSystem,
) -> Result<Vec<SeedRoot>, SeriesError> {
    let mut out: Vec<SeedRoot> = Vec::new();
    let zero = RationalFunction::zero();
    for c in std::iter::once(&zero).chain(candidates) {
        if out.iter().any(|s| s.value.equals(c)) {
            continue;
        }
        let mut ok = true;
        for v in eq.at_constant(c).values() {
            match v.reduce(rs) {
                Ok(r) if r.is_zero() => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(SeedRoot { value: c.clone() });
        }
    }
    if out.is_empty() {
        return Err(SeriesError::NoCandidates);
    }
    Ok(out)
}

/// Truncated multivariate Taylor series in the ρ variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    rho: Vec<Symbol>,
    coefficients: BTreeMap<MultiIndex, RationalFunction>,
    truncation: u32,
}

impl PowerSeries {
    pub fn new(
        rho: Vec<Symbol>,
        coefficients: BTreeMap<MultiIndex, RationalFunction>,
        truncation: u32,
    ) -> PowerSeries {
        let coefficients = coefficients
            .into_iter()
            .filter(|(j, c)| !c.is_zero() && j.iter().sum::<u32>() <= truncation)
            .collect();
        PowerSeries { rho, coefficients, truncation }
    }

    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn coefficient(&self, j: &[u32]) -> RationalFunction {
        self.coefficients.get(j).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Nonzero coefficients in graded order, lowest degree first.
    pub fn coefficients(&self) -> Vec<(&MultiIndex, &RationalFunction)> {
        let mut v: Vec<_> = self.coefficients.iter().collect();
        v.sort_by(|a, b| graded_cmp(a.0, b.0));
        v
    }

    /// `Σ_J c_J ρ^J` over indices of total degree at most `n`.
    pub fn truncate_to(&self, n: u32) -> PowerSeries {
        PowerSeries::new(self.rho.clone(), self.coefficients.clone(), n.min(self.truncation))
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        let mut s = String::new();
        for (j, c) in self.coefficients() {
            s.push_str(&format!("c[{}] = {}\n", index_text(j), c.display(table)));
        }
        s
    }

    /// Graded coefficients of the equation evaluated on this series, for
    /// every output index fully determined by the stored terms. An exact
    /// series solution returns an empty map.
    pub fn residual(
        &self,
        eq: &EulerEquation,
        rs: &RewriteSystem,
    ) -> Result<BTreeMap<MultiIndex, RationalFunction>, SeriesError> {
        let mut out = BTreeMap::new();
        for n in 0..=self.truncation {
            for j in indices_of_degree(self.rho.len(), n) {
                let mut total = RationalFunction::zero();
                for t in eq.terms() {
                    total = total.add(&term_contribution(t, &j, &self.coefficients));
                }
                let r = total.reduce(rs)?;
                if !r.is_zero() {
                    out.insert(j, r);
                }
            }
        }
        Ok(out)
    }
}

/// `c[3]`, `c[2,1]`.
pub fn index_text(j: &[u32]) -> String {
    j.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// Total degree first, then descending in the first component.
pub fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

/// Multi-indices of total degree `n` over `vars` variables, first
/// component descending.
pub fn indices_of_degree(vars: usize, n: u32) -> Vec<MultiIndex> {
    if vars == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if vars == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for rest in indices_of_degree(vars - 1, n - first) {
            let mut j = Vec::with_capacity(vars);
            j.push(first);
            j.extend(rest);
            out.push(j);
        }
    }
    out
}

/// `Π_d (J_d)_{β_d}`, the factor produced by `∂^β ρ^J`.
fn falling(j: &[u32], beta: &[u32]) -> i64 {
    let mut r = 1i64;
    for (&jd, &bd) in j.iter().zip(beta) {
        if bd > jd {
            return 0;
        }
        for k in 0..bd {
            r *= (jd - k) as i64;
        }
    }
    r
}

/// Sub-indices `K <= J` componentwise.
fn sub_indices(j: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for &jd in j {
        let mut next = Vec::with_capacity(out.len() * (jd as usize + 1));
        for prefix in &out {
            for e in 0..=jd {
                let mut p = prefix.clone();
                p.push(e);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Coefficient of `ρ^(J + shift)` contributed by one term, summing over
/// all ways to split `J` among the term's φ̂ factors.
fn term_contribution(
    t: &EulerTerm,
    j: &[u32],
    coeffs: &BTreeMap<MultiIndex, RationalFunction>,
) -> RationalFunction {
    fn go(
        factors: &[MultiIndex],
        remaining: &[u32],
        coeffs: &BTreeMap<MultiIndex, RationalFunction>,
        acc: &RationalFunction,
        out: &mut RationalFunction,
    ) {
        let Some((beta, rest)) = factors.split_first() else {
            if remaining.iter().all(|&e| e == 0) {
                *out = out.add(acc);
            }
            return;
        };
        let parts = if rest.is_empty() { vec![remaining.to_vec()] } else { sub_indices(remaining) };
        for k in parts {
            let ff = falling(&k, beta);
            if ff == 0 {
                continue;
            }
            let Some(c) = coeffs.get(&k) else { continue };
            let next_rem: Vec<u32> = remaining.iter().zip(&k).map(|(a, b)| a - b).collect();
            let next = acc.mul(c).scale(&Rational::from_integer(ff.into()));
            go(rest, &next_rem, coeffs, &next, out);
        }
    }
    let mut out = RationalFunction::zero();
    go(&t.factors, j, coeffs, &t.coef, &mut out);
    out
}

/// Coefficient of `c_J` in the graded equation at `J`, given `c_0`.
fn linear_part(eq: &EulerEquation, j: &[u32], c0: &RationalFunction) -> RationalFunction {
    let mut lin = RationalFunction::zero();
    for t in eq.terms() {
        for (f, beta) in t.factors.iter().enumerate() {
            let ff = falling(j, beta);
            if ff == 0 {
                continue;
            }
            let mut v = t.coef.scale(&Rational::from_integer(ff.into()));
            let mut alive = true;
            for (g, other) in t.factors.iter().enumerate() {
                if g == f {
                    continue;
                }
                if other.iter().any(|&e| e > 0) {
                    alive = false;
                    break;
                }
                v = v.mul(c0);
            }
            if alive {
                lin = lin.add(&v);
            }
        }
    }
    lin
}

/// Solves the Taylor coefficients order by order up to total degree `n`.
///
/// Indices listed in `frees` take the given symbol as value and must lie
/// in the kernel of the recurrence. Every other coefficient is forced:
/// `c_J = -R_J / L_J` where the graded equation at `J` reads
/// `L_J c_J + R_J = 0`; it is zero when both vanish.
pub fn solve_series(
    eq: &EulerEquation,
    seed: &SeedRoot,
    frees: &[(MultiIndex, Symbol)],
    n: u32,
    table: &SymbolTable,
    rs: &RewriteSystem,
) -> Result<PowerSeries, SeriesError> {
    let shift = eq.shift()?;
    if shift.iter().any(|&s| s != 0) {
        return Err(SeriesError::NotGraded);
    }
    let vars = eq.rho().len();
    for (j, _) in frees {
        if j.len() != vars || j.iter().all(|&e| e == 0) {
            return Err(SeriesError::DimensionMismatch);
        }
    }
    let c0 = seed.value.clone();
    let mut coeffs: BTreeMap<MultiIndex, RationalFunction> = BTreeMap::new();
    if !c0.is_zero() {
        coeffs.insert(vec![0; vars], c0.clone());
    }
    for v in eq.at_constant(&c0).values() {
        if !v.vanishes(rs)? {
            return Err(SeriesError::Obstruction(vec![0; vars]));
        }
    }
    for deg in 1..=n {
        let mut solved = Vec::new();
        for j in indices_of_degree(vars, deg) {
            let mut r = RationalFunction::zero();
            for t in eq.terms() {
                r = r.add(&term_contribution(t, &j, &coeffs));
            }
            let r = r.reduce(rs)?;
            let lin = linear_part(eq, &j, &c0).reduce(rs)?;
            let free = frees.iter().find(|(fj, _)| *fj == j).map(|(_, s)| *s);
            let value = match free {
                Some(sym) => {
                    if !lin.is_zero() || !r.is_zero() {
                        return Err(SeriesError::FreeNotInKernel(j));
                    }
                    RationalFunction::from_poly(Polynomial::var(sym))
                }
                None if lin.is_zero() => {
                    if !r.is_zero() {
                        return Err(SeriesError::Obstruction(j));
                    }
                    RationalFunction::zero()
                }
                None => r.neg().div(&lin)?.rationalize(table, rs)?,
            };
            if !value.is_zero() {
                solved.push((j, value));
            }
        }
        // same-degree coefficients never feed each other
        coeffs.extend(solved);
    }
    Ok(PowerSeries::new(eq.rho().to_vec(), coeffs, n))
}
