//! Homogeneous multivariate Padé approximants: grade a multivariate series
//! by total degree along `ρ -> ξρ`, solve the univariate Padé problem in
//! `ξ` over the polynomial ring, then set `ξ = 1`.

use crate::algebra::{
    lcm_heuristic, AlgebraError, Monomial, Polynomial, RationalFunction, RewriteSystem, Symbol,
    SymbolTable,
};
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PadeError {
    #[error("series known to degree {available}, need {needed}")]
    InsufficientOrder { needed: u32, available: u32 },
    #[error("[{l}/{m}] Padé system is inconsistent")]
    SingularSystem { l: usize, m: usize },
    #[error("collapsed denominator vanishes")]
    DegenerateDenominator,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `a[n] = Σ_{|J|=n} c_J ρ^J`, each a quotient whose numerator is
/// homogeneous of degree `n` in ρ and whose denominator is free of ρ.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    rho: Vec<Symbol>,
    a: Vec<RationalFunction>,
}

pub fn grade(series: &PowerSeries, upto: u32) -> Result<GradedSeries, PadeError> {
    if series.truncation() < upto {
        return Err(PadeError::InsufficientOrder { needed: upto, available: series.truncation() });
    }
    let rho = series.rho().to_vec();
    let mut a = vec![RationalFunction::zero(); upto as usize + 1];
    for (j, c) in series.coefficients() {
        let n = j.iter().sum::<u32>();
        if n > upto {
            continue;
        }
        let mono = Monomial::from_exponents(&rho, j);
        a[n as usize] = a[n as usize].add(&c.mul_poly(&Polynomial::from(mono)));
    }
    Ok(GradedSeries { rho, a })
}

impl GradedSeries {
    pub fn new(rho: Vec<Symbol>, a: Vec<RationalFunction>) -> GradedSeries {
        GradedSeries { rho, a }
    }

    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn get(&self, n: usize) -> RationalFunction {
        self.a.get(n).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// `(Δ, A)` with `a[n] = A[n] / Δ` and every `A[n]` a polynomial.
    pub fn cleared(&self) -> (Polynomial, Vec<Polynomial>) {
        let mut delta = Polynomial::one();
        for a in &self.a {
            if !a.is_zero() && !a.den().divides(&delta) {
                delta = lcm_heuristic(&delta, a.den());
            }
        }
        let big = self
            .a
            .iter()
            .map(|a| {
                if a.is_zero() {
                    return Polynomial::zero();
                }
                let f = delta.div_exact(a.den()).expect("delta is a common multiple");
                a.num().mul(&f)
            })
            .collect();
        (delta, big)
    }
}

/// `P(ξ)/Q(ξ)` with polynomial coefficients. `q[0]` is generally not one:
/// numerator and denominator are scaled by the same nonzero polynomial so
/// that all coefficients stay polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    rho: Vec<Symbol>,
    pub l: usize,
    pub m: usize,
    pub p: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    /// Factors worth trying to cancel on collapse.
    hints: Vec<Polynomial>,
}

impl PadeApproximant {
    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    /// Indices `j <= L+M` where `Σ_{r+s=j} a_r q_s - p_j` does not vanish.
    pub fn order_defects(&self, g: &GradedSeries, rs: &RewriteSystem) -> Result<Vec<usize>, AlgebraError> {
        let mut bad = Vec::new();
        for j in 0..=self.l + self.m {
            let mut sum = RationalFunction::zero();
            for s in 0..=j.min(self.m) {
                sum = sum.add(&g.get(j - s).mul_poly(&self.q[s]));
            }
            if j <= self.l {
                sum = sum.sub(&RationalFunction::from_poly(self.p[j].clone()));
            }
            if !sum.vanishes(rs)? {
                bad.push(j);
            }
        }
        Ok(bad)
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        let mut s = String::new();
        for (j, p) in self.p.iter().enumerate() {
            s.push_str(&format!("p[{j}] = {}\n", p.display(table)));
        }
        for (j, q) in self.q.iter().enumerate() {
            s.push_str(&format!("q[{j}] = {}\n", q.display(table)));
        }
        s
    }
}

fn reduced_zero(p: &Polynomial, rs: &RewriteSystem) -> Result<bool, AlgebraError> {
    Ok(p.is_zero() || rs.vanishes(p)?)
}

/// Solves `Σ_{s=0}^{M} a_{j-s} q_s = 0` for `j = L+1..L+M` by
/// fraction-free elimination over the polynomial ring.
///
/// Pivots are the first entry in row order that does not vanish modulo
/// `rs`. A column without a pivot leaves its unknown free; it is set to
/// zero, which is how blocks of a non-normal Padé table are resolved.
/// Only an inconsistent system is reported as singular.
pub fn pade_solve(
    g: &GradedSeries,
    l: usize,
    m: usize,
    rs: &RewriteSystem,
) -> Result<PadeApproximant, PadeError> {
    if g.len() < l + m + 1 {
        return Err(PadeError::InsufficientOrder {
            needed: (l + m) as u32,
            available: g.len().saturating_sub(1) as u32,
        });
    }
    let (delta, big) = g.cleared();
    let at = |n: isize| -> Polynomial {
        if n < 0 {
            Polynomial::zero()
        } else {
            big[n as usize].clone()
        }
    };
    // rows j = L+1..L+M, columns q_1..q_M, last column the right-hand side
    let mut mat: Vec<Vec<Polynomial>> = (1..=m)
        .map(|r| {
            let j = (l + r) as isize;
            let mut row: Vec<Polynomial> = (1..=m).map(|s| at(j - s as isize)).collect();
            row.push(at(j).neg());
            row
        })
        .collect();
    let mut prev = Polynomial::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let mut found = None;
        for r in rank..m {
            if !reduced_zero(&mat[r][col], rs)? {
                found = Some(r);
                break;
            }
        }
        let Some(pr) = found else { continue };
        mat.swap(rank, pr);
        let piv = mat[rank][col].clone();
        for r in rank + 1..m {
            let factor = mat[r][col].clone();
            for c in col + 1..=m {
                let v = piv.mul(&mat[r][c]).sub(&factor.mul(&mat[rank][c]));
                mat[r][c] = v.div_exact(&prev)?;
            }
            mat[r][col] = Polynomial::zero();
        }
        prev = piv;
        pivots.push((rank, col));
        rank += 1;
    }
    for row in mat.iter().skip(rank) {
        if !reduced_zero(&row[m], rs)? {
            return Err(PadeError::SingularSystem { l, m });
        }
    }
    // y_s = D q_s with D the last pivot
    let det = prev;
    let mut y = vec![Polynomial::zero(); m + 1];
    y[0] = det.clone();
    for &(r, c) in pivots.iter().rev() {
        let mut acc = det.mul(&mat[r][m]);
        for &(_, c2) in pivots.iter().filter(|&&(_, c2)| c2 > c) {
            acc = acc.sub(&mat[r][c2].mul(&y[c2 + 1]));
        }
        y[c + 1] = acc.div_exact(&mat[r][c])?;
    }
    let p: Vec<Polynomial> = (0..=l)
        .map(|j| {
            let mut s = Polynomial::zero();
            for k in 0..=j.min(m) {
                s = s.add(&big[j - k].mul(&y[k]));
            }
            s
        })
        .collect();
    let q: Vec<Polynomial> = y.iter().map(|v| v.mul(&delta)).collect();
    let mut hints: Vec<Polynomial> = Vec::new();
    let mut hint = |p: &Polynomial| {
        if p.is_zero() {
            return;
        }
        let core = p.div_monomial(&p.monomial_content()).expect("content divides").primitive().1;
        if !core.is_constant() && !hints.contains(&core) {
            hints.push(core);
        }
    };
    for a in &g.a {
        hint(a.num());
        hint(a.den());
    }
    for &(r, c) in &pivots {
        hint(&mat[r][c]);
    }
    hint(&delta);
    // a coefficient numerator often factors through a lower one
    let base = hints.clone();
    for a in &base {
        for b in &base {
            if a.degree() > b.degree() {
                if let Ok(q) = a.div_exact(b) {
                    let q = q.primitive().1;
                    if !q.is_constant() && !hints.contains(&q) {
                        hints.push(q);
                    }
                }
            }
        }
    }
    let p = p.iter().map(|v| rs.reduce(v)).collect::<Result<Vec<_>, _>>()?;
    let q = q.iter().map(|v| rs.reduce(v)).collect::<Result<Vec<_>, _>>()?;
    let pa = PadeApproximant { rho: g.rho.clone(), l, m, p, q, hints };
    if !pa.order_defects(g, rs)?.is_empty() {
        return Err(PadeError::SingularSystem { l, m });
    }
    Ok(pa)
}

/// Candidate solution `num/den` in the ρ variables.
#[derive(Clone, Debug)]
pub struct RationalAnsatz {
    rho: Vec<Symbol>,
    value: RationalFunction,
}

impl RationalAnsatz {
    pub fn new(rho: Vec<Symbol>, value: RationalFunction) -> RationalAnsatz {
        RationalAnsatz { rho, value }
    }

    pub fn rho(&self) -> &[Symbol] {
        &self.rho
    }

    pub fn value(&self) -> &RationalFunction {
        &self.value
    }

    pub fn num(&self) -> &Polynomial {
        self.value.num()
    }

    pub fn den(&self) -> &Polynomial {
        self.value.den()
    }

    /// The denominator has no constant term in ρ, so the ansatz is not
    /// regular at the origin.
    pub fn degenerate_at_origin(&self, rs: &RewriteSystem) -> Result<bool, AlgebraError> {
        let c = self
            .den()
            .collect(&self.rho)
            .remove(&Monomial::one())
            .unwrap_or_default();
        Ok(c.is_zero() || rs.vanishes(&c)?)
    }

    /// Equality by cross-multiplication modulo `rs`.
    pub fn equals_mod(&self, other: &RationalAnsatz, rs: &RewriteSystem) -> Result<bool, AlgebraError> {
        self.value.equals_mod(&other.value, rs)
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        let v = &self.value;
        format!("({})/({})", v.num().display(table), v.den().display(table))
    }
}

/// Sets `ξ = 1`, reduces both sides modulo `rs` and cancels common
/// factors found among the series coefficients and elimination pivots.
pub fn collapse(pa: &PadeApproximant, rs: &RewriteSystem) -> Result<RationalAnsatz, PadeError> {
    let sum = |v: &[Polynomial]| v.iter().fold(Polynomial::zero(), |acc, x| acc.add(x));
    let num = sum(&pa.p);
    let den = sum(&pa.q);
    if den.is_zero() {
        return Err(PadeError::DegenerateDenominator);
    }
    let raw = RationalFunction::new(num, den)?.cancel_factors(&pa.hints);
    let den = rs.reduce(raw.den())?;
    if den.is_zero() {
        return Err(PadeError::DegenerateDenominator);
    }
    let num = rs.reduce(raw.num())?;
    let value = RationalFunction::new(num, den)?.cancel_factors(&pa.hints);
    let value = if value.num().is_zero() { RationalFunction::zero() } else { value };
    Ok(RationalAnsatz { rho: pa.rho.clone(), value })
}
