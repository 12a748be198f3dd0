//! Floating point oracle: evaluates a candidate directly in the spacetime
//! equation at sampled points, with parameters drawn to satisfy the
//! active constraints.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::algebra::{EvalRing, Polynomial, Rational, RationalFunction, Symbol, SymbolKind};
use crate::frontend::ProblemFile;
use crate::pade::RationalAnsatz;
use crate::residual::ConditionSet;

use super::jet::{Jet, JetSpace};

/// Points closer to a pole than this are rejected.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("denominator is {magnitude:e} at a sample point")]
    NearPole { magnitude: f64 },
    #[error("no value for symbol `{0}`")]
    Unbound(String),
    #[error("problem has no spacetime equation")]
    NoSpacetimeEquation,
    #[error("ansatz entry ({0}, {1}) is not of the form w*rho")]
    NotExponential(usize, usize),
    #[error("could not sample an assignment: {0}")]
    Sampling(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct C(Complex64);

impl EvalRing for C {
    fn from_rational(r: &Rational) -> Self {
        C(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
    }
    fn add(&self, other: &Self) -> Self {
        C(self.0 + other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        C(self.0 * other.0)
    }
    fn one() -> Self {
        C(Complex64::new(1.0, 0.0))
    }
}

/// Values for every symbol other than the ρ variables, and spacetime
/// points at which to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericAssignment {
    pub values: BTreeMap<Symbol, Complex64>,
    pub points: Vec<Vec<f64>>,
}

impl NumericAssignment {
    fn get(&self, pf: &ProblemFile, s: Symbol) -> Result<Complex64, NumericError> {
        self.values.get(&s).copied().ok_or_else(|| NumericError::Unbound(pf.table.name(s).to_string()))
    }

    pub fn eval(&self, pf: &ProblemFile, p: &Polynomial) -> Result<Complex64, NumericError> {
        for s in p.symbols() {
            self.get(pf, s)?;
        }
        Ok(p.eval(&|s| C(self.values[&s])).0)
    }

    pub fn eval_rational(&self, pf: &ProblemFile, f: &RationalFunction) -> Result<Complex64, NumericError> {
        Ok(self.eval(pf, f.num())? / self.eval(pf, f.den())?)
    }

    /// Largest `|pattern - replacement|` over the named constraints and
    /// the extension rules.
    pub fn constraint_defect(&self, pf: &ProblemFile, rules: &[String]) -> Result<f64, NumericError> {
        let mut worst = 0.0f64;
        let rs = pf.base_rules().union(&pf.rules_named(rules).map_err(|e| NumericError::Sampling(e.to_string()))?);
        for r in rs.rules() {
            let lhs = self.eval(pf, &Polynomial::from(r.pattern().clone()))?;
            let rhs = self.eval(pf, r.replacement())?;
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }
}

/// `∂_mu ρ_k = w[k][mu] ρ_k`, evaluated.
fn wave_vectors(pf: &ProblemFile, assign: &NumericAssignment) -> Result<Vec<Vec<Complex64>>, NumericError> {
    let Some(def) = &pf.ansatz else {
        return Err(NumericError::NoSpacetimeEquation);
    };
    let mut out = vec![Vec::new(); pf.rho.len()];
    for (k, &r) in pf.rho.iter().enumerate() {
        for mu in 0..def.dimension() {
            let w = def.entry(mu, k).div_exact(&Polynomial::var(r)).map_err(|_| NumericError::NotExponential(mu, k))?;
            if w.mentions_any(&pf.rho) {
                return Err(NumericError::NotExponential(mu, k));
            }
            out[k].push(assign.eval(pf, &w)?);
        }
    }
    Ok(out)
}

/// Jet of a polynomial in ρ at `x`, using `ρ^J = exp((J·w)·(x+h))`.
fn poly_jet(
    pf: &ProblemFile,
    space: &Arc<JetSpace>,
    p: &Polynomial,
    w: &[Vec<Complex64>],
    x: &[f64],
    assign: &NumericAssignment,
) -> Result<Jet, NumericError> {
    let mut acc = Jet::constant(space, Complex64::zero());
    for (mono, coef) in p.collect(&pf.rho) {
        let c = assign.eval(pf, &coef)?;
        let exps = mono.exponents_over(&pf.rho);
        let mut rate = vec![Complex64::zero(); space.dims()];
        for (k, &e) in exps.iter().enumerate() {
            for (mu, r) in rate.iter_mut().enumerate() {
                *r += w[k][mu] * e as f64;
            }
        }
        let phase: Complex64 = rate.iter().zip(x).map(|(r, &xi)| r * xi).sum();
        acc = acc.add(&Jet::exp_linear(space, c * phase.exp(), &rate));
    }
    Ok(acc)
}

struct Evaluated {
    residual: Complex64,
    rho: Vec<Complex64>,
}

fn evaluate_at(
    pf: &ProblemFile,
    ansatz: &RationalAnsatz,
    assign: &NumericAssignment,
    w: &[Vec<Complex64>],
    space: &Arc<JetSpace>,
    x: &[f64],
) -> Result<Evaluated, NumericError> {
    let eq = pf.spacetime.as_ref().ok_or(NumericError::NoSpacetimeEquation)?;
    let num = poly_jet(pf, space, ansatz.num(), w, x, assign)?;
    let den = poly_jet(pf, space, ansatz.den(), w, x, assign)?;
    if den.value().norm() <= POLE_GUARD {
        return Err(NumericError::NearPole { magnitude: den.value().norm() });
    }
    let phi = num.mul(&den.recip());
    let mut residual = Complex64::zero();
    for t in eq.terms() {
        let mut v = assign.eval_rational(pf, &t.coef)?;
        for alpha in &t.factors {
            v *= phi.derivative(alpha);
        }
        residual += v;
    }
    let rho = w
        .iter()
        .map(|wk| wk.iter().zip(x).map(|(r, &xi)| r * xi).sum::<Complex64>().exp())
        .collect();
    Ok(Evaluated { residual, rho })
}

fn jet_order(pf: &ProblemFile) -> Result<u32, NumericError> {
    let eq = pf.spacetime.as_ref().ok_or(NumericError::NoSpacetimeEquation)?;
    Ok(eq.terms().iter().flat_map(|t| t.factors.iter()).map(|a| a.iter().sum::<u32>()).max().unwrap_or(0))
}

/// Largest `|E(φ)|` of the spacetime equation over the sample points.
pub fn numeric_residual(
    ansatz: &RationalAnsatz,
    pf: &ProblemFile,
    assign: &NumericAssignment,
) -> Result<f64, NumericError> {
    let w = wave_vectors(pf, assign)?;
    let space = JetSpace::new(pf.coordinates.len(), jet_order(pf)?);
    let mut worst = 0.0f64;
    for x in &assign.points {
        worst = worst.max(evaluate_at(pf, ansatz, assign, &w, &space, x)?.residual.norm());
    }
    Ok(worst)
}

/// Compares `D(ρ(x)) * E(φ)(x)` with `Σ_J E_J ρ(x)^J` over the sample
/// points. The two sides agree up to one constant factor (coefficient
/// denominators cleared along the way), so the first point fixes the ratio
/// and the result is the largest relative defect at the others.
pub fn conditions_defect(
    ansatz: &RationalAnsatz,
    cs: &ConditionSet,
    pf: &ProblemFile,
    assign: &NumericAssignment,
) -> Result<f64, NumericError> {
    let w = wave_vectors(pf, assign)?;
    let space = JetSpace::new(pf.coordinates.len(), jet_order(pf)?);
    let mut pairs = Vec::new();
    for x in &assign.points {
        let ev = evaluate_at(pf, ansatz, assign, &w, &space, x)?;
        let lhs = eval_with_rho(pf, &cs.denominator, assign, &ev.rho)? * ev.residual;
        let mut rhs = Complex64::zero();
        for (j, e) in cs.iter() {
            let mut v = assign.eval(pf, e)?;
            for (k, &p) in j.iter().enumerate() {
                v *= ev.rho[k].powu(p);
            }
            rhs += v;
        }
        pairs.push((lhs, rhs));
    }
    let Some(&(l0, r0)) = pairs.iter().max_by(|a, b| a.0.norm().total_cmp(&b.0.norm())) else {
        return Ok(0.0);
    };
    if l0.norm() < 1e-12 {
        // residual vanishes everywhere; so must the conditions
        return Ok(pairs.iter().map(|p| p.1.norm()).fold(0.0, f64::max));
    }
    let ratio = r0 / l0;
    let mut worst = 0.0f64;
    for (l, r) in pairs {
        let scale = r.norm().max((ratio * l).norm()).max(1e-300);
        worst = worst.max((r - ratio * l).norm() / scale);
    }
    Ok(worst)
}

fn eval_with_rho(
    pf: &ProblemFile,
    p: &Polynomial,
    assign: &NumericAssignment,
    rho: &[Complex64],
) -> Result<Complex64, NumericError> {
    let mut a = assign.clone();
    for (&r, &v) in pf.rho.iter().zip(rho) {
        a.values.insert(r, v);
    }
    a.eval(pf, p)
}

/// Draws parameters, solves the active constraints for their pattern
/// symbols and fixes the extensions. Squares are only taken of positive
/// reals; a product rule `a*b -> R` paired with square rules for `a` and
/// `b` is solved for one more parameter, possibly complex.
pub fn sample_assignment<R: Rng>(
    pf: &ProblemFile,
    rules: &[String],
    points: usize,
    rng: &mut R,
) -> Result<NumericAssignment, NumericError> {
    let rs = pf.rules_named(rules).map_err(|e| NumericError::Sampling(e.to_string()))?;
    let table = &pf.table;
    'attempt: for _ in 0..1000 {
        let mut values = BTreeMap::new();
        for s in table.symbols_of_kind(SymbolKind::Parameter) {
            values.insert(s, Complex64::new(rng.gen_range(0.3..1.3), 0.0));
        }
        let mut a = NumericAssignment { values, points: Vec::new() };
        let mut squares: BTreeMap<Symbol, Polynomial> = BTreeMap::new();
        let mut products = Vec::new();
        for r in rs.rules() {
            let pairs = r.pattern().pairs();
            match pairs {
                [(s, 1)] => {
                    let v = a.eval(pf, r.replacement())?;
                    a.values.insert(*s, v);
                }
                [(s, 2)] => {
                    squares.insert(*s, r.replacement().clone());
                }
                [(x, 1), (y, 1)] => products.push((*x, *y, r.replacement().clone())),
                _ => return Err(NumericError::Sampling(format!("unsupported rule pattern {}", r.pattern().to_text(table)))),
            }
        }
        let mut solved: Vec<Symbol> = Vec::new();
        for (x, y, rep) in &products {
            let (Some(sx), Some(sy)) = (squares.get(x), squares.get(y)) else {
                return Err(NumericError::Sampling("product rule without matching square rules".into()));
            };
            // eliminate a parameter t of the replacement: Sx*Sy - R^2 = 0 in t
            let busy: Vec<Symbol> = squares.keys().copied().collect();
            let Some(t) = rep.symbols().into_iter().find(|s| !busy.contains(s) && sx.mentions(*s)) else {
                return Err(NumericError::Sampling("no parameter left to solve a product rule".into()));
            };
            let g = sx.mul(sy).sub(&rep.mul(rep));
            let mut coef = [Complex64::zero(); 3];
            for (m, c) in g.collect(&[t]) {
                let e = m.exponent(t) as usize;
                if e > 2 {
                    return Err(NumericError::Sampling("product rule is not quadratic".into()));
                }
                coef[e] = a.eval(pf, &c)?;
            }
            let roots = if coef[2].norm() > 1e-12 {
                let disc = (coef[1] * coef[1] - coef[0] * coef[2] * 4.0).sqrt();
                vec![(-coef[1] + disc) / (coef[2] * 2.0), (-coef[1] - disc) / (coef[2] * 2.0)]
            } else if coef[1].norm() > 1e-12 {
                vec![-coef[0] / coef[1]]
            } else {
                continue 'attempt;
            };
            let root = roots[rng.gen_range(0..roots.len())];
            a.values.insert(t, root);
            let vy = a.eval(pf, sy)?;
            if vy.re < 0.05 || vy.im.abs() > 1e-12 {
                continue 'attempt;
            }
            let ny = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let by = vy.sqrt() * ny;
            a.values.insert(*y, by);
            let vr = a.eval(pf, rep)?;
            a.values.insert(*x, vr / by);
            solved.push(*x);
            solved.push(*y);
        }
        for (s, rep) in &squares {
            if solved.contains(s) {
                continue;
            }
            let v = a.eval(pf, rep)?;
            if v.re < 0.05 || v.im.abs() > 1e-12 {
                continue 'attempt;
            }
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            a.values.insert(*s, v.sqrt() * sign);
        }
        for s in table.symbols_of_kind(SymbolKind::Extension) {
            let Some((k, value)) = table.extension_rule(s) else { continue };
            let v = a.eval(pf, &value)?;
            let root = if value.is_one() {
                let j = rng.gen_range(0..k) as f64;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j / k as f64)
            } else {
                v.powf(1.0 / k as f64)
            };
            a.values.insert(s, root);
        }
        let dims = pf.coordinates.len();
        a.points = (0..points).map(|_| (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let defect = a.constraint_defect(pf, rules)?;
        if defect > 1e-12 * (1.0 + max_magnitude(&a)) {
            continue;
        }
        return Ok(a);
    }
    Err(NumericError::Sampling("no admissible parameters after 1000 attempts".into()))
}

fn max_magnitude(a: &NumericAssignment) -> f64 {
    a.values.values().map(|v| v.norm()).fold(0.0, f64::max).powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi4corpus::scenario;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn phi_at(pf: &ProblemFile, ans: &RationalAnsatz, a: &NumericAssignment, w: &[Vec<Complex64>], x: &[f64]) -> Complex64 {
        let rho: Vec<Complex64> =
            w.iter().map(|wk| wk.iter().zip(x).map(|(r, &xi)| r * xi).sum::<Complex64>().exp()).collect();
        eval_with_rho(pf, ans.num(), a, &rho).unwrap() / eval_with_rho(pf, ans.den(), a, &rho).unwrap()
    }

    /// Fourth order central differences of `φ(x)`, pure second derivatives only.
    fn finite_difference_residual(pf: &ProblemFile, ans: &RationalAnsatz, a: &NumericAssignment, x: &[f64]) -> Complex64 {
        let w = wave_vectors(pf, a).unwrap();
        let h = 1e-3;
        let f = |mu: usize, k: f64| {
            let mut y = x.to_vec();
            y[mu] += k * h;
            phi_at(pf, ans, a, &w, &y)
        };
        let mut total = Complex64::zero();
        for t in pf.spacetime.as_ref().unwrap().terms() {
            let mut v = a.eval_rational(pf, &t.coef).unwrap();
            for alpha in &t.factors {
                v *= match alpha.iter().position(|&e| e > 0) {
                    None => f(0, 0.0),
                    Some(mu) => {
                        assert_eq!(alpha.iter().sum::<u32>(), 2);
                        assert_eq!(alpha[mu], 2);
                        (-f(mu, 2.0) + f(mu, 1.0) * 16.0 - f(mu, 0.0) * 30.0 + f(mu, -1.0) * 16.0 - f(mu, -2.0))
                            / (12.0 * h * h)
                    }
                };
            }
            total += v;
        }
        total
    }

    #[test]
    fn jets_agree_with_finite_differences() {
        // an inexact ansatz, so the residual is not trivially zero
        for slug in ["one-wave-massshell-1-1", "two-wave-massshell-2-2", "two-wave-secondbranch-1-1"] {
            let sc = scenario(slug).unwrap();
            let pf = &sc.problem;
            let ans = sc.ansatz().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let a = sample_assignment(pf, &sc.assignment_rules(), 5, &mut rng).unwrap();
            let w = wave_vectors(pf, &a).unwrap();
            let space = JetSpace::new(4, jet_order(pf).unwrap());
            for x in &a.points {
                let jet = evaluate_at(pf, &ans, &a, &w, &space, x).unwrap().residual;
                let fd = finite_difference_residual(pf, &ans, &a, x);
                assert!((jet - fd).norm() <= 1e-6 * fd.norm().max(1.0), "{slug}: {jet} vs {fd}");
            }
        }
    }

    #[test]
    fn vacuum_has_zero_residual() {
        let sc = scenario("one-wave-massshell-2-2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = sample_assignment(&sc.problem, &sc.assignment_rules(), 20, &mut rng).unwrap();
        let zero = RationalAnsatz::new(sc.problem.rho.clone(), RationalFunction::zero());
        assert_eq!(numeric_residual(&zero, &sc.problem, &a).unwrap(), 0.0);
    }

    #[test]
    fn plane_wave_alone_is_not_a_solution() {
        let sc = scenario("one-wave-massshell-1-1").unwrap();
        for seed in 0..3 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sample_assignment(&sc.problem, &sc.assignment_rules(), 20, &mut rng).unwrap();
            assert!(numeric_residual(&sc.ansatz().unwrap(), &sc.problem, &a).unwrap() >= 1e-3);
        }
    }

    #[test]
    fn assignments_satisfy_constraints() {
        let sc = scenario("two-wave-massshell-2-2-condN2").unwrap();
        let rules = sc.assignment_rules();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = sample_assignment(&sc.problem, &rules, 1, &mut rng).unwrap();
            assert!(a.constraint_defect(&sc.problem, &rules).unwrap() <= 1e-12);
            let mu = a.values[&sc.problem.symbol("mu").unwrap()];
            assert!((mu.norm() - 1.0).abs() < 1e-15 && mu.im.abs() < 1e-12);
        }
    }

    #[test]
    fn pole_is_reported() {
        let sc = scenario("one-wave-massshell-2-2").unwrap();
        let pf = &sc.problem;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut a = sample_assignment(pf, &sc.assignment_rules(), 1, &mut rng).unwrap();
        a.points = vec![vec![0.0; 4]];
        // φ = 1/(1 - rho1) has its pole at x = 0
        let r = pf.rho[0];
        let ans = RationalAnsatz::new(
            pf.rho.clone(),
            RationalFunction::new(Polynomial::one(), Polynomial::one().sub(&Polynomial::var(r))).unwrap(),
        );
        assert!(matches!(numeric_residual(&ans, pf, &a), Err(NumericError::NearPole { .. })));
    }

    #[test]
    fn conditions_match_pointwise_residual_and_catch_a_sign_flip() {
        let sc = scenario("two-wave-secondbranch-1-1").unwrap();
        let pf = &sc.problem;
        let ans = sc.ansatz().unwrap();
        let cs = pf.conditions_for(&ans, &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = sample_assignment(pf, &sc.assignment_rules(), 20, &mut rng).unwrap();
        assert!(conditions_defect(&ans, &cs, pf, &a).unwrap() < 1e-9);
        let flipped = cs.map(|j, p| if j[0] == 4 || j[1] == 4 { p.neg() } else { p.clone() });
        assert!(conditions_defect(&ans, &flipped, pf, &a).unwrap() > 1e-2);
    }
}
