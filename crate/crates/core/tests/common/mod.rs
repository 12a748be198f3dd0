//! Strategies and property bodies shared by the property suite and the
//! acceptance gate.
#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use padepde::algebra::{frac, EvalRing, Monomial, Polynomial, Rational, RationalFunction, RewriteSystem, Rule, Symbol, SymbolTable};
use padepde::pade::{grade, pade_solve, GradedSeries};
use padepde::series::{solve_series, EulerEquation, SeedRoot};

/// Exact evaluation target, independent of the polynomial arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct Q(pub Rational);

impl EvalRing for Q {
    fn from_rational(r: &Rational) -> Self {
        Q(r.clone())
    }
    fn add(&self, other: &Self) -> Self {
        Q(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Q(&self.0 * &other.0)
    }
    fn one() -> Self {
        Q(Rational::from_integer(1.into()))
    }
}

pub struct Fixture {
    pub table: SymbolTable,
    pub x: Symbol,
    pub y: Symbol,
    pub z: Symbol,
    pub lambda: Symbol,
    pub i: Symbol,
    pub s: Symbol,
    /// `i^2 -> -1`, `s^2 -> lambda`, `x^2 -> y^2 + z^2 - 1`.
    pub rules: RewriteSystem,
}

impl Fixture {
    pub fn new() -> Fixture {
        let table = SymbolTable::new();
        let x = table.parameter("x").unwrap();
        let y = table.parameter("y").unwrap();
        let z = table.parameter("z").unwrap();
        let lambda = table.parameter("lambda").unwrap();
        let i = table.extension("i", 2, Polynomial::constant_i64(-1)).unwrap();
        let s = table.extension("s", 2, Polynomial::var(lambda)).unwrap();
        let mut rules = table.extension_rules();
        let shell = Polynomial::var(y).pow(2).add(&Polynomial::var(z).pow(2)).sub(&Polynomial::one());
        rules.push(Rule::new(Monomial::power(x, 2), shell).unwrap());
        Fixture { table, x, y, z, lambda, i, s, rules }
    }

    pub fn symbols(&self) -> [Symbol; 6] {
        [self.x, self.y, self.z, self.lambda, self.i, self.s]
    }

    pub fn poly(&self, raw: &RawPoly) -> Polynomial {
        let syms = self.symbols();
        Polynomial::from_terms(raw.iter().map(|(e, n, d)| (Monomial::from_exponents(&syms, e), frac(*n, *d))))
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, p: &Polynomial, point: &[Rational]) -> Rational {
        let syms = self.symbols();
        p.eval(&|s| Q(point[syms.iter().position(|&t| t == s).unwrap()].clone())).0
    }
}

pub type RawPoly = Vec<(Vec<u32>, i64, i64)>;

pub fn raw_poly() -> impl Strategy<Value = RawPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 6), -6i64..7, 1i64..4), 0..5)
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..10, 1i64..5).prop_map(|(n, d)| frac(n, d))
}

pub fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 6)
}

pub fn ring_axioms(a: &RawPoly, b: &RawPoly, c: &RawPoly, at: &[Rational]) -> Result<(), TestCaseError> {
    let f = Fixture::new();
    let (a, b, c) = (f.poly(a), f.poly(b), f.poly(c));
    prop_assert_eq!(a.add(&b), b.add(&a));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert_eq!(a.add(&Polynomial::zero()), a.clone());
    prop_assert_eq!(a.mul(&Polynomial::one()), a.clone());
    prop_assert!(a.sub(&a).is_zero());
    // evaluation is a ring homomorphism
    prop_assert_eq!(f.eval(&a.mul(&b), at), f.eval(&a, at) * f.eval(&b, at));
    prop_assert_eq!(f.eval(&a.add(&c), at), f.eval(&a, at) + f.eval(&c, at));
    if !b.is_zero() {
        let q = RationalFunction::new(a.clone(), b.clone()).unwrap();
        let back = q.mul(&RationalFunction::from_poly(b.clone()));
        prop_assert!(back.equals(&RationalFunction::from_poly(a.clone())));
        if let Ok(exact) = a.mul(&b).div_exact(&b) {
            prop_assert_eq!(exact, a.clone());
        } else {
            return Err(TestCaseError::fail("exact division of a*b by b failed"));
        }
    }
    Ok(())
}

pub fn rewrite_laws(a: &RawPoly, b: &RawPoly) -> Result<(), TestCaseError> {
    let f = Fixture::new();
    let rs = &f.rules;
    prop_assert!(rs.check_confluence().is_ok());
    let (a, b) = (f.poly(a), f.poly(b));
    let ra = rs.reduce(&a).unwrap();
    let rb = rs.reduce(&b).unwrap();
    prop_assert_eq!(rs.reduce(&ra).unwrap(), ra.clone());
    prop_assert_eq!(rs.reduce(&a.add(&b)).unwrap(), ra.add(&rb));
    prop_assert_eq!(rs.reduce(&a.mul(&b)).unwrap(), rs.reduce(&ra.mul(&rb)).unwrap());
    // normal forms are free of every pattern
    for (m, _) in ra.terms() {
        for r in rs.rules() {
            prop_assert!(!r.pattern().divides(m));
        }
    }
    Ok(())
}

/// Homogeneous coefficients `a_n` in `rho1, rho2`, optionally carrying a
/// parameter and the unit `i`.
pub type RawSeries = Vec<Vec<(i64, i64, i64)>>;

pub fn raw_series(len: usize) -> impl Strategy<Value = RawSeries> {
    prop::collection::vec(prop::collection::vec((-5i64..6, 0i64..3, 0i64..2), 5), len)
}

pub fn pade_order(raw: &RawSeries, l: usize, m: usize) -> Result<(), TestCaseError> {
    let f = Fixture::new();
    let rho1 = f.table.rho("rho1").unwrap();
    let rho2 = f.table.rho("rho2").unwrap();
    let a: Vec<RationalFunction> = raw
        .iter()
        .enumerate()
        .take(l + m + 1)
        .map(|(n, row)| {
            let mut p = Polynomial::zero();
            for (k, &(c, py, pi)) in row.iter().enumerate().take(n + 1) {
                let mono = Monomial::from_exponents(&[rho1, rho2, f.y, f.i], &[k as u32, (n - k) as u32, py as u32, pi as u32]);
                p = p.add(&Polynomial::term(mono, frac(c, 1)));
            }
            RationalFunction::from_poly(p)
        })
        .collect();
    let g = GradedSeries::new(vec![rho1, rho2], a);
    let rs = f.table.extension_rules();
    match pade_solve(&g, l, m, &rs) {
        Ok(pa) => {
            prop_assert!(pa.q.iter().any(|q| !q.is_zero()));
            // Q·A - P through ξ^(L+M), computed here rather than by the library
            let a = g.cleared().1;
            for n in 0..=l + m {
                let mut acc = if n <= l { pa.p[n].neg() } else { Polynomial::zero() };
                for j in 0..=n.min(m) {
                    acc = acc.add(&pa.q[j].mul(&a[n - j]));
                }
                prop_assert!(rs.reduce(&acc).unwrap().is_zero(), "order condition fails at xi^{}", n);
            }
            prop_assert!(pa.order_defects(&g, &rs).unwrap().is_empty());
        }
        // all-zero input has nothing to approximate
        Err(_) => prop_assume!(g.cleared().1.iter().all(|p| p.is_zero())),
    }
    Ok(())
}

/// `a θ²φ + b θφ - (a + b) φ + c φ² + d λ φ³` with the Euler operator
/// `θ = Σ ρ_k ∂_k`, so every degree-one coefficient is free and every
/// higher one is forced.
pub fn series_resubstitution(a: i64, b: i64, c: Rational, d: Rational, two: bool, n: u32) -> Result<(), TestCaseError> {
    let f = Fixture::new();
    let rho: Vec<Symbol> = if two {
        vec![f.table.rho("rho1").unwrap(), f.table.rho("rho2").unwrap()]
    } else {
        vec![f.table.rho("rho1").unwrap()]
    };
    let dim = rho.len();
    let unit = |k: usize| -> Vec<u32> { (0..dim).map(|d| (d == k) as u32).collect() };
    let konst = |r: Rational| RationalFunction::constant(r);
    let mut parts = Vec::new();
    for k in 0..dim {
        for l in 0..dim {
            let mut beta = unit(k);
            beta[l] += 1;
            let coef = Polynomial::var(rho[k]).mul(&Polynomial::var(rho[l])).scale(&frac(a, 1));
            parts.push((RationalFunction::from_poly(coef), vec![beta]));
        }
        // θ² = Σ ρ_k ρ_l ∂_k ∂_l + θ
        let coef = Polynomial::var(rho[k]).scale(&frac(a + b, 1));
        parts.push((RationalFunction::from_poly(coef), vec![unit(k)]));
    }
    let zero: Vec<u32> = vec![0; dim];
    parts.push((konst(frac(-(a + b), 1)), vec![zero.clone()]));
    parts.push((konst(c), vec![zero.clone(), zero.clone()]));
    parts.push((RationalFunction::from_poly(Polynomial::var(f.lambda).scale(&d)), vec![zero.clone(); 3]));
    let eq = EulerEquation::from_parts(rho.clone(), parts).unwrap();
    let frees: Vec<(Vec<u32>, Symbol)> =
        (0..dim).map(|k| (unit(k), f.table.parameter(&format!("c{k}")).unwrap())).collect();
    let seed = SeedRoot { value: RationalFunction::zero() };
    let rs = f.table.extension_rules();
    let series = solve_series(&eq, &seed, &frees, n, &f.table, &rs).unwrap();
    let res = series.residual(&eq, &rs).unwrap();
    prop_assert!(res.is_empty(), "residual at {:?}", res.keys().collect::<Vec<_>>());
    // graded view agrees with the coefficients
    let g = grade(&series, n).unwrap();
    prop_assert!(!g.get(1).is_zero());
    let _ = Rational::zero();
    Ok(())
}
