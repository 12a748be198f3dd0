use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Monomial, Rational, Symbol};

/// Sparse multivariate polynomial over the rationals in canonical form:
/// a map from monomial to nonzero coefficient, keyed by the global term
/// order. Structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

/// Values a polynomial can be evaluated into.
pub trait EvalRing: Clone {
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn one() -> Self;
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn constant_i64(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(sym: Symbol) -> Self {
        Polynomial::term(Monomial::var(sym), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let (mut big, small) =
            if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(tm, k)| (tm.mul(m), k * c)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if other.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.len() * other.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    /// Total degree counting only `syms`.
    pub fn degree_over(&self, syms: &[Symbol]) -> u32 {
        self.terms
            .keys()
            .map(|m| syms.iter().map(|&s| m.exponent(s)).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.symbols()).collect()
    }

    pub fn mentions(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(sym) > 0)
    }

    pub fn mentions_any(&self, syms: &[Symbol]) -> bool {
        syms.iter().any(|&s| self.mentions(s))
    }

    pub fn derivative(&self, sym: Symbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym);
            if e == 0 {
                continue;
            }
            let rest = m.div(&Monomial::var(sym)).expect("exponent is positive");
            out.add_term(rest, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Replaces every occurrence of `sym` by `value`.
    pub fn substitute(&self, sym: Symbol, value: &Polynomial) -> Polynomial {
        let mut powers: Vec<Polynomial> = vec![Polynomial::one()];
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(sym) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let rest = m.without(sym);
            out = out.add(&powers[e].mul_monomial(&rest, c));
        }
        out
    }

    /// Exact division. Fails with `NotDivisible` when a nonzero remainder
    /// would be left.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let (lm_d, lc_d) = divisor.leading_term().ok_or(AlgebraError::ZeroDivisor)?;
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            let Some(m) = lm_r.div(&lm_d) else {
                return Err(AlgebraError::NotDivisible);
            };
            let c = lc_r / &lc_d;
            rem = rem.sub(&divisor.mul_monomial(&m, &c));
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        !self.is_zero() && other.div_exact(self).is_ok()
    }

    /// Greatest common monomial dividing every term (one for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (tm, c) in &self.terms {
            terms.insert(tm.div(m)?, c.clone());
        }
        Some(Polynomial { terms })
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// `(c, p)` with `self = c * p`, `p` having coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn primitive(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::one(), Polynomial::zero());
        }
        let mut c = self.rational_content();
        if self.leading_term().unwrap().1.is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    /// Groups terms by their part over `syms`: the result maps each
    /// monomial in `syms` to its coefficient polynomial in the remaining
    /// symbols.
    pub fn collect(&self, syms: &[Symbol]) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(syms);
            out.entry(inside).or_default().add_term(outside, c.clone());
        }
        out
    }

    pub fn eval<T: EvalRing>(&self, value: &dyn Fn(Symbol) -> T) -> T {
        let mut cache: HashMap<Symbol, Vec<T>> = HashMap::new();
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t = T::from_rational(c);
            for &(s, e) in m.pairs() {
                let powers = cache.entry(s).or_insert_with(|| vec![T::one(), value(s)]);
                while powers.len() <= e as usize {
                    let next = powers.last().unwrap().mul(&powers[1]);
                    powers.push(next);
                }
                t = t.mul(&powers[e as usize]);
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        acc.unwrap_or_else(|| T::from_rational(&Rational::zero()))
    }
}

impl From<Monomial> for Polynomial {
    fn from(m: Monomial) -> Self {
        Polynomial::term(m, Rational::one())
    }
}

impl From<Symbol> for Polynomial {
    fn from(s: Symbol) -> Self {
        Polynomial::var(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;

    #[test]
    fn difference_of_squares() {
        let t = SymbolTable::new();
        let x = Polynomial::var(t.parameter("x").unwrap());
        let one = Polynomial::one();
        let p = x.add(&one).mul(&x.sub(&one));
        assert_eq!(p, x.pow(2).sub(&one));
    }

    #[test]
    fn exact_division() {
        let t = SymbolTable::new();
        let x = Polynomial::var(t.parameter("x").unwrap());
        let one = Polynomial::one();
        let q = x.pow(2).sub(&one).div_exact(&x.sub(&one)).unwrap();
        assert_eq!(q, x.add(&one));
        assert!(matches!(
            x.pow(2).add(&one).div_exact(&x.add(&one)),
            Err(AlgebraError::NotDivisible)
        ));
        assert!(matches!(x.div_exact(&Polynomial::zero()), Err(AlgebraError::ZeroDivisor)));
    }

    #[test]
    fn content_and_collect() {
        let t = SymbolTable::new();
        let a = t.parameter("a").unwrap();
        let r = t.rho("r").unwrap();
        let p = Polynomial::var(a)
            .mul(&Polynomial::var(r))
            .scale(&Rational::new(BigInt::from(-4), BigInt::from(3)))
            .add(&Polynomial::var(r).pow(2).scale(&Rational::from_integer(BigInt::from(2))));
        let (c, prim) = p.primitive();
        assert_eq!(c, Rational::new(BigInt::from(-2), BigInt::from(3)));
        assert_eq!(prim.scale(&c), p);
        let groups = p.collect(&[r]);
        assert_eq!(groups.len(), 2);
        assert_eq!(p.monomial_content(), Monomial::var(r));
    }
}
