use num_traits::{One, Signed};

use super::{AlgebraError, Monomial, Polynomial, Rational, RewriteSystem, SymbolKind, SymbolTable};

/// Quotient of two polynomials.
///
/// Not kept in lowest terms. Construction removes common monomial factors,
/// scales to coprime integer coefficients, makes the leading coefficient of
/// the denominator positive and cancels the denominator when it divides the
/// numerator exactly. Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// Builds without any normalization. Used where a caller relies on a
    /// particular representative, e.g. a hand-written closed form.
    pub fn raw(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The numerator divided by a constant denominator.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let c = self.den.constant_value()?;
        Some(self.num.scale(&c.recip()))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g).unwrap(), den.div_monomial(&g).unwrap())
        };
        if !den.is_constant() && den.len() <= num.len() {
            if let Ok(q) = num.div_exact(&den) {
                num = q;
                den = Polynomial::one();
            }
        }
        // integer content of the pair is one, denominator leading coefficient positive
        let cn = num.rational_content();
        let cd = den.rational_content();
        let mut scale = num_integer_gcd(&cn, &cd);
        if den.leading_term().unwrap().1.is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        let l = lcm_heuristic(&self.den, &other.den);
        let fa = l.div_exact(&self.den).expect("lcm is a multiple");
        let fb = l.div_exact(&other.den).expect("lcm is a multiple");
        Self::normalized(self.num.mul(&fa).add(&other.num.mul(&fb)), l)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::normalized(self.num.mul(p), self.den.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Cross-multiplication equality in the free polynomial ring.
    pub fn equals(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Cross-multiplication equality modulo a rewrite system.
    pub fn equals_mod(&self, other: &Self, rs: &RewriteSystem) -> Result<bool, AlgebraError> {
        let diff = self.num.mul(&other.den).sub(&other.num.mul(&self.den));
        rs.vanishes(&diff)
    }

    pub fn vanishes(&self, rs: &RewriteSystem) -> Result<bool, AlgebraError> {
        rs.vanishes(&self.num)
    }

    /// Reduces numerator and denominator separately.
    pub fn reduce(&self, rs: &RewriteSystem) -> Result<Self, AlgebraError> {
        let den = rs.reduce(&self.den)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(rs.reduce(&self.num)?, den))
    }

    /// Removes square-root style extension symbols from the denominator by
    /// multiplying with the conjugate `a - b*x` for every extension `x` with
    /// a rule `x^2 -> r`. Skipped when the conjugate product would vanish.
    pub fn rationalize(&self, table: &SymbolTable, rs: &RewriteSystem) -> Result<Self, AlgebraError> {
        let mut cur = self.reduce(rs)?;
        for sym in table.symbols_of_kind(SymbolKind::Extension) {
            let Some((2, _)) = table.extension_rule(sym) else { continue };
            if cur.den.degree_in(sym) != 1 {
                continue;
            }
            let x = Polynomial::var(sym);
            let parts = cur.den.collect(&[sym]);
            let a = parts.get(&Monomial::one()).cloned().unwrap_or_default();
            let b = parts.get(&Monomial::var(sym)).cloned().unwrap_or_default();
            let conj = a.sub(&b.mul(&x));
            let den = rs.reduce(&cur.den.mul(&conj))?;
            if den.is_zero() || den.degree_in(sym) > 0 {
                continue;
            }
            let num = rs.reduce(&cur.num.mul(&conj))?;
            cur = Self::normalized(num, den);
        }
        Ok(cur)
    }

    /// Cancels any of `factors` that divide both numerator and denominator.
    pub fn cancel_factors(&self, factors: &[Polynomial]) -> Self {
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        for f in factors {
            if f.is_constant() || f.is_monomial() {
                continue;
            }
            while let (Ok(n), Ok(d)) = (num.div_exact(f), den.div_exact(f)) {
                num = n;
                den = d;
            }
        }
        Self::normalized(num, den)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

fn num_integer_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Splits `p` as `c * mono * rest` with `rest` primitive and free of a
/// monomial factor.
fn split_factors(p: &Polynomial) -> (Rational, Monomial, Polynomial) {
    let mono = p.monomial_content();
    let rest = p.div_monomial(&mono).expect("content divides");
    let (c, prim) = rest.primitive();
    (c, mono, prim)
}

/// A common multiple of `a` and `b`: exact for monomial and content parts,
/// and for the remaining parts whenever one divides the other.
pub fn lcm_heuristic(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (ca, ma, ra) = split_factors(a);
    let (cb, mb, rb) = split_factors(b);
    let rest = if ra == rb || rb.is_one() {
        ra
    } else if ra.is_one() || ra.divides(&rb) {
        rb
    } else if rb.divides(&ra) {
        ra
    } else {
        ra.mul(&rb)
    };
    let c = num_integer_lcm(&ca.abs(), &cb.abs());
    Polynomial::from(ma.lcm(&mb)).mul(&rest).scale(&c)
}

fn num_integer_lcm(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    let n = a.numer().abs().lcm(&b.numer().abs());
    let d = a.denom().gcd(b.denom());
    if n.is_one() && d.is_one() {
        return Rational::one();
    }
    Rational::new(n, d)
}
