use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::{Monomial, Polynomial, Rational, RationalFunction, SymbolTable};

/// Canonical text of a polynomial: terms from the leading term down, `*`
/// between factors, `^` for powers and coefficients written as `p/q`.
pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    table: &'a SymbolTable,
}

/// `num` alone for a unit denominator, otherwise `(num)/(den)`.
pub struct RatDisplay<'a> {
    rf: &'a RationalFunction,
    table: &'a SymbolTable,
}

impl Polynomial {
    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, table }
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }
}

impl RationalFunction {
    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> RatDisplay<'a> {
        RatDisplay { rf: self, table }
    }

    pub fn to_text(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }
}

impl Monomial {
    pub fn to_text(&self, table: &SymbolTable) -> String {
        let mut s = String::new();
        write_monomial(&mut s, self, table).unwrap();
        s
    }
}

fn write_monomial(f: &mut impl Write, m: &Monomial, table: &SymbolTable) -> fmt::Result {
    if m.is_one() {
        return f.write_char('1');
    }
    // larger variables first, matching the term order
    for (k, &(s, e)) in m.pairs().iter().enumerate() {
        if k > 0 {
            f.write_char('*')?;
        }
        f.write_str(&table.name(s))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_rational(f: &mut impl Write, c: &Rational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_char('0');
        }
        for (k, (m, c)) in self.poly.terms().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if m.is_one() {
                write_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    f.write_char('*')?;
                }
                write_monomial(f, m, self.table)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rf.den().constant_value() {
            Some(d) if d.is_one() => write!(f, "{}", self.rf.num().display(self.table)),
            _ => write!(
                f,
                "({})/({})",
                self.rf.num().display(self.table),
                self.rf.den().display(self.table)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn canonical_text() {
        let t = SymbolTable::new();
        let c1 = Polynomial::var(t.parameter("c1").unwrap());
        let m = Polynomial::var(t.parameter("m").unwrap());
        let lambda = Polynomial::var(t.parameter("lambda").unwrap());
        let rho = Polynomial::var(t.rho("rho1").unwrap());
        let den = m.pow(2).scale(&int(8)).sub(&c1.pow(2).mul(&lambda).mul(&rho.pow(2)));
        assert_eq!(den.to_text(&t), "-c1^2*lambda*rho1^2 + 8*m^2");
        let p = c1.pow(3).mul(&lambda).scale(&frac(-1, 8)).add(&Polynomial::constant_i64(2));
        assert_eq!(p.to_text(&t), "-1/8*c1^3*lambda + 2");
        assert_eq!(Polynomial::zero().to_text(&t), "0");
        let rf = RationalFunction::new(c1.mul(&rho), den).unwrap();
        assert_eq!(rf.to_text(&t), "(-c1*rho1)/(c1^2*lambda*rho1^2 - 8*m^2)");
    }
}
