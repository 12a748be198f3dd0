use std::cmp::Ordering;

use super::Symbol;

/// Power product of symbols, stored sparsely as `(symbol, exponent)` pairs
/// sorted by symbol with no zero exponents.
///
/// `Ord` is the global term order: graded lexicographic, with symbols
/// ordered by creation (an earlier symbol is the larger variable).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(sym: Symbol) -> Self {
        Monomial(vec![(sym, 1)])
    }

    pub fn power(sym: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym, exp)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (Symbol, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Symbol, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(s, _)| s);
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        match self.0.binary_search_by_key(&sym, |&(s, _)| s) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, e)| (s, e * n)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(s, e)| other.exponent(s) >= e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let oe = other.0[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s, e - oe)),
                }
            } else {
                out.push((s, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(s, e)| {
                    let oe = other.exponent(s);
                    (oe > 0).then(|| (s, e.min(oe)))
                })
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let g = self.gcd(other);
        self.mul(other).div(&g).expect("gcd divides the product")
    }

    /// Splits into the part over `syms` and the remainder.
    pub fn split(&self, syms: &[Symbol]) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) =
            self.0.iter().partition(|(s, _)| syms.contains(s));
        (Monomial(inside), Monomial(outside))
    }

    pub fn without(&self, sym: Symbol) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(s, _)| s != sym).collect())
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|&(s, _)| s)
    }

    /// Exponent vector over an ordered list of symbols.
    pub fn exponents_over(&self, syms: &[Symbol]) -> Vec<u32> {
        syms.iter().map(|&s| self.exponent(s)).collect()
    }

    pub fn from_exponents(syms: &[Symbol], exps: &[u32]) -> Monomial {
        Monomial::from_pairs(syms.iter().copied().zip(exps.iter().copied()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| lex_cmp(&self.0, &other.0))
    }
}

fn lex_cmp(a: &[(Symbol, u32)], b: &[(Symbol, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(sa, ea)), Some(&(sb, eb))) => match sa.cmp(&sb) {
                // `a` carries the earlier (larger) variable that `b` lacks
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: u32) -> Symbol {
        Symbol(i)
    }

    #[test]
    fn graded_lex_order() {
        let x = Monomial::var(s(0));
        let y = Monomial::var(s(1));
        let xy = x.mul(&y);
        let y2 = y.pow(2);
        let x2 = x.pow(2);
        assert!(x > y);
        assert!(y2 > x);
        assert!(x2 > xy && xy > y2);
        assert!(Monomial::one() < y);
    }

    #[test]
    fn division_and_gcd() {
        let m = Monomial::from_pairs([(s(0), 3), (s(2), 1)]);
        let d = Monomial::from_pairs([(s(0), 1), (s(2), 1)]);
        assert_eq!(m.div(&d), Some(Monomial::power(s(0), 2)));
        assert_eq!(d.div(&m), None);
        assert_eq!(m.div(&Monomial::var(s(1))), None);
        assert_eq!(m.gcd(&Monomial::var(s(2))), Monomial::var(s(2)));
        assert_eq!(
            Monomial::var(s(0)).lcm(&Monomial::var(s(1))),
            Monomial::from_pairs([(s(0), 1), (s(1), 1)])
        );
    }
}
