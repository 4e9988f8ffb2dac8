//! Laurent polynomials in `ε` with rational coefficients, and quotients of
//! them with exact valuations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// `Σ c_k ε^k` with finitely many nonzero `c_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    /// `c ε^k`.
    pub fn monomial(c: Q, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Q)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    fn add_term(&mut self, k: i32, c: &Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i32) -> Q {
        self.terms.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    fn lowest(&self) -> Option<(i32, &Q)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    fn highest(&self) -> Option<(i32, &Q)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// Exact quotient `self / d`, if `d` divides `self` in `Q[ε, ε⁻¹]`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlow, _) = d.lowest()?;
        let (dhigh, dlead) = d.highest()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        // divisor units ε^k are absorbed by shifting; long division on the
        // highest terms until the remainder drops below the divisor's span
        while let Some((rh, rc)) = rem.highest() {
            let (rl, _) = rem.lowest().expect("non-empty");
            if rh - rl < dhigh - dlow {
                return None;
            }
            let k = rh - dhigh;
            let c = rc / dlead;
            quot.add_term(k, &c);
            rem = &rem - &(d * &LaurentPoly::monomial(c, k));
        }
        Some(quot)
    }

    /// Value at `ε = 0` for polynomials without negative powers.
    pub fn constant_term(&self) -> Q {
        self.coeff(0)
    }

    pub fn from_json(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut p = Self::zero();
        for (k, v) in map {
            let exp: i32 = k
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad exponent {k:?}")))?;
            p.add_term(exp, &parse_q(v)?);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(k, c)| (k.to_string(), fmt_q(c)))
            .collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (*k, a.is_one()) {
                (0, _) => write!(f, "{}", fmt_q(&a))?,
                (_, true) => {}
                _ => write!(f, "{}", fmt_q(&a))?,
            }
            match *k {
                0 => {}
                1 => write!(f, "ε")?,
                _ => write!(f, "ε^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

/// `num / den`, stored with `den = 1` whenever the division is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Singular);
        }
        Ok(match num.div_exact(&den) {
            Some(q) => Self::poly(q),
            None => Self { num, den },
        })
    }

    pub fn poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    /// The quotient as a Laurent polynomial when the division was exact.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        (self.den == LaurentPoly::one()).then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `val(num) − val(den)`; `None` for the zero function.
    pub fn valuation(&self) -> Option<i32> {
        Some(self.num.valuation()? - self.den.valuation().expect("nonzero denominator"))
    }

    /// Limit at `ε → 0`, or `None` when the valuation is negative.
    pub fn limit(&self) -> Option<Q> {
        match self.valuation() {
            None => Some(Q::zero()),
            Some(v) if v > 0 => Some(Q::zero()),
            Some(0) => {
                let (_, a) = self.num.lowest().expect("nonzero");
                let (_, b) = self.den.lowest().expect("nonzero");
                Some(a / b)
            }
            Some(_) => None,
        }
    }
}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

/// Square matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    n: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![LaurentPoly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.data[r * self.n + c] = p;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Determinant of the submatrix on `rows` × `cols`, by dynamic
    /// programming over used-column subsets.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        let m = rows.len();
        if m == 0 {
            return LaurentPoly::one();
        }
        let mut dp: Vec<LaurentPoly> = vec![LaurentPoly::zero(); 1 << m];
        dp[0] = LaurentPoly::one();
        for mask in 0usize..(1 << m) {
            if dp[mask].is_zero() {
                continue;
            }
            if mask.count_ones() as usize == m {
                continue;
            }
            let r = rows[mask.count_ones() as usize];
            for (ci, &c) in cols.iter().enumerate() {
                if mask & (1 << ci) != 0 {
                    continue;
                }
                let entry = self.get(r, c);
                if entry.is_zero() {
                    continue;
                }
                // inversions added: chosen columns to the right of ci
                let above = (mask >> (ci + 1)).count_ones();
                let term = &dp[mask] * entry;
                let next = mask | (1 << ci);
                dp[next] = if above % 2 == 0 {
                    &dp[next] + &term
                } else {
                    &dp[next] - &term
                };
            }
        }
        dp[(1 << m) - 1].clone()
    }

    pub fn determinant(&self) -> LaurentPoly {
        let all: Vec<usize> = (0..self.n).collect();
        self.minor(&all, &all)
    }

    /// `adj(self)` with `self · adj = det · I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        let mut adj = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&x| x != r).collect();
                let cols: Vec<usize> = (0..n).filter(|&x| x != c).collect();
                let m = self.minor(&rows, &cols);
                adj.set(c, r, if (r + c) % 2 == 0 { m } else { -&m });
            }
        }
        adj
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (k, q(c))))
    }

    #[test]
    fn arithmetic_and_valuation() {
        let a = p(&[(-1, 1), (2, 3)]);
        let b = p(&[(1, 1)]);
        assert_eq!(&a * &b, p(&[(0, 1), (3, 3)]));
        assert_eq!((&a - &a).valuation(), None);
        assert_eq!(a.valuation(), Some(-1));
        assert_eq!(a.to_string(), "ε^-1 + 3ε^2");
        assert_eq!(LaurentPoly::monomial(qf(1, 2), 4).to_string(), "1/2ε^4");
    }

    #[test]
    fn exact_division() {
        // (ε + ε²)(1 − ε) = ε − ε³
        let f = p(&[(1, 1), (2, 1)]);
        let g = p(&[(0, 1), (1, -1)]);
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(prod.div_exact(&LaurentPoly::monomial(q(2), 5)), Some(&prod * &LaurentPoly::monomial(qf(1, 2), -5)));
        assert_eq!(p(&[(0, 1)]).div_exact(&g), None);
    }

    #[test]
    fn fractions_keep_exact_valuations() {
        let fr = LaurentFraction::new(p(&[(2, 3)]), p(&[(0, 1), (1, 1)])).unwrap();
        assert!(fr.as_poly().is_none());
        assert_eq!(fr.valuation(), Some(2));
        assert_eq!(fr.limit(), Some(q(0)));
        let fr = LaurentFraction::new(p(&[(0, 3), (5, 1)]), p(&[(0, 2), (1, 1)])).unwrap();
        assert_eq!(fr.limit(), Some(qf(3, 2)));
        let fr = LaurentFraction::new(p(&[(-1, 1)]), p(&[(0, 2), (1, 1)])).unwrap();
        assert_eq!(fr.limit(), None);
        assert!(LaurentFraction::new(p(&[(0, 1)]), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn determinant_and_adjugate() {
        let mut m = LaurentMatrix::zeros(3);
        m.set(0, 0, p(&[(1, 1)]));
        m.set(0, 1, p(&[(0, 2)]));
        m.set(1, 1, p(&[(3, 1)]));
        m.set(2, 0, p(&[(0, 1)]));
        m.set(2, 2, p(&[(-1, 1)]));
        // first-row expansion: ε·(ε³·ε⁻¹) − 2·(0·ε⁻¹ − 0·1) = ε³
        assert_eq!(m.determinant(), p(&[(3, 1)]));
        let adj = m.adjugate();
        let prod = m.mul(&adj);
        let det = m.determinant();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { det.clone() } else { LaurentPoly::zero() };
                assert_eq!(prod.get(r, c), &expect);
            }
        }
    }
}
