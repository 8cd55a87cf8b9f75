//! Sparse multivariate Laurent polynomials with big-integer coefficients.
//!
//! Variables are lattice points (the vertices of an initial tiling). Terms are
//! kept in graded-lex order, which makes exact division by leading-term
//! reduction possible.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::zonogon::LatticePoint;

pub type VarId = LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division, remainder {remainder}")]
    InexactDivision { remainder: LaurentPoly },
    #[error("no value assigned to variable {0}")]
    MissingAssignment(VarId),
    #[error("variable {0} is zero but appears with a negative exponent")]
    ZeroDenominator(VarId),
    #[error("cannot substitute a non-monomial for a negative power of {0}")]
    NonMonomialInverse(VarId),
}

/// A product of variable powers; zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: i64,
    exps: Vec<(VarId, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId, e: i32) -> Self {
        Monomial::from_pairs([(v, e)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut map: BTreeMap<VarId, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        let exps: Vec<(VarId, i32)> = map.into_iter().filter(|&(_, e)| e != 0).collect();
        let degree = exps.iter().map(|&(_, e)| e as i64).sum();
        Monomial { degree, exps }
    }

    pub fn exps(&self) -> &[(VarId, i32)] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: &VarId) -> i32 {
        self.exps
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    fn merge(&self, other: &Monomial, sign: i32) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let ord = match (self.exps.get(i), other.exps.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    exps.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push((other.exps[j].0, sign * other.exps[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.exps[i].1 + sign * other.exps[j].1;
                    if e != 0 {
                        exps.push((self.exps[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial {
            degree: self.degree + sign as i64 * other.degree,
            exps,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, -1)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::one().div(self)
    }

    /// Whether `self / other` has no negative exponents.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.exps.iter().all(|(v, e)| self.exponent(v) >= *e)
    }

    /// Componentwise minimum of exponents.
    fn gcd_exponents(&self, other: &Monomial) -> Monomial {
        let mut vars: Vec<VarId> = self.exps.iter().chain(&other.exps).map(|(v, _)| *v).collect();
        vars.sort();
        vars.dedup();
        Monomial::from_pairs(vars.into_iter().map(|v| (v, self.exponent(&v).min(other.exponent(&v)))))
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree first, then the exponent of the smallest
    /// variable where the two differ.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.exps.get(i), other.exps.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(a), Some(b)) if a.0 == b.0 => {
                        if a.1 != b.1 {
                            return a.1.cmp(&b.1);
                        }
                        i += 1;
                        j += 1;
                    }
                    (Some(a), Some(b)) if a.0 < b.0 => return a.1.cmp(&0),
                    (Some(_), Some(b)) => return 0.cmp(&b.1),
                    (Some(a), None) => return a.1.cmp(&0),
                    (None, Some(b)) => return 0.cmp(&b.1),
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x[{}]", v.key())?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::term(c, Monomial::one())
    }

    pub fn var(v: VarId) -> Self {
        LaurentPoly::term(1, Monomial::var(v, 1))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        if self.is_monomial() {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Largest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.exps.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Whether every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.exps.iter().all(|&(_, e)| e >= 0))
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale_monomial(&self, c: &BigInt, m: &Monomial) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Componentwise minimum exponent over all terms; `p / m` is then a
    /// polynomial not divisible by any variable.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd_exponents(m))
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / q`.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if q.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some((m, c)) = q.as_monomial() {
            let inv = m.inverse();
            let mut out = LaurentPoly::zero();
            let mut rem = LaurentPoly::zero();
            for (k, v) in &self.terms {
                let (quot, r) = v.div_rem(c);
                if r.is_zero() {
                    out.add_term(k.mul(&inv), quot);
                } else {
                    rem.add_term(k.clone(), v.clone());
                }
            }
            return if rem.is_zero() {
                Ok(out)
            } else {
                Err(LaurentError::InexactDivision { remainder: rem })
            };
        }
        // Reduce both sides to polynomials with no monomial factor; the
        // quotient of two such polynomials, if it exists, is again one.
        let mp = self.min_monomial();
        let mq = q.min_monomial();
        let p0 = self.scale_monomial(&BigInt::one(), &mp.inverse());
        let q0 = q.scale_monomial(&BigInt::one(), &mq.inverse());
        let (lm, lc) = q0.leading().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");

        let mut r = p0;
        let mut quot = LaurentPoly::zero();
        let mut rem = LaurentPoly::zero();
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let (qc, rc) = c.div_rem(&lc);
            if m.divisible_by(&lm) && rc.is_zero() {
                let qm = m.div(&lm);
                r = &r - &q0.scale_monomial(&qc, &qm);
                quot.add_term(qm, qc);
            } else {
                r.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        if !rem.is_zero() {
            return Err(LaurentError::InexactDivision {
                remainder: rem.scale_monomial(&BigInt::one(), &mp),
            });
        }
        Ok(quot.scale_monomial(&BigInt::one(), &mp.div(&mq)))
    }

    /// Exact rational value at a point.
    pub fn evaluate(&self, point: &HashMap<VarId, BigRational>) -> Result<BigRational, LaurentError> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (v, e) in &m.exps {
                let x = point.get(v).ok_or(LaurentError::MissingAssignment(*v))?;
                if *e < 0 && x.is_zero() {
                    return Err(LaurentError::ZeroDenominator(*v));
                }
                term *= rational_pow(x, *e);
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces `v` by `value`. Negative powers of `v` need `value` to be a
    /// monomial with unit coefficient.
    pub fn substitute(&self, v: &VarId, value: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        let inverse = match value.as_monomial() {
            Some((m, c)) if c.abs().is_one() => Some(LaurentPoly::term(c.clone(), m.inverse())),
            _ => None,
        };
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m.div(&Monomial::var(*v, e));
            let base = LaurentPoly::term(c.clone(), rest);
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                inverse.as_ref().ok_or(LaurentError::NonMonomialInverse(*v))?.pow((-e) as u32)
            };
            out = &out + &(&base * &factor);
        }
        Ok(out)
    }
}

pub(crate) fn rational_pow(x: &BigRational, e: i32) -> BigRational {
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut k = e.unsigned_abs();
    let mut acc = BigRational::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_default() += c1 * c2;
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let abs = c.abs();
            match (abs.is_one(), m.is_one()) {
                (true, false) => write!(f, "{m}")?,
                (_, true) => write!(f, "{abs}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> LaurentPoly {
        LaurentPoly::var(LatticePoint::new(&[i, 0, 0]))
    }

    #[test]
    fn ring_basics() {
        let a = x(1);
        let b = x(2);
        assert_eq!(&a + &LaurentPoly::zero(), a);
        let inv = LaurentPoly::term(1, Monomial::var(LatticePoint::new(&[1, 0, 0]), -1));
        assert_eq!(&a * &inv, LaurentPoly::one());
        assert_eq!(&(&a + &b) * &(&a - &b), &(&a * &a) - &(&b * &b));
    }

    #[test]
    fn monomial_division() {
        let (a, b, c) = (x(1), x(2), x(3));
        let p = &(&a * &b) + &(&a * &c);
        assert_eq!(p.exact_div(&a).unwrap(), &b + &c);
    }

    #[test]
    fn inexact_division() {
        let (a, b, c) = (x(1), x(2), x(3));
        assert!(matches!((&a + &b).exact_div(&(&b + &c)), Err(LaurentError::InexactDivision { .. })));
        assert!(matches!(a.exact_div(&(&b + &c)), Err(LaurentError::InexactDivision { .. })));
        assert_eq!(a.exact_div(&LaurentPoly::zero()), Err(LaurentError::DivisionByZero));
    }

    #[test]
    fn polynomial_division_with_denominators() {
        let (a, b, c) = (x(1), x(2), x(3));
        let q = &(&a + &b) * &LaurentPoly::term(1, Monomial::var(LatticePoint::new(&[3, 0, 0]), -2));
        let s = &(&(&a * &c) - &LaurentPoly::constant(7)) * &LaurentPoly::term(3, Monomial::var(LatticePoint::new(&[2, 0, 0]), -1));
        let p = &q * &s;
        assert_eq!(p.exact_div(&q).unwrap(), s);
        assert_eq!(p.exact_div(&s).unwrap(), q);
    }

    #[test]
    fn evaluation() {
        let a = LatticePoint::new(&[1, 0, 0]);
        let b = LatticePoint::new(&[2, 0, 0]);
        let p = LaurentPoly::term(1, Monomial::from_pairs([(a, 1), (b, -1)]));
        let point = HashMap::from([
            (a, BigRational::from_integer(3.into())),
            (b, BigRational::from_integer(2.into())),
        ]);
        assert_eq!(p.evaluate(&point).unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(LaurentPoly::one().evaluate(&HashMap::new()).unwrap(), BigRational::one());
        assert_eq!(p.evaluate(&HashMap::new()), Err(LaurentError::MissingAssignment(a)));
        let zero_b = HashMap::from([(a, BigRational::one()), (b, BigRational::zero())]);
        assert_eq!(p.evaluate(&zero_b), Err(LaurentError::ZeroDenominator(b)));
    }

    #[test]
    fn graded_lex_order() {
        let a = LatticePoint::new(&[1, 0, 0]);
        let b = LatticePoint::new(&[2, 0, 0]);
        let m = |pairs: &[(LatticePoint, i32)]| Monomial::from_pairs(pairs.iter().copied());
        assert!(m(&[(a, 1)]) > m(&[(b, 1)]));
        assert!(m(&[(b, 2)]) > m(&[(a, 1)]));
        assert!(m(&[(a, 1), (b, 1)]) > m(&[(b, 2)]));
        assert!(m(&[]) < m(&[(b, 1)]));
        assert!(m(&[(b, -1)]) < m(&[]));
    }

    #[test]
    fn substitution() {
        let a = LatticePoint::new(&[1, 0, 0]);
        let (xa, xb) = (x(1), x(2));
        let p = &(&xa * &xa) + &xb;
        let got = p.substitute(&a, &(&xb + &LaurentPoly::one())).unwrap();
        assert_eq!(got, &(&(&xb * &xb) + &(&xb * &LaurentPoly::constant(3))) + &LaurentPoly::one());
    }

    #[test]
    fn display() {
        let p = &(&x(1) * &LaurentPoly::constant(2)) - &LaurentPoly::one();
        assert_eq!(p.to_string(), "2*x[1,0,0] - 1");
    }
}
