//! The ring ℚ[π²].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{pi, Interval};
use super::Rational;

/// A finite sum `Σ_d r_d · π^{2d}` with rational coefficients.
///
/// Zero coefficients are never stored, so the zero element is the empty map
/// and structural equality is equality of real numbers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiPoly {
    terms: BTreeMap<u32, Rational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::monomial(r, 0)
    }

    /// `r · π^{2d}`.
    pub fn monomial(r: Rational, d: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(d, r);
        }
        Self { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds from `(d, r)` pairs, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (u32, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (d, r) in it {
            p.add_term(d, r);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest π²-exponent, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, d: u32) -> Option<&Rational> {
        self.terms.get(&d)
    }

    /// Iterates `(d, r)` in ascending `d`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> + '_ {
        self.terms.iter().map(|(d, r)| (*d, r))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some((r, d))` when the value is a single nonzero monomial.
    pub fn as_monomial(&self) -> Option<(&Rational, u32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(d, r)| (r, *d))
        } else {
            None
        }
    }

    fn add_term(&mut self, d: u32, r: Rational) {
        if r.is_zero() {
            return;
        }
        let slot = self.terms.entry(d).or_insert_with(Rational::zero);
        *slot += r;
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, c)| (*d, c * r)).collect(),
        }
    }

    /// Multiplies by `π^{2k}`.
    pub fn shift_degree(&self, k: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    /// Encloses the real value given an enclosure of π².
    pub fn eval_interval(&self, pi_sq: &Interval, prec: u32) -> Interval {
        // Horner in π² from the top degree down.
        let Some(top) = self.degree() else {
            return Interval::zero();
        };
        let mut acc = Interval::zero();
        for d in (0..=top).rev() {
            acc = acc.mul(pi_sq, prec);
            if let Some(c) = self.terms.get(&d) {
                acc = acc.add(&Interval::from_rational(c, prec), prec);
            }
        }
        acc
    }

    /// Encloses the value at `prec` bits of working precision.
    pub fn enclose(&self, prec: u32) -> Interval {
        let p = pi(prec + 8);
        let pi_sq = p.mul(&p, prec + 8);
        self.eval_interval(&pi_sq, prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(80).mid_f64()
    }

    /// Cache-file syntax: `d1:p1/q1,d2:p2/q2` ascending in `d`; zero is `0:0/1`.
    pub fn to_cache_string(&self) -> String {
        if self.is_zero() {
            return "0:0/1".to_string();
        }
        self.terms
            .iter()
            .map(|(d, r)| format!("{}:{}/{}", d, r.numer(), r.denom()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for PiPoly {
    /// Human form, highest degree first: `2*pi^2 + 2`, `pi^2/6`, `7*pi^4/45`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (d, r)) in self.terms.iter().rev().enumerate() {
            let neg = r.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let num = r.numer().abs();
            let den = r.denom();
            if *d == 0 {
                write!(f, "{num}")?;
            } else {
                if !num.is_one() {
                    write!(f, "{num}*")?;
                }
                write!(f, "pi^{}", 2 * d)?;
            }
            if !den.is_one() {
                write!(f, "/{den}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiPoly({self})")
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(mut self, rhs: PiPoly) -> PiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&PiPoly> for PiPoly {
    fn add_assign(&mut self, rhs: &PiPoly) {
        for (d, r) in &rhs.terms {
            self.add_term(*d, r.clone());
        }
    }
}

impl SubAssign<&PiPoly> for PiPoly {
    fn sub_assign(&mut self, rhs: &PiPoly) {
        for (d, r) in &rhs.terms {
            self.add_term(*d, -r.clone());
        }
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(mut self, rhs: PiPoly) -> PiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            terms: self.terms.iter().map(|(d, r)| (*d, -r.clone())).collect(),
        }
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        -&self
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (d1, r1) in &self.terms {
            for (d2, r2) in &rhs.terms {
                out.add_term(d1 + d2, r1 * r2);
            }
        }
        out
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: PiPoly) -> PiPoly {
        &self * &rhs
    }
}

impl From<Rational> for PiPoly {
    fn from(r: Rational) -> Self {
        PiPoly::constant(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zero_has_no_terms() {
        let p = PiPoly::monomial(q(0, 1), 3);
        assert!(p.is_zero());
        let a = PiPoly::monomial(q(1, 2), 1);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_degree_adds() {
        let a = PiPoly::monomial(q(1, 6), 1);
        let b = PiPoly::monomial(q(1, 90), 2);
        let c = &a * &b;
        assert_eq!(c.as_monomial(), Some((&q(1, 540), 3)));
    }

    #[test]
    fn display_forms() {
        let v04 = PiPoly::from_terms([(1, q(2, 1)), (0, q(2, 1))]);
        assert_eq!(v04.to_string(), "2*pi^2 + 2");
        assert_eq!(PiPoly::monomial(q(1, 6), 1).to_string(), "pi^2/6");
        assert_eq!(PiPoly::one().to_string(), "1");
        assert_eq!(PiPoly::monomial(q(7, 45), 2).to_string(), "7*pi^4/45");
        assert_eq!(
            PiPoly::from_terms([(1, q(-1, 3)), (0, q(-5, 1))]).to_string(),
            "-pi^2/3 - 5"
        );
    }

    #[test]
    fn cache_syntax() {
        assert_eq!(PiPoly::monomial(q(2, 1), 1).to_cache_string(), "1:2/1");
        let p = PiPoly::from_terms([(2, q(-1, 3)), (0, q(1, 1))]);
        assert_eq!(p.to_cache_string(), "0:1/1,2:-1/3");
    }

    #[test]
    fn numeric_value() {
        let p = PiPoly::monomial(q(2, 1), 1);
        assert!((p.to_f64() - 19.739208802178716).abs() < 1e-12);
    }
}
