//! Validated real arithmetic on intervals with dyadic (binary floating-point)
//! endpoints.
//!
//! Every operation takes a target precision in bits and rounds the lower
//! endpoint toward −∞ and the upper endpoint toward +∞, so the true real
//! value stays enclosed through any chain of operations.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::Mutex;

use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// `man · 2^exp`, with trailing zero bits of `man` stripped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        Self {
            man: man >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite float");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::new(BigInt::from(man) * sign, exp)
    }

    pub fn pow2(e: i64) -> Self {
        Self::new(BigInt::one(), e)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit: `2^(e-1) ≤ |x| < 2^e`. Zero maps to `i64::MIN`.
    fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -self.man.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        Self::new(shr_round(&self.man, shift, dir), self.exp + shift as i64)
    }

    /// `a / b` rounded in direction `dir` to `prec` bits.
    fn div(a: &Self, b: &Self, prec: u32, dir: Round) -> Self {
        assert!(!b.is_zero(), "division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        let am = a.man.magnitude();
        let bm = b.man.magnitude();
        let k = (prec as i64 + 2 + bm.bits() as i64 - am.bits() as i64).max(0) as u64;
        let (q, r) = (am << k).div_rem(bm);
        let negative = (a.signum() * b.signum()) < 0;
        let bump = !r.is_zero()
            && match dir {
                Round::Up => !negative,
                Round::Down => negative,
            };
        let q = if bump { q + BigUint::one() } else { q };
        let q = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Self::new(q, a.exp - b.exp - k as i64).round(prec, dir)
    }

    fn from_rational(r: &Rational, prec: u32, dir: Round) -> Self {
        Self::div(
            &Self::new(r.numer().clone(), 0),
            &Self::new(r.denom().clone(), 0),
            prec,
            dir,
        )
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as u64)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative");
        if self.is_zero() {
            return Self::zero();
        }
        let mut shift = (2 * prec as i64 + 4 - self.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.man << shift as u64;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let r = if !exact && dir == Round::Up { r + 1 } else { r };
        Self::new(r, (self.exp - shift) / 2).round(prec, dir)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        let m = r.man.to_f64().unwrap_or(0.0);
        let e = r.exp;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling to stay inside the f64 exponent range
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Decimal scientific notation with `digits` significant digits
    /// (round half away from zero), e.g. `1.2345e-3`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return format!("{:.*}e+00", digits.saturating_sub(1), 0.0);
        }
        let q = self.to_rational();
        let neg = q.is_negative();
        let q = q.abs();
        // decimal exponent estimate from the binary one
        let mut e10 =
            ((self.magnitude_exp() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let scaled = |e10: i64| -> Rational {
            let shift = digits as i64 - 1 - e10;
            if shift >= 0 {
                &q * Rational::from_integer(num_traits::pow(ten.clone(), shift as usize))
            } else {
                &q / Rational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
            }
        };
        let lo_bound = num_traits::pow(ten.clone(), digits - 1);
        let hi_bound = num_traits::pow(ten.clone(), digits);
        let mut m;
        loop {
            let s = scaled(e10);
            m = (s + Rational::new(BigInt::one(), BigInt::from(2)))
                .floor()
                .to_integer();
            if m >= hi_bound {
                e10 += 1;
            } else if m < lo_bound {
                e10 -= 1;
            } else {
                break;
            }
        }
        let s = m.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        let esign = if e10 < 0 { '-' } else { '+' };
        if tail.is_empty() {
            format!("{sign}{head}e{esign}{:02}", e10.abs())
        } else {
            format!("{sign}{head}.{tail}e{esign}{:02}", e10.abs())
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }
}

fn shr_round(man: &BigInt, shift: u64, dir: Round) -> BigInt {
    let mag = man.magnitude();
    let q = mag >> shift;
    let exact = mag.trailing_zeros().is_none_or(|tz| tz >= shift);
    let negative = man.sign() == Sign::Minus;
    let away = !exact
        && match dir {
            Round::Up => !negative,
            Round::Down => negative,
        };
    let q = if away { q + BigUint::one() } else { q };
    BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q)
}

/// A closed interval `[lo, hi]` of reals.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_sci_string(25),
            self.hi.to_sci_string(25)
        )
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Self {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::point(Dyadic::from_i64(v))
    }

    pub fn from_f64(v: f64) -> Self {
        Self::point(Dyadic::from_f64(v))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.denom().is_one() {
            return Self::point(Dyadic::new(r.numer().clone(), 0));
        }
        Self {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    /// `Some(ordering)` of every element against zero, or `None` if the
    /// interval straddles zero without being the point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.signum() > 0 {
            Some(Ordering::Greater)
        } else if self.hi.signum() < 0 {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn round_out(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Self {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Self::round_out(self.lo.add(&o.lo), self.hi.add(&o.hi), prec)
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        Self::round_out(self.lo.sub(&o.hi), self.hi.sub(&o.lo), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = c.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Self::round_out(lo, hi, prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    pub fn mul_rational(&self, r: &Rational, prec: u32) -> Self {
        self.mul(&Self::from_rational(r, prec), prec)
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let a = self.abs();
        Self::round_out(a.lo.mul(&a.lo), a.hi.mul(&a.hi), prec)
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            Self {
                lo: Dyadic::zero(),
                hi: m,
            }
        }
    }

    /// Panics if the interval contains zero.
    pub fn recip(&self, prec: u32) -> Self {
        assert!(
            !self.contains_zero(),
            "reciprocal of interval containing zero"
        );
        let one = Dyadic::from_i64(1);
        Self {
            lo: Dyadic::div(&one, &self.hi, prec, Round::Down),
            hi: Dyadic::div(&one, &self.lo, prec, Round::Up),
        }
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        if o.lo == o.hi {
            // exact divisor: a single directed division per endpoint
            let d = &o.lo;
            assert!(!d.is_zero(), "division by zero");
            let (a, b) = if d.signum() > 0 {
                (&self.lo, &self.hi)
            } else {
                (&self.hi, &self.lo)
            };
            return Self {
                lo: Dyadic::div(a, d, prec, Round::Down),
                hi: Dyadic::div(b, d, prec, Round::Up),
            };
        }
        self.mul(&o.recip(prec + 4), prec)
    }

    pub fn powi(&self, k: u32, prec: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self, prec);
        }
        acc
    }

    pub fn sqrt(&self, prec: u32) -> Self {
        let lo = if self.lo.signum() < 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt(prec, Round::Down)
        };
        Self {
            lo,
            hi: self.hi.sqrt(prec, Round::Up),
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    /// Adds `[-e, e]`.
    pub fn widen(&self, e: &Dyadic) -> Self {
        let e = e.abs();
        Self {
            lo: self.lo.sub(&e),
            hi: self.hi.add(&e),
        }
    }

    pub fn exp(&self, prec: u32) -> Self {
        let lo = exp_point(&self.lo, prec).lo;
        let hi = exp_point(&self.hi, prec).hi;
        Self { lo, hi }
    }

    /// `cosh(x)`.
    pub fn cosh(&self, prec: u32) -> Self {
        even_monotone(self, prec, cosh_point)
    }

    /// `sinh(x)/x`, equal to 1 at 0.
    pub fn sinhc(&self, prec: u32) -> Self {
        even_monotone(self, prec, sinhc_point)
    }

    pub fn sinh(&self, prec: u32) -> Self {
        // odd and increasing
        let lo = sinh_point(&self.lo, prec).lo;
        let hi = sinh_point(&self.hi, prec).hi;
        Self { lo, hi }
    }

    /// Japanese bracket `sqrt(1 + x²)`.
    pub fn japanese(&self, prec: u32) -> Self {
        Self::one().add(&self.sqr(prec + 4), prec + 4).sqrt(prec)
    }

    pub fn to_sci_string(&self, digits: usize) -> String {
        self.mid().to_sci_string(digits)
    }
}

fn even_monotone(x: &Interval, prec: u32, f: fn(&Dyadic, u32) -> Interval) -> Interval {
    if x.lo.signum() >= 0 {
        Interval {
            lo: f(&x.lo, prec).lo,
            hi: f(&x.hi, prec).hi,
        }
    } else if x.hi.signum() <= 0 {
        even_monotone(&x.neg(), prec, f)
    } else {
        let far = x.lo.abs().max(x.hi.clone());
        Interval {
            lo: f(&Dyadic::zero(), prec).lo,
            hi: f(&far, prec).hi,
        }
    }
}

/// Enclosure of `exp(y)` for a dyadic point `y`.
fn exp_point(y: &Dyadic, prec: u32) -> Interval {
    if y.is_zero() {
        return Interval::one();
    }
    if y.signum() < 0 {
        return exp_point(&y.neg(), prec + 4).recip(prec);
    }
    // reduce to r = y / 2^s with r ≤ 1/2
    let s = (y.magnitude_exp() + 1).max(0);
    let wp = prec + s as u32 + 24;
    let r = Interval::point(y.mul_pow2(-s));
    let series = exp_series(&r, wp);
    let mut acc = series;
    for _ in 0..s {
        acc = acc.sqr(wp);
    }
    Interval::round_out(acc.lo, acc.hi, prec)
}

/// `Σ r^k/k!` for `0 ≤ r ≤ 1/2`, with the tail bounded by the last term.
fn exp_series(r: &Interval, wp: u32) -> Interval {
    let eps = Dyadic::pow2(-(wp as i64) - 4);
    let mut sum = Interval::one();
    let mut term = Interval::one();
    let mut k: i64 = 1;
    loop {
        term = term.mul(r, wp).div(&Interval::from_i64(k), wp);
        sum = sum.add(&term, wp);
        if term.hi < eps {
            // remaining terms sum to at most term·r/(k+1)/(1 - r/(k+2)) ≤ term
            return Interval {
                lo: sum.lo,
                hi: sum.hi.add(&term.hi),
            };
        }
        k += 1;
    }
}

fn cosh_point(y: &Dyadic, prec: u32) -> Interval {
    let wp = prec + 8;
    let e = exp_point(y, wp);
    let einv = exp_point(&y.neg(), wp);
    let s = e.add(&einv, wp).mul_pow2(-1);
    Interval::round_out(s.lo, s.hi, prec)
}

fn sinh_point(y: &Dyadic, prec: u32) -> Interval {
    if y.is_zero() {
        return Interval::zero();
    }
    let x = Interval::point(y.clone());
    let s = sinhc_point(&y.abs(), prec + 8).mul(&x, prec + 8);
    Interval::round_out(s.lo, s.hi, prec)
}

fn sinhc_point(y: &Dyadic, prec: u32) -> Interval {
    let y = y.abs();
    if y.is_zero() {
        return Interval::one();
    }
    let wp = prec + 16;
    if y <= Dyadic::pow2(-1) {
        // Σ y^{2k}/(2k+1)!; ratio of consecutive terms ≤ 1/24, tail ≤ last term
        let y2 = Interval::point(y.mul(&y));
        let eps = Dyadic::pow2(-(wp as i64) - 4);
        let mut sum = Interval::one();
        let mut term = Interval::one();
        let mut k: i64 = 1;
        loop {
            term = term
                .mul(&y2, wp)
                .div(&Interval::from_i64((2 * k) * (2 * k + 1)), wp);
            sum = sum.add(&term, wp);
            if term.hi < eps {
                let s = Interval {
                    lo: sum.lo,
                    hi: sum.hi.add(&term.hi),
                };
                return Interval::round_out(s.lo, s.hi, prec);
            }
            k += 1;
        }
    }
    let e = exp_point(&y, wp);
    let einv = exp_point(&y.neg(), wp);
    let num = e.sub(&einv, wp);
    let s = num.div(&Interval::point(y.mul_pow2(1)), wp);
    Interval::round_out(s.lo, s.hi, prec)
}

fn pi_cache() -> &'static Mutex<HashMap<u32, Interval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of π of width < 2^(1−prec), by Machin's formula
/// π = 16·arctan(1/5) − 4·arctan(1/239) in fixed point.
pub fn pi(prec: u32) -> Interval {
    if let Some(v) = pi_cache().lock().get(&prec) {
        return v.clone();
    }
    let w = prec as u64 + 32;
    let (a5, n5) = arctan_inv_fixed(5, w);
    let (a239, n239) = arctan_inv_fixed(239, w);
    let s = a5 * 16 - a239 * 4;
    // each computed term is off by < 1 unit, plus < 1 unit of neglected tail
    let err = BigInt::from(16 * (n5 + 1) + 4 * (n239 + 1) + 1);
    let lo = Dyadic::new(&s - &err, -(w as i64));
    let hi = Dyadic::new(&s + &err, -(w as i64));
    let v = Interval { lo, hi };
    pi_cache().lock().insert(prec, v.clone());
    v
}

/// `floor`-based fixed-point sum of arctan(1/k) in units of 2^-w; returns the
/// sum and the number of terms used.
fn arctan_inv_fixed(k: u64, w: u64) -> (BigInt, u64) {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        j += 1;
    }
    (sum, j)
}
