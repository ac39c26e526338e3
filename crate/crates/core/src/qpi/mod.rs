//! Exact arithmetic in ℚ[π²] and validated numerics.

mod interval;
mod pipoly;

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::RwLock;

pub use interval::{pi, Dyadic, Interval};
pub use pipoly::PiPoly;

use crate::Error;

/// Arbitrary-precision rational, always stored in lowest terms.
pub type Rational = num_rational::BigRational;

/// Precision ceiling for [`compare`], in bits.
pub const DEFAULT_PRECISION_CEILING: u32 = 4096;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn binomial_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..m {
        let next = &row[k] * BigInt::from(m - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn bernoulli_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` with `B_1 = -1/2`, from
/// `Σ_{k≤m} C(m+1, k) B_k = 0`.
pub fn bernoulli(m: usize) -> Rational {
    if let Some(b) = bernoulli_cache().read().get(m) {
        return b.clone();
    }
    let mut cache = bernoulli_cache().write();
    while cache.len() <= m {
        let j = cache.len();
        let row = binomial_row(j + 1);
        let mut s = Rational::zero();
        for (k, b) in cache.iter().enumerate() {
            if !b.is_zero() {
                s += b * Rational::from_integer(row[k].clone());
            }
        }
        let b = -s / Rational::from_integer(BigInt::from(j + 1));
        cache.push(b);
    }
    cache[m].clone()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `ζ(2i) = (−1)^{i+1} B_{2i} (2π)^{2i} / (2·(2i)!)`, a monomial of π-degree `i`.
pub fn zeta_even(i: usize) -> PiPoly {
    assert!(i >= 1, "zeta_even needs i >= 1");
    let b = bernoulli(2 * i);
    let sign = if i % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let num = sign * b * Rational::from_integer(BigInt::one() << (2 * i));
    let r = num / Rational::from_integer(factorial(2 * i) * 2);
    PiPoly::monomial(r, i as u32)
}

fn u_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![rational(1, 2)]))
}

/// Rational part of the recursion weight: `u_i = u_rational(i) · π^{2i}`.
pub fn u_rational(i: usize) -> Rational {
    if let Some(r) = u_cache().read().get(i) {
        return r.clone();
    }
    let mut cache = u_cache().write();
    while cache.len() <= i {
        let j = cache.len();
        let (z, _) = zeta_even(j)
            .as_monomial()
            .map(|(r, d)| (r.clone(), d))
            .expect("zeta is a monomial");
        // 1 − 2^{1−2j}
        let factor = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << (2 * j - 1));
        cache.push(z * factor);
    }
    cache[i].clone()
}

/// Recursion weight: `u_0 = 1/2`, `u_i = ζ(2i)(1 − 2^{1−2i})`.
pub fn u(i: usize) -> PiPoly {
    PiPoly::monomial(u_rational(i), i as u32)
}

/// Validated enclosure of `u_i`.
pub fn u_num(i: usize, prec: u32) -> Interval {
    u(i).enclose(prec)
}

/// Decides the order of two reals in ℚ[π²].
///
/// Equality is structural. Otherwise `a − b` is enclosed at increasing
/// precision starting from 64 bits, doubling until the sign is known, up to
/// `ceiling` bits.
pub fn compare_with_ceiling(a: &PiPoly, b: &PiPoly, ceiling: u32) -> Result<Ordering, Error> {
    let diff = a - b;
    if diff.is_zero() {
        return Ok(Ordering::Equal);
    }
    let mut prec = 64u32;
    loop {
        if let Some(o) = diff.enclose(prec).sign() {
            if o != Ordering::Equal {
                return Ok(o);
            }
        }
        if prec >= ceiling {
            return Err(Error::Undecided { precision: prec });
        }
        prec = (prec * 2).min(ceiling);
    }
}

pub fn compare(a: &PiPoly, b: &PiPoly) -> Result<Ordering, Error> {
    compare_with_ceiling(a, b, DEFAULT_PRECISION_CEILING)
}

/// Decides the sign of an interval-valued expression by re-evaluating at
/// doubling precision until the enclosure excludes zero.
pub fn decide_sign<F>(mut eval: F, ceiling: u32) -> Result<Ordering, Error>
where
    F: FnMut(u32) -> Interval,
{
    let mut prec = 64u32;
    loop {
        match eval(prec).sign() {
            Some(o) if o != Ordering::Equal => return Ok(o),
            _ => {}
        }
        if prec >= ceiling {
            return Err(Error::Undecided { precision: prec });
        }
        prec = (prec * 2).min(ceiling);
    }
}
