use num_bigint::BigInt;

use super::volume::vgn;
use crate::qpi::{pi, Interval, PiPoly, Rational};
use crate::recursion::{CoeffTable, Signature};
use crate::{Error, Result};

/// `Π_j sinhc(x_j/2)`.
pub fn f0(x: &[Interval], prec: u32) -> Interval {
    x.iter().fold(Interval::one(), |acc, xi| {
        acc.mul(&xi.mul_pow2(-1).sinhc(prec + 8), prec + 8)
    })
}

/// The two g-free brackets shared by `F1` and `f1`:
/// `Σ_i [c_i + 1 − (x_i²/16 + 2) s_i] Π_{k≠i} s_k` and
/// `Σ_{i<j} [c_i c_j + 1 − 2 s_i s_j] Π_{k∉{i,j}} s_k`.
fn brackets(x: &[Interval], prec: u32) -> (Interval, Interval) {
    let wp = prec + 16;
    let half: Vec<Interval> = x.iter().map(|v| v.mul_pow2(-1)).collect();
    let c: Vec<Interval> = half.iter().map(|v| v.cosh(wp)).collect();
    let s: Vec<Interval> = half.iter().map(|v| v.sinhc(wp)).collect();
    let one = Interval::one();
    let two = Interval::from_i64(2);
    let prod_except = |skip: &[usize]| {
        (0..x.len())
            .filter(|k| !skip.contains(k))
            .fold(Interval::one(), |acc, k| acc.mul(&s[k], wp))
    };
    let mut single = Interval::zero();
    for i in 0..x.len() {
        let q = x[i].sqr(wp).mul_pow2(-4).add(&two, wp);
        let b = c[i].add(&one, wp).sub(&q.mul(&s[i], wp), wp);
        single = single.add(&b.mul(&prod_except(&[i]), wp), wp);
    }
    let mut pair = Interval::zero();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let b = c[i]
                .mul(&c[j], wp)
                .add(&one, wp)
                .sub(&s[i].mul(&s[j], wp).mul_pow2(1), wp);
            pair = pair.add(&b.mul(&prod_except(&[i, j]), wp), wp);
        }
    }
    (single, pair)
}

/// Ratio `V_{g',n'} / V_{g,n}`, zero when `(g', n')` is not a valid
/// signature.
fn neighbour_ratio(
    table: &CoeffTable,
    sig: Signature,
    dg: i64,
    dn: i64,
    prec: u32,
) -> Result<Interval> {
    let Some(other) = Signature::checked(sig.g() as i64 + dg, sig.n() as i64 + dn) else {
        return Ok(Interval::zero());
    };
    let num = vgn(table, other)?.enclose(prec);
    let den = vgn(table, sig)?.enclose(prec);
    Ok(num.div(&den, prec))
}

/// The second-order approximant
/// `F¹(x) = Π s + 8 (V_{g−1,n+1}/V_{g,n}) Σ_i[…] − 4 (V_{g,n−1}/V_{g,n}) Σ_{i<j}[…]`
/// with `c(x) = cosh(x/2)` and `s(x) = sinhc(x/2)`.
pub fn f1_approx(
    sig: Signature,
    x: &[Interval],
    table: &CoeffTable,
    prec: u32,
) -> Result<Interval> {
    if x.len() != sig.n() as usize {
        return Err(Error::ArityMismatch {
            expected: sig.n() as usize,
            got: x.len(),
        });
    }
    let wp = prec + 16;
    let rb = neighbour_ratio(table, sig, -1, 1, wp)?;
    let ra = neighbour_ratio(table, sig, 0, -1, wp)?;
    let (single, pair) = brackets(x, prec);
    Ok(f0(x, wp)
        .add(&rb.mul(&single, wp).mul_pow2(3), wp)
        .sub(&ra.mul(&pair, wp).mul_pow2(2), wp))
}

/// The g-free second-order term
/// `f¹_n(x) = π⁻² Σ_i[…] − (2π²)⁻¹ Σ_{i<j}[…]`.
pub fn f1(x: &[Interval], prec: u32) -> Interval {
    let wp = prec + 16;
    let (single, pair) = brackets(x, prec);
    let pi2 = pi(wp).sqr(wp);
    single.sub(&pair.mul_pow2(-1), wp).div(&pi2, wp)
}

fn indicator(b: bool) -> i64 {
    b as i64
}

fn neighbour_volume(table: &CoeffTable, sig: Signature, dg: i64, dn: i64) -> Result<PiPoly> {
    match Signature::checked(sig.g() as i64 + dg, sig.n() as i64 + dn) {
        Some(s) => vgn(table, s),
        None => Ok(PiPoly::zero()),
    }
}

fn check_arity(sig: Signature, alpha: &[u32]) -> Result<()> {
    if alpha.len() == sig.n() as usize {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            expected: sig.n() as usize,
            got: alpha.len(),
        })
    }
}

/// Second-order main term of `δ₁ c_{g,n}(α)`:
/// `4(4α₁ − 1 + 2·1{α₁=0}) V_{g−1,n+1} + 4 Σ_{j≥2} (4α_j + 2 − 1{α₁=α_j=0}) V_{g,n−1}`.
pub fn psi1(sig: Signature, alpha: &[u32], table: &CoeffTable) -> Result<PiPoly> {
    check_arity(sig, alpha)?;
    let vb = neighbour_volume(table, sig, -1, 1)?;
    let va = neighbour_volume(table, sig, 0, -1)?;
    let a1 = alpha[0] as i64;
    let first = 4 * (4 * a1 - 1 + 2 * indicator(a1 == 0));
    let mut rest = 0i64;
    for &aj in &alpha[1..] {
        rest += 4 * (4 * aj as i64 + 2 - indicator(a1 == 0 && aj == 0));
    }
    Ok(vb.scale(&Rational::from_integer(first.into()))
        + va.scale(&Rational::from_integer(rest.into())))
}

/// `p_k(α) = Π_{j<k} (2α + 1 − j)`.
pub fn p_k(k: u32, alpha: u32) -> BigInt {
    (0..k as i64).fold(BigInt::from(1), |acc, j| {
        acc * BigInt::from(2 * alpha as i64 + 1 - j)
    })
}

/// Second-order approximation of `c_{g,n}(α)`:
/// `V_{g,n} + 8 V_{g−1,n+1} Σ_i (p₁ + 1{α_i=0} − p₂/4 − 2) − 4 V_{g,n−1} Σ_{i<j} (p₁p₁ + 1{α_i=α_j=0} − 2)`.
pub fn c_hat1(sig: Signature, alpha: &[u32], table: &CoeffTable) -> Result<PiPoly> {
    check_arity(sig, alpha)?;
    let v = vgn(table, sig)?;
    let vb = neighbour_volume(table, sig, -1, 1)?;
    let va = neighbour_volume(table, sig, 0, -1)?;
    let mut single = Rational::from_integer(0.into());
    for &a in alpha {
        let t = Rational::from_integer(p_k(1, a) + indicator(a == 0) - 2)
            - Rational::new(p_k(2, a), BigInt::from(4));
        single += t;
    }
    let mut pair = BigInt::from(0);
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            pair +=
                p_k(1, alpha[i]) * p_k(1, alpha[j]) + indicator(alpha[i] == 0 && alpha[j] == 0) - 2;
        }
    }
    Ok(v + vb.scale(&(single * BigInt::from(8))) - va.scale(&Rational::from_integer(pair * 4)))
}
