use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::taylor::{binomial, shifted_taylor};
use super::CoeffFunction;
use crate::asymptotics::vgn;
use crate::qpi::{Interval, PiPoly, Rational};
use crate::recursion::{CoeffTable, Signature};
use crate::{Error, Result};

/// Per-coordinate transcendental factor of an approximant term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    One,
    /// `cosh(x/2)`
    Cosh,
    /// `sinhc(x/2)`
    Sinhc,
}

/// `coeff · Π x_i^{powers_i} · Π factor_i(x_i)`; the approximant divides
/// the sum of terms by `V_{g,n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: PiPoly,
    pub powers: Vec<u32>,
    pub factors: Vec<Factor>,
}

/// `F^{(N)}(x) = V_{g,n}⁻¹ Σ_terms coeff · Π x^{p} · Π_{I₊} cosh(x/2) · Π_{I₋} sinhc(x/2)`.
#[derive(Clone, Debug)]
pub struct Approximant {
    signature: Signature,
    order: u32,
    threshold: u32,
    vgn: PiPoly,
    terms: Vec<Term>,
}

impl Approximant {
    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn vgn(&self) -> &PiPoly {
        &self.vgn
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Numerator at `x = 0`, exactly.
    pub fn numerator_at_zero(&self) -> PiPoly {
        let mut out = PiPoly::zero();
        for t in &self.terms {
            if t.powers.iter().all(|&p| p == 0) {
                out += &t.coeff;
            }
        }
        out
    }

    /// Whether `F^{(N)}(0) = 1` holds exactly.
    pub fn is_one_at_zero(&self) -> bool {
        self.numerator_at_zero() == self.vgn
    }

    /// Largest power of `x_i` in a term where `x_i` carries a `cosh` or
    /// `sinhc` factor.
    pub fn factored_degree(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|t| {
                t.powers
                    .iter()
                    .zip(&t.factors)
                    .filter(|(_, f)| **f != Factor::One)
                    .map(|(p, _)| *p)
            })
            .max()
            .unwrap_or(0)
    }

    /// Coefficients enclosed once, for repeated evaluation.
    pub fn enclose(&self, prec: u32) -> EnclosedApproximant<'_> {
        let wp = prec + 16;
        EnclosedApproximant {
            inner: self,
            prec,
            coeffs: self.terms.iter().map(|t| t.coeff.enclose(wp)).collect(),
            vgn: self.vgn.enclose(wp),
        }
    }

    pub fn eval(&self, x: &[Interval], prec: u32) -> Result<Interval> {
        self.enclose(prec).eval(x)
    }
}

pub struct EnclosedApproximant<'a> {
    inner: &'a Approximant,
    prec: u32,
    coeffs: Vec<Interval>,
    vgn: Interval,
}

impl EnclosedApproximant<'_> {
    pub fn eval(&self, x: &[Interval]) -> Result<Interval> {
        let n = self.inner.signature.n() as usize;
        if x.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let wp = self.prec + 16;
        let max_pow = self
            .inner
            .terms
            .iter()
            .flat_map(|t| t.powers.iter().copied())
            .max()
            .unwrap_or(0);
        let pows: Vec<Vec<Interval>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![Interval::one()];
                for k in 1..=max_pow as usize {
                    let next = v[k - 1].mul(xi, wp);
                    v.push(next);
                }
                v
            })
            .collect();
        let cosh: Vec<Interval> = x.iter().map(|v| v.mul_pow2(-1).cosh(wp)).collect();
        let sinhc: Vec<Interval> = x.iter().map(|v| v.mul_pow2(-1).sinhc(wp)).collect();
        let mut acc = Interval::zero();
        for (t, c) in self.inner.terms.iter().zip(&self.coeffs) {
            let mut v = c.clone();
            for i in 0..n {
                v = v.mul(&pows[i][t.powers[i] as usize], wp);
                match t.factors[i] {
                    Factor::One => {}
                    Factor::Cosh => v = v.mul(&cosh[i], wp),
                    Factor::Sinhc => v = v.mul(&sinhc[i], wp),
                }
            }
            acc = acc.add(&v, wp);
        }
        Ok(acc.div(&self.vgn, wp))
    }
}

/// Power-basis coefficients (in `α`) of `C(α − a, m)`.
fn shifted_binomial_poly(m: u32, a: u32) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for j in 0..m as i64 {
        // multiply by (α − a − j)
        let c = Rational::from_integer(BigInt::from(-(a as i64) - j));
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (d, v) in p.iter().enumerate() {
            next[d + 1] += v;
            next[d] += v * &c;
        }
        p = next;
    }
    let fact: BigInt = (1..=m as i64).map(BigInt::from).product();
    p.into_iter().map(|v| v / &fact).collect()
}

/// Power-basis coefficients of `p_k(α) = Π_{j<k} (2α + 1 − j)`.
fn p_k_poly(k: u32) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for j in 0..k as i64 {
        let c = Rational::from_integer(BigInt::from(1 - j));
        let two = Rational::from_integer(BigInt::from(2));
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (d, v) in p.iter().enumerate() {
            next[d + 1] += v * &two;
            next[d] += v * &c;
        }
        p = next;
    }
    p
}

/// `M[m][k]` with `C(α − a, m) = Σ_{k≤m} M[m][k] p_k(α)`.
fn p_k_expansion(m: u32, a: u32) -> Vec<Rational> {
    let mut q = shifted_binomial_poly(m, a);
    let mut out = vec![Rational::zero(); m as usize + 1];
    for k in (0..=m).rev() {
        let pk = p_k_poly(k);
        let coef = &q[k as usize] / &pk[k as usize];
        for (d, v) in pk.iter().enumerate() {
            q[d] -= v * &coef;
        }
        out[k as usize] = coef;
    }
    debug_assert!(q.iter().all(|v| v.is_zero()));
    out
}

/// `1 / (2^{2β} (2β+1)!)`.
fn weight_coeff(beta: u32) -> Rational {
    let fact: BigInt = (1..=(2 * beta as i64 + 1)).map(BigInt::from).product();
    Rational::new(BigInt::one(), fact << (2 * beta as usize))
}

type Piece = (u32, Factor, Rational);

/// `Σ_{α≥a} C(α − a, m) x^{2α}/(2^{2α}(2α+1)!)` as a sum of pieces, using
/// `Σ_α p_k(α) x^{2α}/(2^{2α}(2α+1)!) = (x/2)^k sinhc(x/2)` (even `k`) or
/// `(x/2)^{k−1} cosh(x/2)` (odd `k`).
fn tail_pieces(m: u32, a: u32) -> Vec<Piece> {
    let mut out = Vec::new();
    for (k, c) in p_k_expansion(m, a).into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as u32;
        let (power, factor) = if k.is_multiple_of(2) {
            (k, Factor::Sinhc)
        } else {
            (k - 1, Factor::Cosh)
        };
        out.push((power, factor, c / (BigInt::one() << power as usize)));
    }
    for beta in 0..a {
        let c = binomial(beta as i64 - a as i64, m);
        if !c.is_zero() {
            out.push((2 * beta, Factor::One, -weight_coeff(beta) * c));
        }
    }
    out
}

/// The order-`N` approximant: shifted discrete Taylor expansion of
/// `α ↦ c_{g,n}(α)` with `K = 2N` and threshold `a`, resummed in closed form.
pub fn build_fn(sig: Signature, order: u32, a: u32, table: &CoeffTable) -> Result<Approximant> {
    let f = CoeffFunction::new(sig, table)?;
    let n = sig.n() as usize;
    let k = 2 * order;
    let shifted = shifted_taylor(&f, k, a);
    let mut tails: BTreeMap<u32, Vec<Piece>> = BTreeMap::new();
    let mut acc: BTreeMap<(Vec<u32>, Vec<Factor>), PiPoly> = BTreeMap::new();
    for region in &shifted.regions {
        for (m, coeff) in region.poly.terms() {
            // per coordinate, the list of pieces to multiply out
            let mut per_coord: Vec<Vec<Piece>> = Vec::with_capacity(n);
            let mut fi = 0;
            let mut bi = 0;
            for i in 0..n {
                if fi < region.free.len() && region.free[fi] == i {
                    let mi = m[fi];
                    let t = tails.entry(mi).or_insert_with(|| tail_pieces(mi, a));
                    per_coord.push(t.clone());
                    fi += 1;
                } else {
                    let b = region.beta[bi];
                    per_coord.push(vec![(2 * b, Factor::One, weight_coeff(b))]);
                    bi += 1;
                }
            }
            let mut partial: Vec<(Vec<u32>, Vec<Factor>, Rational)> =
                vec![(Vec::new(), Vec::new(), Rational::one())];
            for pieces in &per_coord {
                let mut next = Vec::with_capacity(partial.len() * pieces.len());
                for (p, fs, r) in &partial {
                    for (pw, fc, c) in pieces {
                        let mut p2 = p.clone();
                        p2.push(*pw);
                        let mut f2 = fs.clone();
                        f2.push(*fc);
                        next.push((p2, f2, r * c));
                    }
                }
                partial = next;
            }
            for (p, fs, r) in partial {
                *acc.entry((p, fs)).or_default() += &coeff.scale(&r);
            }
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((powers, factors), coeff)| Term {
            coeff,
            powers,
            factors,
        })
        .collect();
    Ok(Approximant {
        signature: sig,
        order,
        threshold: a,
        vgn: vgn(table, sig)?,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{multi_indices, p_k, weights, VolumeEvaluator};
    use crate::discrete::GridFunction;
    use crate::qpi::Dyadic;
    use crate::recursion::{fill, Convention};

    const P: u32 = 128;

    fn table() -> CoeffTable {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 7, 3);
        t
    }

    #[test]
    fn expansion_in_p_k_basis() {
        for m in 0..5 {
            for a in 0..5 {
                let coeffs = p_k_expansion(m, a);
                for alpha in 0..12u32 {
                    let lhs = binomial(alpha as i64 - a as i64, m);
                    let rhs: Rational = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c * Rational::from_integer(p_k(k as u32, alpha)))
                        .sum();
                    assert_eq!(Rational::from_integer(lhs), rhs, "m={m} a={a} α={alpha}");
                }
            }
        }
    }

    /// `Σ_{|α|_∞ ≤ T} c̃(α) Π w(x_i) / V` with the shifted Taylor polynomial
    /// evaluated pointwise.
    fn direct_sum(sig: Signature, order: u32, a: u32, t: &CoeffTable, x: &[f64]) -> Interval {
        let f = CoeffFunction::new(sig, t).unwrap();
        let s = shifted_taylor(&f, 2 * order, a);
        let cut = 40;
        let w: Vec<Vec<Interval>> = x
            .iter()
            .map(|&v| weights(&Interval::from_f64(v), cut, P))
            .collect();
        let n = sig.n() as usize;
        let mut acc = Interval::zero();
        for alpha in super::super::box_below(&vec![cut; n]) {
            let c = s.eval(&alpha);
            if c.is_zero() {
                continue;
            }
            let mut v = c.enclose(P);
            for i in 0..n {
                v = v.mul(&w[i][alpha[i] as usize], P);
            }
            acc = acc.add(&v, P);
        }
        acc.div(&vgn(t, sig).unwrap().enclose(P), P)
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let t = table();
        for (g, n, order, a, x) in [
            (3, 1, 1, 4, vec![1.5]),
            (2, 2, 1, 2, vec![0.5, 2.0]),
            (3, 1, 2, 6, vec![3.0]),
            (1, 2, 0, 2, vec![1.0, 0.25]),
        ] {
            let sig = Signature::new(g, n).unwrap();
            let f = build_fn(sig, order, a, &t).unwrap();
            let xs: Vec<Interval> = x.iter().map(|&v| Interval::from_f64(v)).collect();
            let closed = f.eval(&xs, P).unwrap();
            let direct = direct_sum(sig, order, a, &t, &x);
            let diff = closed.sub(&direct, P).abs();
            assert!(diff.hi() < &Dyadic::pow2(-90), "{sig} N={order} a={a}");
        }
    }

    #[test]
    fn exact_at_zero_and_degree_bound() {
        let t = table();
        for (g, n) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (0, 4), (1, 3)] {
            let sig = Signature::new(g, n).unwrap();
            for order in 0..=2 {
                for a in [2 * order, 2 * order + 2] {
                    let f = build_fn(sig, order, a, &t).unwrap();
                    assert!(f.is_one_at_zero(), "{sig} N={order} a={a}");
                    assert!(f.factored_degree() <= 2 * order);
                    for term in f.terms() {
                        assert!(term.powers.iter().all(|p| p % 2 == 0));
                    }
                }
            }
        }
    }

    #[test]
    fn reproduces_volume_when_threshold_covers_degree() {
        // a beyond the degree bound: every α with a nonzero coefficient lies
        // in an indicator region and the tails vanish
        let t = table();
        let sig = Signature::new(2, 2).unwrap();
        let d = sig.degree_bound();
        let f = build_fn(sig, 1, d + 1, &t).unwrap();
        let ev = VolumeEvaluator::new(sig, &t, P).unwrap();
        let x = [Interval::from_f64(1.25), Interval::from_f64(3.0)];
        let diff = f.eval(&x, P).unwrap().sub(&ev.ratio(&x).unwrap(), P).abs();
        assert!(diff.hi() < &Dyadic::pow2(-100));
        let c = CoeffFunction::new(sig, &t).unwrap();
        let s = shifted_taylor(&c, 2, d + 1);
        for alpha in multi_indices(2, d) {
            assert_eq!(s.eval(&alpha), c.eval(&alpha));
        }
    }

    #[test]
    fn missing_table() {
        let t = CoeffTable::new(Convention::Paper);
        let sig = Signature::new(2, 1).unwrap();
        assert!(matches!(
            build_fn(sig, 1, 4, &t),
            Err(Error::MissingTable { .. })
        ));
    }
}
