use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{box_below, delta, GridFunction};
use crate::qpi::{PiPoly, Rational};

/// Generalized binomial `C(t, m) = t(t−1)…(t−m+1)/m!` for any integer `t`.
pub fn binomial(t: i64, m: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..m as i64 {
        num *= BigInt::from(t - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// A polynomial on `ℕ₀ⁿ` in the Newton basis: `Σ_m a_m Π_i C(α_i, m_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, PiPoly>,
}

impl NewtonPoly {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PiPoly)> {
        self.terms.iter()
    }

    /// Total degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn eval(&self, alpha: &[u32]) -> PiPoly {
        assert_eq!(alpha.len(), self.arity);
        let mut out = PiPoly::zero();
        for (m, a) in &self.terms {
            let w = m
                .iter()
                .zip(alpha)
                .fold(BigInt::one(), |acc, (&mi, &x)| acc * binomial(x as i64, mi));
            if !w.is_zero() {
                out += &a.scale(&Rational::from_integer(w));
            }
        }
        out
    }
}

/// Degree-`K` discrete Taylor polynomial of `f` at the origin:
/// `f̃(α) = Σ_{|m|≤K} (−1)^{|m|} δ^m f(0) Π C(α_i, m_i)`.
///
/// This is the forward-difference interpolant, so it reproduces any
/// polynomial of total degree `≤ K` exactly.
pub fn taylor_poly(f: &dyn GridFunction, k: u32) -> NewtonPoly {
    let n = f.arity();
    let zero = vec![0; n];
    let mut terms = BTreeMap::new();
    for m in box_below(&vec![k; n]) {
        let order: u32 = m.iter().sum();
        if order > k {
            continue;
        }
        let mut d = delta(f, &m, &zero).expect("arity checked");
        if order % 2 == 1 {
            d = -d;
        }
        if !d.is_zero() {
            terms.insert(m, d);
        }
    }
    NewtonPoly { arity: n, terms }
}

/// One piece `{α_i ≥ a for i ∈ I, α_i = β_i otherwise}` of a
/// [`ShiftedPoly`], carrying a polynomial in the shifted variables
/// `(α_i − a)_{i∈I}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub free: Vec<usize>,
    pub beta: Vec<u32>,
    pub poly: NewtonPoly,
}

/// An element of the class of functions that are polynomial of degree
/// `≤ K` in each variable at least `a`, with arbitrary values below.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedPoly {
    pub arity: usize,
    pub degree: u32,
    pub threshold: u32,
    pub regions: Vec<Region>,
}

impl ShiftedPoly {
    /// Region containing `α` and the shifted free coordinates.
    fn locate(&self, alpha: &[u32]) -> (&Region, Vec<u32>) {
        let a = self.threshold;
        let free: Vec<usize> = (0..self.arity).filter(|&i| alpha[i] >= a).collect();
        let beta: Vec<u32> = (0..self.arity)
            .filter(|&i| alpha[i] < a)
            .map(|i| alpha[i])
            .collect();
        let region = self
            .regions
            .iter()
            .find(|r| r.free == free && r.beta == beta)
            .expect("regions cover the grid");
        let shifted = free.iter().map(|&i| alpha[i] - a).collect();
        (region, shifted)
    }

    pub fn eval(&self, alpha: &[u32]) -> PiPoly {
        assert_eq!(alpha.len(), self.arity);
        let (region, shifted) = self.locate(alpha);
        region.poly.eval(&shifted)
    }
}

struct Restricted<'a> {
    f: &'a dyn GridFunction,
    free: &'a [usize],
    beta: &'a [u32],
    a: u32,
    n: usize,
}

impl GridFunction for Restricted<'_> {
    fn arity(&self) -> usize {
        self.free.len()
    }

    fn eval(&self, hat: &[u32]) -> PiPoly {
        let mut alpha = vec![0; self.n];
        let mut fi = 0;
        let mut bi = 0;
        for (i, slot) in alpha.iter_mut().enumerate() {
            if fi < self.free.len() && self.free[fi] == i {
                *slot = hat[fi] + self.a;
                fi += 1;
            } else {
                *slot = self.beta[bi];
                bi += 1;
            }
        }
        self.f.eval(&alpha)
    }
}

/// Shifted discrete Taylor expansion: for every `I ⊆ {1..n}` and every
/// `β ∈ [0, a)^{I^c}`, the degree-`K` Taylor polynomial of
/// `α̂ ↦ f(α̂ + a on I, β off I)`.
pub fn shifted_taylor(f: &dyn GridFunction, k: u32, a: u32) -> ShiftedPoly {
    let n = f.arity();
    let mut regions = Vec::new();
    for mask in 0u32..(1 << n) {
        let free: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let fixed = n - free.len();
        if a == 0 && fixed > 0 {
            continue;
        }
        let betas = if fixed == 0 {
            vec![Vec::new()]
        } else {
            box_below(&vec![a - 1; fixed])
        };
        for beta in betas {
            let g = Restricted {
                f,
                free: &free,
                beta: &beta,
                a,
                n,
            };
            let poly = taylor_poly(&g, k);
            regions.push(Region {
                free: free.clone(),
                beta,
                poly,
            });
        }
    }
    ShiftedPoly {
        arity: n,
        degree: k,
        threshold: a,
        regions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::p_k;
    use crate::discrete::{constant, CoeffFunction, FnGrid};
    use crate::qpi::rational;
    use crate::recursion::{fill, CoeffTable, Convention, Signature};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Taylor polynomial by the inductive construction
    /// `f̃^{(K)}(α) = f(0) − Σ_i Σ_{k<α_i} (δ_i f)~^{(K−1)}(0^{i−1}, k, α_{i+1..})`,
    /// evaluated pointwise.
    fn taylor_inductive(f: &dyn GridFunction, k: u32, alpha: &[u32]) -> PiPoly {
        let n = f.arity();
        let mut out = f.eval(&vec![0; n]);
        if k == 0 {
            return out;
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let di = FnGrid::new(n, move |b: &[u32]| delta(f, &e, b).unwrap());
            for kk in 0..alpha[i] {
                let mut p = vec![0; n];
                p[i] = kk;
                p[i + 1..].copy_from_slice(&alpha[i + 1..]);
                out -= &taylor_inductive(&di, k - 1, &p);
            }
        }
        out
    }

    #[test]
    fn reproduces_polynomials() {
        let seven = FnGrid::new(2, |_: &[u32]| PiPoly::from_integer(7));
        let t = taylor_poly(&seven, 0);
        assert_eq!(t.eval(&[4, 9]), PiPoly::from_integer(7));
        assert_eq!(t.degree(), Some(0));
        let p2 = FnGrid::new(1, |a: &[u32]| {
            constant(Rational::from_integer(p_k(2, a[0])))
        });
        let t = taylor_poly(&p2, 2);
        for x in 0..20 {
            assert_eq!(t.eval(&[x]), p2.eval(&[x]));
        }
        let q = FnGrid::new(3, |a: &[u32]| {
            let (x, y, z) = (a[0] as i64, a[1] as i64, a[2] as i64);
            constant(rational(3 * x * y - z * z + 2 * x + 5, 2))
        });
        let t = taylor_poly(&q, 2);
        for a in box_below(&[5, 5, 5]) {
            assert_eq!(t.eval(&a), q.eval(&a));
        }
    }

    #[test]
    fn matches_inductive_construction() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let vals: Vec<i64> = (0..64).map(|_| rng.gen_range(-9..=9)).collect();
            let f = FnGrid::new(2, move |a: &[u32]| {
                let idx = (a[0].min(7) * 8 + a[1].min(7)) as usize;
                PiPoly::from_integer(vals[idx])
            });
            for k in 0..=3 {
                let t = taylor_poly(&f, k);
                for a in box_below(&[4, 4]) {
                    assert_eq!(t.eval(&a), taylor_inductive(&f, k, &a), "k={k} a={a:?}");
                }
            }
        }
        let mut table = CoeffTable::new(Convention::Paper);
        fill(&mut table, 5, 2);
        let c = CoeffFunction::new(Signature::new(2, 1).unwrap(), &table).unwrap();
        let t = taylor_poly(&c, 2);
        for x in 0..6 {
            assert_eq!(t.eval(&[x]), taylor_inductive(&c, 2, &[x]));
        }
    }

    #[test]
    fn shifted_reproduces_below_threshold() {
        let mut table = CoeffTable::new(Convention::Paper);
        fill(&mut table, 6, 3);
        let c = CoeffFunction::new(Signature::new(2, 2).unwrap(), &table).unwrap();
        let s = shifted_taylor(&c, 2, 4);
        for a in box_below(&[3, 3]) {
            assert_eq!(s.eval(&a), c.eval(&a));
        }
        // regions: I = ∅ (16), |I| = 1 (2·4), I = {1,2} (1)
        assert_eq!(s.regions.len(), 25);
    }

    #[test]
    fn shifted_reproduces_its_class() {
        // polynomial of degree ≤ 2 beyond a = 3 in each variable, arbitrary below
        let f = FnGrid::new(2, |a: &[u32]| {
            let part = |x: u32| -> i64 {
                if x >= 3 {
                    let y = x as i64;
                    y * y - 4 * y + 1
                } else {
                    [5, -2, 7][x as usize]
                }
            };
            PiPoly::from_integer(part(a[0]) * 3 + part(a[1]) - 2)
        });
        let s = shifted_taylor(&f, 2, 3);
        for a in box_below(&[12, 12]) {
            assert_eq!(s.eval(&a), f.eval(&a));
        }
    }

    #[test]
    fn zero_threshold_is_plain_taylor() {
        let mut table = CoeffTable::new(Convention::Paper);
        fill(&mut table, 4, 2);
        let c = CoeffFunction::new(Signature::new(1, 2).unwrap(), &table).unwrap();
        let s = shifted_taylor(&c, 3, 0);
        assert_eq!(s.regions.len(), 1);
        assert_eq!(s.regions[0].free, vec![0, 1]);
        assert_eq!(s.regions[0].poly, taylor_poly(&c, 3));
    }
}
