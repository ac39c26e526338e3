//! Discrete derivatives, discrete integration and (shifted) discrete Taylor
//! expansion on `ℕ₀ⁿ`.
//!
//! `δ_i v(α) = v(α) − v(α + e_i)` and `δ^m = Π δ_i^{m_i}`.

mod approximant;
mod stat;
mod taylor;

pub use approximant::{build_fn, Approximant, EnclosedApproximant, Factor, Term};
pub use stat::{derivative_bound_stat, DerivativeReport, DerivativeRow};
pub use taylor::{binomial, shifted_taylor, taylor_poly, NewtonPoly, Region, ShiftedPoly};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::qpi::{PiPoly, Rational};
use crate::recursion::{CoeffTable, Signature};
use crate::{Error, Result};

/// An exact function on `ℕ₀ⁿ`.
pub trait GridFunction {
    fn arity(&self) -> usize;
    fn eval(&self, alpha: &[u32]) -> PiPoly;
}

/// `α ↦ c_{g,n}(α)` from a filled table, zero beyond the degree bound.
pub struct CoeffFunction<'a> {
    sig: Signature,
    table: &'a CoeffTable,
}

impl<'a> CoeffFunction<'a> {
    pub fn new(sig: Signature, table: &'a CoeffTable) -> Result<Self> {
        if !table.is_complete(sig) {
            return Err(Error::MissingTable {
                g: sig.g(),
                n: sig.n(),
            });
        }
        Ok(Self { sig, table })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }
}

impl GridFunction for CoeffFunction<'_> {
    fn arity(&self) -> usize {
        self.sig.n() as usize
    }

    fn eval(&self, alpha: &[u32]) -> PiPoly {
        self.table.get(self.sig, alpha).cloned().unwrap_or_default()
    }
}

/// A grid function given by a closure.
pub struct FnGrid<F> {
    arity: usize,
    f: F,
}

impl<F: Fn(&[u32]) -> PiPoly> FnGrid<F> {
    pub fn new(arity: usize, f: F) -> Self {
        Self { arity, f }
    }
}

impl<F: Fn(&[u32]) -> PiPoly> GridFunction for FnGrid<F> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, alpha: &[u32]) -> PiPoly {
        (self.f)(alpha)
    }
}

fn check_arity(f: &dyn GridFunction, len: usize) -> Result<()> {
    if f.arity() == len {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            expected: f.arity(),
            got: len,
        })
    }
}

/// Every `β` with `0 ≤ β ≤ m` entrywise, lexicographic.
fn box_below(m: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(m.len())];
    for &mi in m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=mi).map(move |b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
    }
    out
}

/// `δ^m f(α) = Σ_{0≤β≤m} (−1)^{|β|} C(m, β) f(α + β)`.
pub fn delta(f: &dyn GridFunction, m: &[u32], alpha: &[u32]) -> Result<PiPoly> {
    check_arity(f, m.len())?;
    check_arity(f, alpha.len())?;
    let mut out = PiPoly::zero();
    let mut point = alpha.to_vec();
    for beta in box_below(m) {
        let mut w = BigInt::from(1);
        for (i, &b) in beta.iter().enumerate() {
            w *= binomial(m[i] as i64, b);
            point[i] = alpha[i] + b;
        }
        if beta.iter().sum::<u32>() % 2 == 1 {
            w = -w;
        }
        let v = f.eval(&point);
        if !v.is_zero() {
            out += &v.scale(&Rational::from_integer(w));
        }
    }
    Ok(out)
}

/// Both sides of `v(α) = v(0) − Σ_i Σ_{k<α_i} δ_i v(0^{i−1}, k, α_{i+1}, …, α_n)`.
pub fn discrete_integral_identity(f: &dyn GridFunction, alpha: &[u32]) -> Result<(PiPoly, PiPoly)> {
    check_arity(f, alpha.len())?;
    let n = alpha.len();
    let lhs = f.eval(alpha);
    let mut rhs = f.eval(&vec![0; n]);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        for k in 0..alpha[i] {
            let mut point = vec![0; n];
            point[i] = k;
            point[i + 1..].copy_from_slice(&alpha[i + 1..]);
            rhs -= &delta(f, &e, &point)?;
        }
    }
    Ok((lhs, rhs))
}

/// Both sides of the derivative rule for `v_k = Σ_{k1+k2=k} c(k1, k2)`:
/// `δ^m v_k = Σ_{k1≥k2} δ₁^m c + Σ_{k1<k2} δ₂^m c − Σ_{m1+m2=m−1} δ₁^{m1} δ₂^{m2} c(⌊(k+1)/2⌋, ⌊k/2⌋+1)`.
pub fn conv_derivative_identity(
    c: &dyn Fn(u32, u32) -> PiPoly,
    m: u32,
    k: u32,
) -> Result<(PiPoly, PiPoly)> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "derivative order m must be >= 1".into(),
        ));
    }
    let grid = FnGrid::new(2, |a: &[u32]| c(a[0], a[1]));
    let v = FnGrid::new(1, |a: &[u32]| {
        let mut s = PiPoly::zero();
        for k1 in 0..=a[0] {
            s += &c(k1, a[0] - k1);
        }
        s
    });
    let lhs = delta(&v, &[m], &[k])?;
    let mut rhs = PiPoly::zero();
    for k1 in 0..=k {
        let k2 = k - k1;
        let dir = if k1 >= k2 { [m, 0] } else { [0, m] };
        rhs += &delta(&grid, &dir, &[k1, k2])?;
    }
    let corner = [k.div_ceil(2), k / 2 + 1];
    for m1 in 0..m {
        rhs -= &delta(&grid, &[m1, m - 1 - m1], &corner)?;
    }
    Ok((lhs, rhs))
}

/// Rational-valued helper for synthetic grid functions.
pub fn constant(r: Rational) -> PiPoly {
    if r.is_zero() {
        PiPoly::zero()
    } else {
        PiPoly::constant(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpi::rational;
    use crate::recursion::{fill, Convention};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// `δ^m` by repeated single-coordinate differences.
    fn delta_iterated(f: &dyn GridFunction, m: &[u32], alpha: &[u32]) -> PiPoly {
        if let Some(i) = m.iter().position(|&v| v > 0) {
            let mut m2 = m.to_vec();
            m2[i] -= 1;
            let mut next = alpha.to_vec();
            next[i] += 1;
            delta_iterated(f, &m2, alpha) - delta_iterated(f, &m2, &next)
        } else {
            f.eval(alpha)
        }
    }

    fn random_box(rng: &mut StdRng, n: usize, side: u32) -> impl Fn(&[u32]) -> PiPoly {
        let mut vals = std::collections::HashMap::new();
        for a in box_below(&vec![side - 1; n]) {
            let r = rational(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            vals.insert(a, constant(r));
        }
        move |a: &[u32]| vals.get(a).cloned().unwrap_or_default()
    }

    #[test]
    fn delta_examples() {
        let seven = FnGrid::new(3, |_: &[u32]| PiPoly::from_integer(7));
        assert!(delta(&seven, &[1, 0, 2], &[3, 1, 4]).unwrap().is_zero());
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 2, 4);
        let c = CoeffFunction::new(Signature::new(0, 4).unwrap(), &t).unwrap();
        let d = delta(&c, &[1, 0, 0, 0], &[0, 0, 0, 0]).unwrap();
        assert_eq!(d.to_string(), "2*pi^2 - 12");
    }

    #[test]
    fn delta_matches_iteration_and_commutes() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let f = FnGrid::new(3, random_box(&mut rng, 3, 6));
            let m: Vec<u32> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let a: Vec<u32> = (0..3).map(|_| rng.gen_range(0..4)).collect();
            assert_eq!(delta(&f, &m, &a).unwrap(), delta_iterated(&f, &m, &a));
            let d01 = FnGrid::new(3, |b: &[u32]| delta(&f, &[1, 0, 0], b).unwrap());
            let d10 = FnGrid::new(3, |b: &[u32]| delta(&f, &[0, 1, 0], b).unwrap());
            assert_eq!(
                delta(&d01, &[0, 1, 0], &a).unwrap(),
                delta(&d10, &[1, 0, 0], &a).unwrap()
            );
        }
    }

    #[test]
    fn integral_identity_on_coefficients() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 3, 3);
        let c = CoeffFunction::new(Signature::new(1, 2).unwrap(), &t).unwrap();
        let (l, r) = discrete_integral_identity(&c, &[2, 1]).unwrap();
        assert_eq!(l, r);
        let (l, r) = discrete_integral_identity(&c, &[0, 0]).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn conv_identity_single_point() {
        let c = |a: u32, b: u32| {
            if (a, b) == (2, 1) {
                PiPoly::from_integer(5)
            } else {
                PiPoly::zero()
            }
        };
        for k in 0..6 {
            let (l, r) = conv_derivative_identity(&c, 1, k).unwrap();
            assert_eq!(l, r, "k={k}");
        }
        assert!(conv_derivative_identity(&c, 0, 1).is_err());
    }
}
