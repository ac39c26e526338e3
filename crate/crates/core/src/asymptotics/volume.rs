use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::qpi::{Interval, PiPoly, Rational};
use crate::recursion::{CoeffTable, Signature};
use crate::{Error, Result};

/// `x^{2k} / (2^{2k} (2k+1)!)` for `k = 0..=kmax`, exactly.
pub fn weights_exact(x: &Rational, kmax: u32) -> Vec<Rational> {
    let x2 = x * x;
    let mut w = vec![Rational::one()];
    for k in 1..=kmax as i64 {
        let d = BigInt::from(4 * (2 * k) * (2 * k + 1));
        let next = &w[k as usize - 1] * &x2 / d;
        w.push(next);
    }
    w
}

/// Enclosures of `x^{2k} / (2^{2k} (2k+1)!)` for `k = 0..=kmax`.
pub fn weights(x: &Interval, kmax: u32, prec: u32) -> Vec<Interval> {
    let x2 = x.sqr(prec);
    let mut w = vec![Interval::one()];
    for k in 1..=kmax as i64 {
        let d = Interval::from_i64(4 * (2 * k) * (2 * k + 1));
        let next = w[k as usize - 1].mul(&x2, prec).div(&d, prec);
        w.push(next);
    }
    w
}

/// Every `α ∈ ℕ₀ⁿ` with `|α| ≤ bound`, lexicographic.
pub fn multi_indices(n: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=budget {
            cur.push(v);
            rec(n, budget - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, bound, &mut Vec::new(), &mut out);
    out
}

fn require(table: &CoeffTable, sig: Signature) -> Result<()> {
    if table.is_complete(sig) {
        Ok(())
    } else {
        Err(Error::MissingTable {
            g: sig.g(),
            n: sig.n(),
        })
    }
}

/// `V_{g,n}` from a filled table.
pub fn vgn(table: &CoeffTable, sig: Signature) -> Result<PiPoly> {
    require(table, sig)?;
    Ok(table.vgn(sig).cloned().unwrap_or_default())
}

/// `V_{g,n}(x)` exactly for rational lengths.
pub fn eval_volume_exact(sig: Signature, x: &[Rational], table: &CoeffTable) -> Result<PiPoly> {
    if x.len() != sig.n() as usize {
        return Err(Error::ArityMismatch {
            expected: sig.n() as usize,
            got: x.len(),
        });
    }
    require(table, sig)?;
    let d = sig.degree_bound();
    let w: Vec<Vec<Rational>> = x.iter().map(|xi| weights_exact(xi, d)).collect();
    let mut out = PiPoly::zero();
    for alpha in multi_indices(x.len(), d) {
        let c = table.get(sig, &alpha).expect("complete signature");
        if c.is_zero() {
            continue;
        }
        let mut r = Rational::one();
        for (i, &a) in alpha.iter().enumerate() {
            r *= &w[i][a as usize];
        }
        if !r.is_zero() {
            out += &c.scale(&r);
        }
    }
    Ok(out)
}

/// Enclosed coefficients of one signature, reused across many evaluation
/// points.
#[derive(Clone, Debug)]
pub struct VolumeEvaluator {
    signature: Signature,
    prec: u32,
    terms: Vec<(Vec<u32>, Interval)>,
    vgn: Interval,
}

impl VolumeEvaluator {
    pub fn new(sig: Signature, table: &CoeffTable, prec: u32) -> Result<Self> {
        require(table, sig)?;
        let wp = prec + 16;
        let terms = multi_indices(sig.n() as usize, sig.degree_bound())
            .into_iter()
            .filter_map(|a| {
                let c = table.get(sig, &a)?;
                (!c.is_zero()).then(|| {
                    let v = c.enclose(wp);
                    (a, v)
                })
            })
            .collect();
        let vgn = table.vgn(sig).expect("complete signature").enclose(wp);
        Ok(Self {
            signature: sig,
            prec,
            terms,
            vgn,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn vgn(&self) -> &Interval {
        &self.vgn
    }

    /// Enclosure of `V_{g,n}(x)`.
    pub fn eval(&self, x: &[Interval]) -> Result<Interval> {
        let n = self.signature.n() as usize;
        if x.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let wp = self.prec + 16;
        let d = self.signature.degree_bound();
        let w: Vec<Vec<Interval>> = x.iter().map(|xi| weights(xi, d, wp)).collect();
        let mut acc = Interval::zero();
        for (alpha, c) in &self.terms {
            let mut t = c.clone();
            for (i, &a) in alpha.iter().enumerate() {
                t = t.mul(&w[i][a as usize], wp);
            }
            acc = acc.add(&t, wp);
        }
        Ok(acc)
    }

    /// Enclosure of `V_{g,n}(x) / V_{g,n}`.
    pub fn ratio(&self, x: &[Interval]) -> Result<Interval> {
        Ok(self.eval(x)?.div(&self.vgn, self.prec + 16))
    }
}

/// Enclosure of `V_{g,n}(x)` at `prec` bits.
pub fn eval_volume(
    sig: Signature,
    x: &[Interval],
    table: &CoeffTable,
    prec: u32,
) -> Result<Interval> {
    VolumeEvaluator::new(sig, table, prec)?.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpi::rational;
    use crate::recursion::{fill, Convention};

    fn table() -> CoeffTable {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 4, 4);
        t
    }

    #[test]
    fn exact_values() {
        let t = table();
        let s11 = Signature::new(1, 1).unwrap();
        assert_eq!(
            eval_volume_exact(s11, &[rational(0, 1)], &t).unwrap(),
            PiPoly::monomial(rational(1, 6), 1)
        );
        let s04 = Signature::new(0, 4).unwrap();
        let ones = vec![rational(1, 1); 4];
        assert_eq!(
            eval_volume_exact(s04, &ones, &t).unwrap().to_string(),
            "2*pi^2 + 2"
        );
        let s03 = Signature::new(0, 3).unwrap();
        let x = vec![rational(3, 2), rational(7, 1), rational(0, 1)];
        assert_eq!(eval_volume_exact(s03, &x, &t).unwrap(), PiPoly::one());
    }

    #[test]
    fn numeric_values() {
        let t = table();
        let s11 = Signature::new(1, 1).unwrap();
        let v = eval_volume(s11, &[Interval::from_i64(2)], &t, 128).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 6.0 + 1.0 / 6.0;
        assert!((v.mid_f64() - expect).abs() < 1e-14);
        let s04 = Signature::new(0, 4).unwrap();
        let v = eval_volume(s04, &vec![Interval::zero(); 4], &t, 128).unwrap();
        assert!((v.mid_f64() - 19.739208802178716).abs() < 1e-12);
    }

    #[test]
    fn numeric_encloses_exact() {
        let t = table();
        let s = Signature::new(1, 3).unwrap();
        let xs = [rational(1, 3), rational(5, 2), rational(2, 1)];
        let exact = eval_volume_exact(s, &xs, &t).unwrap().enclose(200);
        let iv: Vec<Interval> = xs.iter().map(|r| Interval::from_rational(r, 200)).collect();
        let num = eval_volume(s, &iv, &t, 128).unwrap();
        assert!(num.contains(exact.lo()) && num.contains(exact.hi()));
        assert!(num.width() < crate::qpi::Dyadic::pow2(-100));
    }

    #[test]
    fn missing_table_is_reported() {
        let t = CoeffTable::default();
        let s = Signature::new(2, 2).unwrap();
        assert!(matches!(
            eval_volume_exact(s, &[rational(0, 1), rational(0, 1)], &t),
            Err(Error::MissingTable { g: 2, n: 2 })
        ));
    }
}
