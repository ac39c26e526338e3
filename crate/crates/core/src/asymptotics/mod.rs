//! Volume evaluation and the explicit large-genus approximants.

mod second_order;
mod volume;

pub use second_order::{c_hat1, f0, f1, f1_approx, p_k, psi1};
pub use volume::{
    eval_volume, eval_volume_exact, multi_indices, vgn, weights, weights_exact, VolumeEvaluator,
};

use crate::qpi::{Dyadic, Interval};
use crate::{Error, Result};

/// `sinh(x)/x`, with value 1 at 0.
pub fn sinhc(x: f64) -> f64 {
    let x = x.abs();
    if x < 0.5 {
        // Σ x^{2k}/(2k+1)!, terms shrink by at least 1/24
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > f64::EPSILON * 1e-3 {
            term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        x.sinh() / x
    }
}

/// Truncated generating sum `Σ_{α≤T} p_k(α) x^{2α} / (2^{2α}(2α+1)!)`.
pub fn pk_generating_sum(k: u32, x: &Interval, truncation: u32, prec: u32) -> Interval {
    let wp = prec + 16;
    let w = weights(x, truncation, wp);
    let mut acc = Interval::zero();
    for (alpha, wa) in w.iter().enumerate() {
        let p = p_k(k, alpha as u32);
        let t = wa.mul_rational(&crate::qpi::Rational::from_integer(p), wp);
        acc = acc.add(&t, wp);
    }
    acc
}

/// `(x/2)^k sinhc(x/2)` for even `k`, `(x/2)^{k−1} cosh(x/2)` for odd `k`.
pub fn pk_closed_form(k: u32, x: &Interval, prec: u32) -> Interval {
    let wp = prec + 16;
    let h = x.mul_pow2(-1);
    if k.is_multiple_of(2) {
        h.powi(k, wp).mul(&h.sinhc(wp), wp)
    } else {
        h.powi(k - 1, wp).mul(&h.cosh(wp), wp)
    }
}

/// `λ_{a,b} = ∫_a^b (2/x) sinh²(x/2) dx = Σ_{k≥1} (b^{2k} − a^{2k}) / (2k·(2k)!)`,
/// enclosed with the series tail bound; the enclosure width is the error
/// bound.
pub fn lambda_intensity(a: f64, b: f64, prec: u32) -> Result<Interval> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && a <= b) {
        return Err(Error::InvalidInterval {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    if a == b {
        return Ok(Interval::zero());
    }
    let wp = prec + 32;
    let a2 = Interval::from_f64(a).sqr(wp);
    let b2 = Interval::from_f64(b).sqr(wp);
    let eps = Dyadic::pow2(-(wp as i64));
    // pa, pb hold x^{2k}/(2k)!
    let mut pa = Interval::one();
    let mut pb = Interval::one();
    let mut sum = Interval::zero();
    let mut k: i64 = 1;
    loop {
        let d = Interval::from_i64((2 * k - 1) * (2 * k));
        pa = pa.mul(&a2, wp).div(&d, wp);
        pb = pb.mul(&b2, wp).div(&d, wp);
        let tb = pb.div(&Interval::from_i64(2 * k), wp);
        let ta = pa.div(&Interval::from_i64(2 * k), wp);
        sum = sum.add(&tb.sub(&ta, wp), wp);
        // successive b-terms shrink by b²/((2k+1)(2k+2)) ≤ 1/2 here, so the
        // remaining difference lies in [0, tb]
        let shrink = (2 * k + 1) * (2 * k + 2);
        if tb.hi() < &eps && b * b <= shrink as f64 / 2.0 {
            let tail = Interval::new(Dyadic::zero(), tb.hi().clone());
            return Ok(sum.add(&tail, wp));
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinhc_values() {
        assert_eq!(sinhc(0.0), 1.0);
        assert!((sinhc(1.0) - 1.1752011936438014).abs() < 1e-15);
        assert_eq!(sinhc(-0.3), sinhc(0.3));
        for x in [1e-8, 1e-3, 0.1, 0.49, 0.5, 0.51, 3.0] {
            let exact = Interval::from_f64(x).sinhc(128).mid_f64();
            assert!(
                ((sinhc(x) - exact) / exact).abs() <= 4.0 * f64::EPSILON,
                "x={x}"
            );
        }
    }

    #[test]
    fn generating_sums() {
        let two = Interval::from_i64(2);
        let v = pk_generating_sum(0, &two, 40, 128);
        let sinh1 = Interval::one().sinh(128);
        assert!(v.sub(&sinh1, 128).abs().hi() < &Dyadic::pow2(-100));
        assert_eq!(
            pk_generating_sum(1, &Interval::zero(), 10, 128),
            Interval::one()
        );
        let v = pk_generating_sum(3, &Interval::one(), 60, 128);
        let c = pk_closed_form(3, &Interval::one(), 128);
        assert!(v.sub(&c, 128).abs().hi() < &Dyadic::pow2(-100));
        assert!((c.mid_f64() - 0.25 * 0.5f64.cosh()).abs() < 1e-15);
    }

    /// Gauss–Legendre rule on `[a, b]` with `m` nodes, nodes by Newton
    /// iteration on `P_m`.
    fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let mut s = 0.0;
        for i in 1..=m {
            let mut z = (std::f64::consts::PI * (i as f64 - 0.25) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=m {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            let x = 0.5 * (b - a) * z + 0.5 * (a + b);
            s += w * f(x);
        }
        0.5 * (b - a) * s
    }

    #[test]
    fn lambda_matches_quadrature() {
        let integrand = |x: f64| 2.0 / x * (x / 2.0).sinh().powi(2);
        for (a, b) in [(1.0, 2.0), (0.25, 8.0), (3.0, 3.5), (0.5, 12.0)] {
            let series = lambda_intensity(a, b, 128).unwrap();
            assert!(series.width() < Dyadic::pow2(-100));
            let quad = gauss_legendre(integrand, a, b, 40);
            let v = series.mid_f64();
            assert!(((v - quad) / v).abs() < 1e-12, "({a},{b}): {v} vs {quad}");
        }
    }

    #[test]
    fn lambda_edges() {
        assert_eq!(lambda_intensity(1.0, 1.0, 128).unwrap(), Interval::zero());
        assert!(lambda_intensity(2.0, 1.0, 128).is_err());
        assert!(lambda_intensity(0.0, 1.0, 128).is_err());
        let mut last = 0.0;
        for b in [1.5, 2.0, 4.0, 9.0] {
            let v = lambda_intensity(1.0, b, 128).unwrap().mid_f64();
            assert!(v > last);
            last = v;
        }
    }
}
