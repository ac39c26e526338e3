//! Residual statistics and check suites.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::asymptotics::{f0, f1, f1_approx, multi_indices, vgn, VolumeEvaluator};
use crate::discrete::{
    build_fn, conv_derivative_identity, derivative_bound_stat, discrete_integral_identity,
    shifted_taylor, CoeffFunction, FnGrid, GridFunction,
};
use crate::qpi::{compare, decide_sign, pi, rational, u, Interval, PiPoly, Rational};
use crate::recursion::{sorted_keys, CoeffTable, Recursion, Signature};
use crate::{Error, Result};

/// A bounded-trend verdict may grow at most by this factor over its reference.
pub const TREND_FACTOR: f64 = 2.0;

/// Per-coordinate residual grid; the zero vector is added separately.
pub const GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

pub const CSV_HEADER: &str = "g,n,x,exact_ratio,F0,F1,FN,R0,R1,RN";

/// Bounded-trend verdict for a per-genus statistic: the maximum over `g`
/// may not exceed [`TREND_FACTOR`] times the value at the reference genus,
/// the smallest `g` with a value.
#[derive(Clone, Debug, PartialEq)]
pub struct Trend {
    pub reference_g: u32,
    pub reference: f64,
    pub max_g: u32,
    pub max: f64,
    pub bounded: bool,
}

impl Trend {
    pub fn from_series(series: &[(u32, f64)]) -> Option<Self> {
        let &(reference_g, reference) = series.iter().min_by_key(|(g, _)| *g)?;
        let &(max_g, max) = series
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))?;
        Some(Self {
            reference_g,
            reference,
            max_g,
            max,
            bounded: max.is_finite() && max <= TREND_FACTOR * reference,
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "sup at g={} is {:.6e}, max at g={} is {:.6e}",
            self.reference_g, self.reference, self.max_g, self.max
        )
    }
}

/// The zero vector followed by `GRID^n` in lexicographic order.
pub fn grid_points(n: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    pts.insert(0, vec![0.0; n]);
    pts
}

/// One grid point of the residual table.
#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub g: u32,
    pub n: u32,
    pub x: Vec<f64>,
    pub exact_ratio: Interval,
    pub f0: Interval,
    pub f1: Interval,
    pub fn_: Interval,
    /// `None` at `x = 0`, where the normalization divides by `|x|`.
    pub r0: Option<Interval>,
    pub r1: Interval,
    pub rn: Interval,
}

/// Residuals of `V_{g,n}(x)/V_{g,n}` against `F⁰`, `F¹` and `F^{(N)}`:
///
/// * `R0 = |ratio − F⁰| ⟨g⟩ / (|x| e^{|x|/2})`
/// * `R1 = |ratio − F¹| ⟨g⟩² / (⟨|x|⟩³ e^{|x|/2})`
/// * `RN = |ratio − F^{(N)}| ⟨g⟩^{N+1} / (⟨|x|⟩^{3N+1} e^{|x|/2})`
///
/// with `|x| = Σ x_i`.
pub fn residual_rows(
    sig: Signature,
    table: &CoeffTable,
    order: u32,
    a: u32,
    points: &[Vec<f64>],
    prec: u32,
) -> Result<Vec<ResidualRow>> {
    let wp = prec + 16;
    let ev = VolumeEvaluator::new(sig, table, wp)?;
    let approx = build_fn(sig, order, a, table)?;
    let approx = approx.enclose(wp);
    let jg = Interval::from_i64(sig.g() as i64).japanese(wp);
    points
        .par_iter()
        .map(|x| {
            let xs: Vec<Interval> = x.iter().map(|&v| Interval::from_f64(v)).collect();
            let ratio = ev.ratio(&xs)?;
            let v0 = f0(&xs, wp);
            let v1 = f1_approx(sig, &xs, table, wp)?;
            let vn = approx.eval(&xs)?;
            let sum = xs.iter().fold(Interval::zero(), |acc, v| acc.add(v, wp));
            let e = sum.mul_pow2(-1).exp(wp);
            let jx = sum.japanese(wp);
            let r0 = (!sum.is_zero_point()).then(|| {
                ratio
                    .sub(&v0, wp)
                    .abs()
                    .mul(&jg, wp)
                    .div(&sum.mul(&e, wp), wp)
            });
            let r1 = ratio
                .sub(&v1, wp)
                .abs()
                .mul(&jg.powi(2, wp), wp)
                .div(&jx.powi(3, wp).mul(&e, wp), wp);
            let rn = ratio
                .sub(&vn, wp)
                .abs()
                .mul(&jg.powi(order + 1, wp), wp)
                .div(&jx.powi(3 * order + 1, wp).mul(&e, wp), wp);
            Ok(ResidualRow {
                g: sig.g(),
                n: sig.n(),
                x: x.clone(),
                exact_ratio: ratio,
                f0: v0,
                f1: v1,
                fn_: vn,
                r0,
                r1,
                rn,
            })
        })
        .collect()
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.15e}")
}

/// CSV with [`CSV_HEADER`]; `x` is `;`-separated, values are interval
/// midpoints and `R0` is empty at `x = 0`.
pub fn residuals_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let x: Vec<String> = r.x.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.g,
            r.n,
            x.join(";"),
            fmt_f64(r.exact_ratio.mid_f64()),
            fmt_f64(r.f0.mid_f64()),
            fmt_f64(r.f1.mid_f64()),
            fmt_f64(r.fn_.mid_f64()),
            r.r0.as_ref()
                .map(|v| fmt_f64(v.mid_f64()))
                .unwrap_or_default(),
            fmt_f64(r.r1.mid_f64()),
            fmt_f64(r.rn.mid_f64()),
        );
    }
    out
}

/// Sups over the grid of `R0`, `R1`, `RN` for one genus (upper endpoints).
#[derive(Clone, Debug)]
pub struct ResidualSup {
    pub g: u32,
    pub r0: f64,
    pub r1: f64,
    pub rn: f64,
}

pub fn residual_sup(rows: &[ResidualRow]) -> Option<ResidualSup> {
    let first = rows.first()?;
    let up = |v: &Interval| v.hi().to_f64();
    Some(ResidualSup {
        g: first.g,
        r0: rows
            .iter()
            .filter_map(|r| r.r0.as_ref().map(up))
            .fold(0.0, f64::max),
        r1: rows.iter().map(|r| up(&r.r1)).fold(0.0, f64::max),
        rn: rows.iter().map(|r| up(&r.rn)).fold(0.0, f64::max),
    })
}

/// `|g (V_{g,n}(x)/V_{g,n} − F⁰(x)) − f¹_n(x)|`.
pub fn first_order_gap(
    sig: Signature,
    x: &[f64],
    table: &CoeffTable,
    prec: u32,
) -> Result<Interval> {
    let wp = prec + 16;
    let xs: Vec<Interval> = x.iter().map(|&v| Interval::from_f64(v)).collect();
    let ratio = VolumeEvaluator::new(sig, table, wp)?.ratio(&xs)?;
    let g = Interval::from_i64(sig.g() as i64);
    Ok(ratio
        .sub(&f0(&xs, wp), wp)
        .mul(&g, wp)
        .sub(&f1(&xs, wp), wp)
        .abs())
}

/// `Σ V_{g1,n1+1} V_{g2,n2+1} / (⟨g1⟩^{N1} ⟨g2⟩^{N2}) · ⟨g⟩^{N1+N2+1} / V_{g,n}`
/// over `g1 + g2 = g` with `2g_i + n_i > N_i + 1`; `None` if no split qualifies.
pub fn cut_sum(
    g: u32,
    (n1, n2): (u32, u32),
    (k1, k2): (u32, u32),
    table: &CoeffTable,
    prec: u32,
) -> Result<Option<Interval>> {
    let wp = prec + 16;
    let sig = Signature::checked(g as i64, (n1 + n2) as i64)
        .ok_or(Error::InvalidSignature { g, n: n1 + n2 })?;
    let jap = |h: u32, k: u32| Interval::from_i64(h as i64).japanese(wp).powi(k, wp);
    let mut acc: Option<Interval> = None;
    for g1 in 0..=g {
        let g2 = g - g1;
        if 2 * g1 + n1 <= k1 + 1 || 2 * g2 + n2 <= k2 + 1 {
            continue;
        }
        let s1 = Signature::new(g1, n1 + 1)?;
        let s2 = Signature::new(g2, n2 + 1)?;
        let t = vgn(table, s1)?
            .enclose(wp)
            .mul(&vgn(table, s2)?.enclose(wp), wp)
            .div(&jap(g1, k1).mul(&jap(g2, k2), wp), wp);
        acc = Some(match acc {
            Some(a) => a.add(&t, wp),
            None => t,
        });
    }
    let Some(sum) = acc else {
        return Ok(None);
    };
    let v = vgn(table, sig)?.enclose(wp);
    Ok(Some(sum.mul(&jap(g, k1 + k2 + 1), wp).div(&v, wp)))
}

/// One pass/fail line of a suite.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            lines: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let tag = if l.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {}: {}: {}", self.name, l.label, l.detail);
        }
        out
    }
}

fn first_failure<T: Sync>(
    items: Vec<T>,
    f: impl Fn(&T) -> Option<String> + Sync + Send,
) -> Option<String> {
    items.par_iter().find_map_first(f)
}

/// Exact structural invariants on every complete signature: symmetry (the
/// recursion evaluated at the reversed multi-index reproduces the stored
/// value), homogeneity, positivity, monotone decrease and `c ≤ V_{g,n}`.
pub fn exact_suite(table: &CoeffTable) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("exact");
    let sigs: Vec<Signature> = table.complete_signatures().collect();
    let items: Vec<(Signature, Vec<u32>)> = sigs
        .iter()
        .flat_map(|&s| sorted_keys(s).into_iter().map(move |k| (s, k)))
        .collect();
    let total = items.len();
    let get = |s: Signature, k: &[u32]| table.get(s, k).cloned().unwrap_or_default();

    let rec = Recursion::new(table);
    let sym: Vec<&(Signature, Vec<u32>)> = items
        .iter()
        .filter(|(s, k)| s.euler_abs() >= 2 && k.first() != k.last())
        .collect();
    let sym_count = sym.len();
    let bad = first_failure(sym, |(s, k)| {
        let mut rev = k.clone();
        rev.reverse();
        (rec.recurse(*s, &rev) != get(*s, k)).then(|| format!("{s} {k:?}"))
    });
    rep.push(
        "symmetry",
        bad.is_none(),
        bad.map_or(format!("{sym_count} permuted recomputations agree"), |k| {
            format!("mismatch at {k}")
        }),
    );

    let bad = first_failure(items.iter().collect(), |(s, k)| {
        let c = get(*s, k);
        let want = s.degree_bound() - k.iter().sum::<u32>();
        match c.as_monomial() {
            Some((_, d)) if d == want => None,
            _ => Some(format!("{s} {k:?} = {c}")),
        }
    });
    rep.push(
        "homogeneity",
        bad.is_none(),
        bad.map_or(
            format!("{total} coefficients are monomials of the expected degree"),
            |k| format!("violated at {k}"),
        ),
    );

    let bad = first_failure(items.iter().collect(), |(s, k)| {
        let c = get(*s, k);
        match c.as_monomial() {
            Some((r, _)) if r.is_positive() => None,
            _ => Some(format!("{s} {k:?} = {c}")),
        }
    });
    rep.push(
        "positivity",
        bad.is_none(),
        bad.map_or(format!("{total} coefficients positive"), |k| {
            format!("violated at {k}")
        }),
    );

    let bad = first_failure(items.iter().collect(), |(s, k)| {
        let c = get(*s, k);
        for i in 0..k.len() {
            let mut next = k.clone();
            next[i] += 1;
            let d = get(*s, &next);
            match compare(&c, &d) {
                Ok(Ordering::Less) => return Some(format!("{s} {k:?} < {next:?}")),
                Err(e) => return Some(format!("{s} {k:?}: {e}")),
                _ => {}
            }
        }
        None
    });
    rep.push(
        "monotone decrease",
        bad.is_none(),
        bad.map_or(
            format!("{total} coefficients checked in every direction"),
            |k| format!("violated at {k}"),
        ),
    );

    let bad = first_failure(items.iter().collect(), |(s, k)| {
        let v = get(*s, &vec![0; k.len()]);
        match compare(&get(*s, k), &v) {
            Ok(Ordering::Greater) => Some(format!("{s} {k:?}")),
            Err(e) => Some(format!("{s} {k:?}: {e}")),
            _ => None,
        }
    });
    rep.push(
        "c <= V",
        bad.is_none(),
        bad.map_or(format!("{total} coefficients bounded by V_(g,n)"), |k| {
            format!("violated at {k}")
        }),
    );
    Ok(rep)
}

/// `(2g−2+n) V_{g,n} / V_{g,n+1}` strictly inside
/// `((1 − π²/10)/12, (π cosh π − sinh π)/(2π²))` for every complete pair.
pub fn ratio_suite(table: &CoeffTable, ceiling: u32) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("ratios");
    let lower = PiPoly::from_terms([(0, rational(1, 12)), (1, rational(-1, 120))]);
    let pairs: Vec<(Signature, Signature)> = table
        .complete_signatures()
        .filter_map(|s| {
            let t = Signature::new(s.g(), s.n() + 1).ok()?;
            table.is_complete(t).then_some((s, t))
        })
        .collect();
    let results: Vec<Result<(), String>> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let lhs = vgn(table, s)
                .map_err(|e| e.to_string())?
                .scale(&Rational::from_integer(s.euler_abs().into()));
            let vn1 = vgn(table, t).map_err(|e| e.to_string())?;
            let lo = &lower * &vn1;
            match compare(&lhs, &lo) {
                Ok(Ordering::Greater) => {}
                Ok(_) => return Err(format!("{s}: lower bound violated")),
                Err(e) => return Err(format!("{s}: {e}")),
            }
            let sign = decide_sign(
                |p| {
                    let w = p + 16;
                    let pi_i = pi(w);
                    let up = pi_i
                        .mul(&pi_i.cosh(w), w)
                        .sub(&pi_i.sinh(w), w)
                        .div(&pi_i.sqr(w).mul_pow2(1), w);
                    up.mul(&vn1.enclose(w), w).sub(&lhs.enclose(w), w)
                },
                ceiling,
            );
            match sign {
                Ok(Ordering::Greater) => Ok(()),
                Ok(_) => Err(format!("{s}: upper bound violated")),
                Err(e) => Err(format!("{s}: {e}")),
            }
        })
        .collect();
    let bad: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
    rep.push(
        "cusp ratio bounds",
        bad.is_empty() && !pairs.is_empty(),
        if bad.is_empty() {
            format!("{} pairs strictly inside the bounds", pairs.len())
        } else {
            bad.join("; ")
        },
    );
    Ok(rep)
}

/// `u_i` increasing, `u_i < 1`, and `4^i (u_{i+1} − u_i) ≤ max_{j≤5} 4^j (u_{j+1} − u_j)`
/// for `i ≤ imax`.
pub fn sequence_suite(imax: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("sequence");
    let one = PiPoly::one();
    let mut increasing = true;
    let mut below_one = true;
    for i in 0..=imax {
        increasing &= compare(&u(i), &u(i + 1))? == Ordering::Less;
        below_one &= compare(&u(i), &one)? == Ordering::Less;
    }
    rep.push("u_i increasing", increasing, format!("i <= {imax}"));
    rep.push("u_i < 1", below_one, format!("i <= {imax}"));
    let scaled = |i: usize| {
        (u(i + 1) - u(i)).scale(&Rational::from_integer(
            num_bigint::BigInt::from(4).pow(i as u32),
        ))
    };
    let mut cap = scaled(0);
    for i in 1..=5 {
        let s = scaled(i);
        if compare(&s, &cap)? == Ordering::Greater {
            cap = s;
        }
    }
    let mut ok = true;
    for i in 0..=imax {
        ok &= compare(&scaled(i), &cap)? != Ordering::Greater;
    }
    rep.push(
        "4^i (u_(i+1) - u_i) <= max over i <= 5",
        ok,
        format!("cap {:.6}, checked for i <= {imax}", cap.to_f64()),
    );
    let limit = PiPoly::constant(rational(3, 4));
    let mut below = true;
    for i in 0..=imax {
        below &= compare(&scaled(i), &limit)? == Ordering::Less;
    }
    rep.push(
        "4^i (u_(i+1) - u_i) < 3/4",
        below,
        format!(
            "i <= {imax}, value at i={imax} is {:.12}",
            scaled(imax).to_f64()
        ),
    );
    Ok(rep)
}

fn random_rational(rng: &mut StdRng) -> PiPoly {
    let r = rational(rng.gen_range(-30..=30), rng.gen_range(1..=9));
    if r.is_zero() {
        PiPoly::zero()
    } else {
        PiPoly::constant(r)
    }
}

fn random_box_fn(rng: &mut StdRng, n: usize, side: u32) -> impl Fn(&[u32]) -> PiPoly {
    let vals: std::collections::HashMap<Vec<u32>, PiPoly> = multi_indices(n, side * n as u32)
        .into_iter()
        .filter(|a| a.iter().all(|&v| v < side))
        .map(|a| (a, random_rational(rng)))
        .collect();
    move |a: &[u32]| vals.get(a).cloned().unwrap_or_default()
}

/// The discrete integration and convolution-derivative identities on
/// exhaustive boxes of side 6 with `m ≤ 3`, on `random` seeded random
/// instances each, and on coefficient-backed instances.
pub fn identity_suite(table: &CoeffTable, seed: u64, random: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("identities");
    let mut rng = StdRng::seed_from_u64(seed);
    let side = 6u32;

    let mut checked = 0usize;
    let mut bad = None;
    for n in 1..=3usize {
        let f = FnGrid::new(n, random_box_fn(&mut rng, n, side));
        for alpha in multi_indices(n, side * n as u32) {
            if alpha.iter().any(|&v| v >= side) {
                continue;
            }
            let (l, r) = discrete_integral_identity(&f, &alpha)?;
            checked += 1;
            if l != r && bad.is_none() {
                bad = Some(format!("n={n} {alpha:?}"));
            }
        }
    }
    for _ in 0..random {
        let n = rng.gen_range(1..=4usize);
        let f = FnGrid::new(n, random_box_fn(&mut rng, n, side));
        let alpha: Vec<u32> = (0..n).map(|_| rng.gen_range(0..side + 2)).collect();
        let (l, r) = discrete_integral_identity(&f, &alpha)?;
        checked += 1;
        if l != r && bad.is_none() {
            bad = Some(format!("random n={n} {alpha:?}"));
        }
    }
    let cf: Vec<(Signature, usize)> = table
        .complete_signatures()
        .filter(|s| s.n() <= 3 && s.euler_abs() <= 6)
        .map(|s| (s, s.n() as usize))
        .collect();
    for (s, n) in &cf {
        let f = CoeffFunction::new(*s, table)?;
        for alpha in multi_indices(*n, s.degree_bound() + 1) {
            let (l, r) = discrete_integral_identity(&f, &alpha)?;
            checked += 1;
            if l != r && bad.is_none() {
                bad = Some(format!("{s} {alpha:?}"));
            }
        }
    }
    rep.push(
        "discrete integration",
        bad.is_none(),
        bad.map_or(format!("{checked} instances exact"), |k| {
            format!("fails at {k}")
        }),
    );

    let mut checked = 0usize;
    let mut bad = None;
    let box_fn = random_box_fn(&mut rng, 2, side);
    let c = |a: u32, b: u32| box_fn(&[a, b]);
    for m in 1..=3 {
        for k in 0..=2 * side {
            let (l, r) = conv_derivative_identity(&c, m, k)?;
            checked += 1;
            if l != r && bad.is_none() {
                bad = Some(format!("box m={m} k={k}"));
            }
        }
    }
    for _ in 0..random {
        let inst = random_box_fn(&mut rng, 2, side);
        let c = |a: u32, b: u32| inst(&[a, b]);
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(0..=2 * side);
        let (l, r) = conv_derivative_identity(&c, m, k)?;
        checked += 1;
        if l != r && bad.is_none() {
            bad = Some(format!("random m={m} k={k}"));
        }
    }
    // products of coefficients, as in the separating term of the recursion
    let pairs = [((1, 2), (2, 2)), ((0, 4), (1, 3)), ((1, 1), (0, 3))];
    for ((g1, n1), (g2, n2)) in pairs {
        let (Ok(s1), Ok(s2)) = (Signature::new(g1, n1), Signature::new(g2, n2)) else {
            continue;
        };
        if !table.is_complete(s1) || !table.is_complete(s2) {
            continue;
        }
        let c = |a: u32, b: u32| {
            let mut k1 = vec![0; n1 as usize];
            k1[0] = a;
            let mut k2 = vec![1; n2 as usize];
            k2[0] = b;
            let x = table.get(s1, &k1).cloned().unwrap_or_default();
            let y = table.get(s2, &k2).cloned().unwrap_or_default();
            &x * &y
        };
        let kmax = s1.degree_bound() + s2.degree_bound() + 2;
        for m in 1..=3 {
            for k in 0..=kmax {
                let (l, r) = conv_derivative_identity(&c, m, k)?;
                checked += 1;
                if l != r && bad.is_none() {
                    bad = Some(format!("{s1}x{s2} m={m} k={k}"));
                }
            }
        }
    }
    rep.push(
        "convolution derivative",
        bad.is_none(),
        bad.map_or(format!("{checked} instances exact"), |k| {
            format!("fails at {k}")
        }),
    );
    Ok(rep)
}

/// Parameters shared by the asymptotic suites.
#[derive(Clone, Debug)]
pub struct AsymptoticConfig {
    pub ns: Vec<u32>,
    pub g_min: u32,
    pub g_max: u32,
    pub order: u32,
    pub threshold: u32,
    pub prec: u32,
}

impl Default for AsymptoticConfig {
    fn default() -> Self {
        Self {
            ns: vec![1, 2],
            g_min: 2,
            g_max: 8,
            order: 1,
            threshold: 4,
            prec: 128,
        }
    }
}

/// Every signature the residual suite reads.
pub fn residual_signatures(cfg: &AsymptoticConfig) -> Vec<Signature> {
    let mut out = Vec::new();
    for &n in &cfg.ns {
        for g in cfg.g_min..=cfg.g_max {
            for (dg, dn) in [(0, 0), (-1, 1), (0, -1)] {
                if let Some(s) = Signature::checked(g as i64 + dg, n as i64 + dn) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Trend verdicts of `R0`, `R1`, `RN` per `n`, and exactness of `F^{(N)}`
/// at the origin.
pub fn residual_suite(table: &CoeffTable, cfg: &AsymptoticConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("residuals");
    for &n in &cfg.ns {
        let pts = grid_points(n as usize, &GRID);
        let mut sups = Vec::new();
        let mut origin_ok = true;
        let mut shift_ok = true;
        let mut degree_ok = true;
        for g in cfg.g_min..=cfg.g_max {
            let sig = Signature::new(g, n)?;
            let rows = residual_rows(sig, table, cfg.order, cfg.threshold, &pts, cfg.prec)?;
            let at0 = &rows[0];
            let one = crate::qpi::Dyadic::from_i64(1);
            origin_ok &=
                at0.exact_ratio.contains(&one) && at0.f0.contains(&one) && at0.f1.contains(&one);
            let approx = build_fn(sig, cfg.order, cfg.threshold, table)?;
            origin_ok &= approx.is_one_at_zero();
            degree_ok &= approx.factored_degree() <= 2 * cfg.order;
            let c = CoeffFunction::new(sig, table)?;
            let s = shifted_taylor(&c, 2 * cfg.order, cfg.threshold);
            for alpha in multi_indices(n as usize, (cfg.threshold.max(1) - 1) * n) {
                if alpha.iter().all(|&v| v < cfg.threshold) {
                    shift_ok &= s.eval(&alpha) == c.eval(&alpha);
                }
            }
            sups.push(residual_sup(&rows).expect("non-empty grid"));
        }
        rep.push(
            format!("n={n} values at x=0"),
            origin_ok,
            "V(0)/V, F0, F1 enclose 1 and F^(N)(0) = 1 exactly",
        );
        rep.push(
            format!("n={n} F^(N) structure"),
            shift_ok && degree_ok,
            format!(
                "N={}, a={}: c~ = c below a, cosh/sinhc degree <= {}",
                cfg.order,
                cfg.threshold,
                2 * cfg.order
            ),
        );
        let finite = sups
            .iter()
            .all(|s| s.r0.is_finite() && s.r1.is_finite() && s.rn.is_finite());
        let series = |f: fn(&ResidualSup) -> f64| -> Vec<(u32, f64)> {
            sups.iter().map(|s| (s.g, f(s))).collect()
        };
        for (label, ser) in [
            ("R0", series(|s| s.r0)),
            ("R1", series(|s| s.r1)),
            ("RN", series(|s| s.rn)),
        ] {
            let t = Trend::from_series(&ser).expect("non-empty range");
            rep.push(
                format!("n={n} {label} trend"),
                finite && t.bounded,
                t.summary(),
            );
        }
    }
    Ok(rep)
}

/// `|g (ratio − F⁰) − f¹|` at `x` for each `g`, and whether it strictly
/// decreases.
pub fn gap_sequence(
    n: u32,
    x: &[f64],
    gs: std::ops::RangeInclusive<u32>,
    table: &CoeffTable,
    prec: u32,
) -> Result<(Vec<(u32, Interval)>, bool)> {
    let vals: Vec<(u32, Interval)> = gs
        .map(|g| {
            let sig = Signature::new(g, n)?;
            Ok((g, first_order_gap(sig, x, table, prec)?))
        })
        .collect::<Result<_>>()?;
    let decreasing = vals.windows(2).all(|w| w[1].1.hi() < w[0].1.lo());
    Ok((vals, decreasing))
}

/// Bounded-trend verdicts of the derivative statistic for each `n`,
/// `N ∈ orders` and `a ∈ {2N, 2N+2, 2N+4}`, plus `sup ≤ 1` at `N = 0`.
pub fn derivative_suite(
    table: &CoeffTable,
    ns: &[u32],
    orders: &[u32],
    g_min: u32,
    g_max: u32,
    prec: u32,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("derivative");
    for &n in ns {
        let r = derivative_bound_stat(n, 0, 0, g_min..=g_max, table, prec)?;
        let max = r
            .rows
            .iter()
            .filter_map(|row| row.sup.as_ref())
            .map(|s| s.mid_f64())
            .fold(0.0, f64::max);
        // the N = 0 statistic is c(α)/V_{g,n}; decide ≤ 1 exactly
        let mut exact = true;
        for g in g_min..=g_max {
            let Some(sig) = Signature::checked(g as i64, n as i64) else {
                continue;
            };
            let f = CoeffFunction::new(sig, table)?;
            let v = vgn(table, sig)?;
            for alpha in multi_indices(n as usize, sig.degree_bound() + 1) {
                exact &= compare(&f.eval(&alpha), &v)? != Ordering::Greater;
            }
        }
        rep.push(
            format!("n={n} N=0 sup <= 1"),
            exact,
            format!("max {max:.6}, decided exactly"),
        );
        for &order in orders {
            for a in [2 * order, 2 * order + 2, 2 * order + 4] {
                let label = format!("n={n} N={order} a={a}");
                match derivative_bound_stat(n, order, a, g_min..=g_max, table, prec) {
                    Ok(r) => rep.push(label, r.trend.bounded, r.trend.summary()),
                    Err(Error::EmptyAdmissibleSet(msg)) => rep.push(label, false, msg),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(rep)
}

/// Every signature the cut-sum suite reads.
pub fn cut_signatures(ns: &[u32], g_max: u32) -> Vec<Signature> {
    let mut out = Vec::new();
    for &n in ns {
        for g in 0..=g_max {
            for m in [n, 1, 2, 3].into_iter().filter(|&m| m <= n + 1) {
                if let Some(s) = Signature::checked(g as i64, m as i64) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Bounded-trend verdicts of [`cut_sum`] for `n ∈ ns`, all `n1 + n2 = n`
/// with `n1 ≤ n2`, and `N1, N2 ≤ kmax`, over `g_min..=g_max`.
pub fn cut_suite(
    table: &CoeffTable,
    ns: &[u32],
    kmax: u32,
    g_min: u32,
    g_max: u32,
    prec: u32,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cuts");
    for &n in ns {
        for n1 in 0..=n / 2 {
            let n2 = n - n1;
            for k1 in 0..=kmax {
                for k2 in 0..=kmax {
                    let mut series = Vec::new();
                    for g in g_min..=g_max {
                        if let Some(v) = cut_sum(g, (n1, n2), (k1, k2), table, prec)? {
                            series.push((g, v.hi().to_f64()));
                        }
                    }
                    let label = format!("n={n} ({n1},{n2}) N=({k1},{k2})");
                    match Trend::from_series(&series) {
                        Some(t) => rep.push(label, t.bounded, t.summary()),
                        None => rep.push(label, false, "no admissible split in range"),
                    }
                }
            }
        }
    }
    Ok(rep)
}

trait IntervalExt {
    fn is_zero_point(&self) -> bool;
}

impl IntervalExt for Interval {
    fn is_zero_point(&self) -> bool {
        self.lo().is_zero() && self.hi().is_zero()
    }
}
