use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{canonical, CoeffTable, Convention, Signature};
use crate::qpi::{rational, u_rational, PiPoly, Rational};
use crate::{Error, Result};

/// A separating configuration `ι = (g′, I)`: the pants cut off a piece of
/// genus `g1` carrying the boundaries in `subset` (1-based indices in
/// `2..=n`); the other piece has genus `g − g1` and the complement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SepConfig {
    pub g1: u32,
    pub subset: Vec<usize>,
}

/// Coefficients of `V_{g,n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumePolynomial {
    pub signature: Signature,
    pub coeffs: BTreeMap<Vec<u32>, PiPoly>,
}

impl VolumePolynomial {
    pub fn vgn(&self) -> &PiPoly {
        &self.coeffs[&vec![0; self.signature.n() as usize]]
    }

    pub fn coeff(&self, alpha: &[u32]) -> PiPoly {
        self.coeffs
            .get(&canonical(alpha))
            .cloned()
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FillStats {
    pub signatures: usize,
    pub computed: usize,
    pub reused: usize,
}

/// Seed values for `|χ| = 1`, as reported under `convention`.
pub fn base_case(sig: Signature, alpha: &[u32], convention: Convention) -> PiPoly {
    match (sig.g(), sig.n()) {
        (0, 3) if alpha.iter().all(|&a| a == 0) => PiPoly::one(),
        (1, 1) => {
            let scale = match convention {
                Convention::Paper => rational(1, 1),
                Convention::Half => rational(1, 2),
            };
            match alpha[0] {
                0 => PiPoly::monomial(rational(1, 6) * scale, 1),
                1 => PiPoly::constant(scale),
                _ => PiPoly::zero(),
            }
        }
        _ => PiPoly::zero(),
    }
}

/// Number of descending keys `α` of length `n` with `|α| ≤ 3g − 3 + n`.
pub(crate) fn sorted_key_count(sig: Signature) -> usize {
    sorted_keys(sig).len()
}

/// All descending keys of length `n` with `|α| ≤ 3g − 3 + n`, in
/// lexicographic order.
pub fn sorted_keys(sig: Signature) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=cap.min(budget) {
            cur.push(v);
            rec(n, budget - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let d = sig.degree_bound();
    rec(sig.n() as usize, d, d, &mut Vec::new(), &mut out);
    out
}

/// Coefficients of one complete signature as integer numerators over a
/// common denominator, in the normalization the recursion consumes.
#[derive(Debug)]
struct IntView {
    den: BigInt,
    num: HashMap<Vec<u32>, BigInt>,
}

impl IntView {
    fn build(table: &CoeffTable, sig: Signature) -> Self {
        let halve = sig.g() == 1 && sig.n() == 1 && table.convention() == Convention::Paper;
        let vals: Vec<(&Vec<u32>, Rational)> = table
            .signature_entries(sig)
            .into_iter()
            .map(|(k, v)| {
                let r = v.as_monomial().map(|(r, _)| r.clone()).unwrap_or_default();
                (k, if halve { r / BigInt::from(2) } else { r })
            })
            .collect();
        let den = vals
            .iter()
            .fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
        let num = vals
            .into_iter()
            .map(|(k, r)| {
                let scaled = r.numer() * (&den / r.denom());
                (k.clone(), scaled)
            })
            .collect();
        Self { den, num }
    }
}

/// `u_i` for `i ≤ len`, as integer numerators over a common denominator.
#[derive(Debug)]
struct UScale {
    den: BigInt,
    num: Vec<BigInt>,
}

impl UScale {
    fn new(len: usize) -> Self {
        let u: Vec<Rational> = (0..=len).map(u_rational).collect();
        let den = u.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let num = u.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        Self { den, num }
    }

    fn get(&self, i: usize) -> &BigInt {
        &self.num[i]
    }
}

type Views = HashMap<Signature, Arc<IntView>>;

/// Sum of fractions kept unreduced, grouped by denominator.
#[derive(Default)]
struct Acc {
    parts: Vec<(BigInt, BigInt)>,
}

impl Acc {
    fn add(&mut self, num: BigInt, den: BigInt) {
        if num.is_zero() {
            return;
        }
        match self.parts.iter_mut().find(|(d, _)| *d == den) {
            Some((_, n)) => *n += num,
            None => self.parts.push((den, num)),
        }
    }

    fn add_acc(&mut self, other: Acc, scale: &BigInt) {
        for (d, n) in other.parts {
            self.add(n * scale, d);
        }
    }

    fn finish(self) -> Rational {
        self.parts
            .into_iter()
            .fold(Rational::zero(), |acc, (d, n)| acc + Rational::new(n, d))
    }
}

/// Evaluates the recursion terms from the complete signatures of a table.
/// Every signature with smaller `|χ|` that the recursion touches must
/// already be complete.
pub struct Recursion {
    views: Views,
    u: UScale,
}

impl Recursion {
    pub fn new(table: &CoeffTable) -> Self {
        let views = table
            .complete_signatures()
            .map(|s| (s, Arc::new(IntView::build(table, s))))
            .collect();
        Self::with_views(views)
    }

    fn with_views(views: Views) -> Self {
        let top = views.keys().map(|s| s.degree_bound()).max().unwrap_or(0);
        Self {
            views,
            u: UScale::new(top as usize + 4),
        }
    }

    fn view(&self, sig: Signature) -> &IntView {
        self.views.get(&sig).unwrap_or_else(|| {
            panic!("recursion reached incomplete signature {sig}; fill lower levels first")
        })
    }

    /// Integer numerator of `c_{g,n}(key)` over the view's denominator;
    /// zero outside the degree range.
    fn consumed<'v>(view: &'v IntView, sig: Signature, key: &[u32]) -> Option<&'v BigInt> {
        if key.iter().sum::<u32>() > sig.degree_bound() {
            return None;
        }
        let v = view.num.get(key);
        assert!(v.is_some(), "missing coefficient {sig} {key:?}");
        v
    }

    fn monomial(&self, sig: Signature, alpha: &[u32], r: Rational) -> PiPoly {
        let total: u32 = alpha.iter().sum();
        if total > sig.degree_bound() {
            return PiPoly::zero();
        }
        PiPoly::monomial(r, sig.degree_bound() - total)
    }

    /// `A^{(j)}_{g,n}(α)` for `j ∈ 2..=n` (1-based, as in the formula).
    pub fn term_a(&self, sig: Signature, alpha: &[u32], j: usize) -> PiPoly {
        assert!(j >= 2 && j <= sig.n() as usize, "term_a needs 2 <= j <= n");
        let r = self.term_a_acc(sig, alpha, j - 1).finish();
        self.monomial(sig, alpha, r)
    }

    fn term_a_acc(&self, sig: Signature, alpha: &[u32], j0: usize) -> Acc {
        let mut acc = Acc::default();
        let total: u32 = alpha.iter().sum();
        if total > sig.degree_bound() {
            return acc;
        }
        let Some(lower) = Signature::checked(sig.g() as i64, sig.n() as i64 - 1) else {
            return acc;
        };
        let view = self.view(lower);
        let a1 = alpha[0] as i64;
        let aj = alpha[j0] as i64;
        let rest: Vec<u32> = alpha
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != 0 && *k != j0)
            .map(|(_, v)| *v)
            .collect();
        let rest_sum: i64 = rest.iter().map(|&v| v as i64).sum();
        let rest = canonical(&rest);
        let i_min = (1 - a1 - aj).max(0);
        let i_max = lower.degree_bound() as i64 - rest_sum - (a1 + aj - 1);
        let mut s = BigInt::zero();
        let mut key = Vec::with_capacity(rest.len() + 1);
        for i in i_min..=i_max {
            let first = (i + a1 + aj - 1) as u32;
            insert_sorted(&rest, first, &mut key);
            if let Some(c) = Self::consumed(view, lower, &key) {
                s += self.u.get(i as usize) * c;
            }
        }
        acc.add(s * BigInt::from(8 * (2 * aj + 1)), &self.u.den * &view.den);
        acc
    }

    /// `B_{g,n}(α)`, zero when `g = 0` or `(g−1, n+1)` is unstable.
    pub fn term_b(&self, sig: Signature, alpha: &[u32]) -> PiPoly {
        let r = self.term_b_acc(sig, alpha).finish();
        self.monomial(sig, alpha, r)
    }

    fn term_b_acc(&self, sig: Signature, alpha: &[u32]) -> Acc {
        let mut acc = Acc::default();
        let total: u32 = alpha.iter().sum();
        if total > sig.degree_bound() {
            return acc;
        }
        let Some(lower) = Signature::checked(sig.g() as i64 - 1, sig.n() as i64 + 1) else {
            return acc;
        };
        let view = self.view(lower);
        let a1 = alpha[0] as i64;
        let rest = canonical(&alpha[1..]);
        let rest_sum: i64 = rest.iter().map(|&v| v as i64).sum();
        let s_max = lower.degree_bound() as i64 - rest_sum;
        let mut key = Vec::with_capacity(rest.len() + 2);
        let mut tmp = Vec::with_capacity(rest.len() + 1);
        let mut out = BigInt::zero();
        for s in (a1 - 2).max(0)..=s_max {
            // Σ_{k1+k2=s} c_{g−1,n+1}(k1, k2, rest)
            let mut pair = BigInt::zero();
            for k1 in 0..=s / 2 {
                let k2 = s - k1;
                insert_sorted(&rest, k1 as u32, &mut tmp);
                insert_sorted(&tmp, k2 as u32, &mut key);
                if let Some(c) = Self::consumed(view, lower, &key) {
                    if k1 == k2 {
                        pair += c;
                    } else {
                        pair += c * 2u32;
                    }
                }
            }
            out += self.u.get((s + 2 - a1) as usize) * pair;
        }
        acc.add(out * BigInt::from(16), &self.u.den * &view.den);
        acc
    }

    /// `Σ_ι C^{(ι)}_{g,n}(α)` over all admissible separating configurations.
    pub fn term_c(&self, sig: Signature, alpha: &[u32]) -> PiPoly {
        let r = self.term_c_acc(sig, alpha).finish();
        self.monomial(sig, alpha, r)
    }

    /// Single configuration `C^{(ι)}_{g,n}(α)`.
    pub fn term_c_config(&self, sig: Signature, alpha: &[u32], cfg: &SepConfig) -> PiPoly {
        let inside: Vec<u32> = cfg.subset.iter().map(|&i| alpha[i - 1]).collect();
        let outside: Vec<u32> = (2..=sig.n() as usize)
            .filter(|i| !cfg.subset.contains(i))
            .map(|i| alpha[i - 1])
            .collect();
        let mut acc = Acc::default();
        self.split_acc(
            sig,
            alpha[0],
            cfg.g1,
            &inside,
            &outside,
            &mut acc,
            &BigInt::one(),
        );
        self.monomial(sig, alpha, acc.finish())
    }

    fn term_c_acc(&self, sig: Signature, alpha: &[u32]) -> Acc {
        let mut out = Acc::default();
        let total: u32 = alpha.iter().sum();
        if total > sig.degree_bound() {
            return out;
        }
        // group equal entries of α_2..α_n: a sub-multiset stands for
        // Π C(m_j, t_j) subsets with identical contributions
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &v in &alpha[1..] {
            *counts.entry(v).or_default() += 1;
        }
        let groups: Vec<(u32, usize)> = counts.into_iter().collect();
        let mut choice = vec![0usize; groups.len()];
        loop {
            let mut inside = Vec::new();
            let mut outside = Vec::new();
            let mut weight = BigInt::one();
            for ((v, m), &t) in groups.iter().zip(&choice) {
                inside.extend(std::iter::repeat_n(*v, t));
                outside.extend(std::iter::repeat_n(*v, m - t));
                weight *= binomial(*m, t);
            }
            for g1 in 0..=sig.g() {
                self.split_acc(sig, alpha[0], g1, &inside, &outside, &mut out, &weight);
            }
            // odometer over t_j ∈ 0..=m_j
            let mut k = 0;
            loop {
                if k == groups.len() {
                    return out;
                }
                if choice[k] < groups[k].1 {
                    choice[k] += 1;
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split_acc(
        &self,
        sig: Signature,
        a1: u32,
        g1: u32,
        inside: &[u32],
        outside: &[u32],
        acc: &mut Acc,
        weight: &BigInt,
    ) {
        let g2 = sig.g() as i64 - g1 as i64;
        let (Some(s1), Some(s2)) = (
            Signature::checked(g1 as i64, inside.len() as i64 + 1),
            Signature::checked(g2, outside.len() as i64 + 1),
        ) else {
            return;
        };
        let (v1, v2) = (self.view(s1), self.view(s2));
        let side = |s: Signature, view: &IntView, rest: &[u32]| -> Vec<BigInt> {
            let rest = canonical(rest);
            let top = s.degree_bound() as i64 - rest.iter().map(|&v| v as i64).sum::<i64>();
            let mut key = Vec::with_capacity(rest.len() + 1);
            (0..=top.max(-1))
                .map(|k| {
                    insert_sorted(&rest, k as u32, &mut key);
                    Self::consumed(view, s, &key).cloned().unwrap_or_default()
                })
                .collect()
        };
        let c1 = side(s1, v1, inside);
        let c2 = side(s2, v2, outside);
        if c1.is_empty() || c2.is_empty() {
            return;
        }
        let mut out = BigInt::zero();
        let s_min = (a1 as usize).saturating_sub(2);
        for s in s_min..(c1.len() + c2.len() - 1) {
            let mut conv = BigInt::zero();
            let lo = s.saturating_sub(c2.len() - 1);
            for k1 in lo..=s.min(c1.len() - 1) {
                let (x, y) = (&c1[k1], &c2[s - k1]);
                if !x.is_zero() && !y.is_zero() {
                    conv += x * y;
                }
            }
            if !conv.is_zero() {
                out += self.u.get(s + 2 - a1 as usize) * conv;
            }
        }
        acc.add(
            out * BigInt::from(16) * weight,
            &self.u.den * &v1.den * &v2.den,
        );
    }

    /// `Σ_j A^{(j)} + B + Σ_ι C^{(ι)}` for `|χ| ≥ 2`, evaluated at `α`
    /// exactly as given (not canonicalized), so permuted inputs exercise
    /// different recursion paths.
    pub fn recurse(&self, sig: Signature, alpha: &[u32]) -> PiPoly {
        let r = self.recurse_acc(sig, alpha).finish();
        self.monomial(sig, alpha, r)
    }

    fn recurse_acc(&self, sig: Signature, alpha: &[u32]) -> Acc {
        let mut total = Acc::default();
        // A-terms depend on α_j only through its value: group repeats
        let mut seen: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for (j0, &v) in alpha.iter().enumerate().skip(1) {
            seen.entry(v).or_insert((j0, 0)).1 += 1;
        }
        for (_, (j0, mult)) in seen {
            total.add_acc(self.term_a_acc(sig, alpha, j0), &BigInt::from(mult));
        }
        total.add_acc(self.term_b_acc(sig, alpha), &BigInt::one());
        total.add_acc(self.term_c_acc(sig, alpha), &BigInt::one());
        total
    }
}

fn binomial(m: usize, t: usize) -> BigInt {
    (0..t).fold(BigInt::one(), |acc, k| {
        acc * BigInt::from(m - k) / BigInt::from(k + 1)
    })
}

/// Writes `rest ∪ {v}` (descending) into `out`.
fn insert_sorted(rest: &[u32], v: u32, out: &mut Vec<u32>) {
    out.clear();
    let pos = rest.iter().position(|&x| x < v).unwrap_or(rest.len());
    out.extend_from_slice(&rest[..pos]);
    out.push(v);
    out.extend_from_slice(&rest[pos..]);
}

/// All admissible separating configurations of `sig`, one per subset.
pub fn sep_configs(sig: Signature) -> Vec<SepConfig> {
    let others: Vec<usize> = (2..=sig.n() as usize).collect();
    let mut out = Vec::new();
    for g1 in 0..=sig.g() {
        for mask in 0u64..(1u64 << others.len()) {
            let subset: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let ni = subset.len() as i64;
            let nj = others.len() as i64 - ni;
            if Signature::checked(g1 as i64, ni + 1).is_some()
                && Signature::checked(sig.g() as i64 - g1 as i64, nj + 1).is_some()
            {
                out.push(SepConfig { g1, subset });
            }
        }
    }
    out.sort();
    out
}

/// Direct recursion dependencies of `sig` (empty for `|χ| = 1`).
fn dependencies(sig: Signature) -> Vec<Signature> {
    if sig.euler_abs() == 1 {
        return Vec::new();
    }
    let (g, n) = (sig.g() as i64, sig.n() as i64);
    let mut out = BTreeSet::new();
    if let Some(s) = Signature::checked(g, n - 1) {
        out.insert(s);
    }
    if let Some(s) = Signature::checked(g - 1, n + 1) {
        out.insert(s);
    }
    for g1 in 0..=g {
        for n1 in 0..n {
            let n2 = n - 1 - n1;
            if let (Some(a), Some(b)) = (
                Signature::checked(g1, n1 + 1),
                Signature::checked(g - g1, n2 + 1),
            ) {
                out.insert(a);
                out.insert(b);
            }
        }
    }
    out.into_iter().collect()
}

/// All signatures reachable from `targets` through the recursion, including
/// the targets themselves.
pub fn closure(targets: &[Signature]) -> BTreeSet<Signature> {
    let mut seen: BTreeSet<Signature> = BTreeSet::new();
    let mut stack: Vec<Signature> = targets.to_vec();
    while let Some(s) = stack.pop() {
        if seen.insert(s) {
            stack.extend(dependencies(s));
        }
    }
    seen
}

/// Fills every coefficient of `targets` and their recursion closure,
/// level by level in `|χ|`; keys within a level are computed in parallel on
/// the current rayon pool.
pub fn fill_signatures(table: &mut CoeffTable, targets: &[Signature]) -> FillStats {
    let all = closure(targets);
    let mut levels: BTreeMap<u32, Vec<Signature>> = BTreeMap::new();
    for s in &all {
        levels.entry(s.euler_abs()).or_default().push(*s);
    }
    let mut stats = FillStats {
        signatures: all.len(),
        ..FillStats::default()
    };
    let mut views: Views = HashMap::new();
    for (chi, sigs) in levels {
        let mut done = Vec::new();
        for sig in sigs {
            if table.is_complete(sig) {
                stats.reused += sorted_key_count(sig);
                done.push(sig);
                continue;
            }
            let keys = sorted_keys(sig);
            if chi == 1 {
                let conv = table.convention();
                for k in &keys {
                    if table.get_sorted(sig, k).is_none() {
                        table.insert(sig, k, base_case(sig, k, conv));
                    }
                }
                table.mark_complete(sig);
                done.push(sig);
                continue;
            }
            let missing: Vec<Vec<u32>> = keys
                .into_iter()
                .filter(|k| table.get_sorted(sig, k).is_none())
                .collect();
            let rec = Recursion::with_views(views.clone());
            let computed: Vec<(Vec<u32>, PiPoly)> = missing
                .into_par_iter()
                .map(|k| {
                    let v = rec.recurse(sig, &k);
                    (k, v)
                })
                .collect();
            stats.computed += computed.len();
            stats.reused += sorted_key_count(sig) - computed.len();
            table.insert_computed(sig, computed);
            table.mark_complete(sig);
            done.push(sig);
        }
        // signatures of one level never feed each other
        for sig in done {
            views.insert(sig, Arc::new(IntView::build(table, sig)));
        }
    }
    stats
}

/// Fills all signatures with `|χ| ≤ chi_max` and `n ≤ n_max`.
pub fn fill(table: &mut CoeffTable, chi_max: u32, n_max: u32) -> FillStats {
    let mut targets = Vec::new();
    for n in 1..=n_max {
        for g in 0..=chi_max {
            if let Some(s) = Signature::checked(g as i64, n as i64) {
                if s.euler_abs() <= chi_max {
                    targets.push(s);
                }
            }
        }
    }
    fill_signatures(table, &targets)
}

/// `c_{g,n}(α)`, filling the table as needed. Zero when `|α| > 3g − 3 + n`.
pub fn coeff(sig: Signature, alpha: &[u32], table: &mut CoeffTable) -> Result<PiPoly> {
    if alpha.len() != sig.n() as usize {
        return Err(Error::ArityMismatch {
            expected: sig.n() as usize,
            got: alpha.len(),
        });
    }
    if alpha.iter().sum::<u32>() > sig.degree_bound() {
        return Ok(PiPoly::zero());
    }
    if sig.euler_abs() == 1 {
        return Ok(base_case(sig, alpha, table.convention()));
    }
    if !table.is_complete(sig) {
        fill_signatures(table, &[sig]);
    }
    Ok(table.get(sig, alpha).cloned().unwrap_or_default())
}

/// All coefficients of `V_{g,n}`, filling as needed.
pub fn volume_poly(sig: Signature, table: &mut CoeffTable) -> VolumePolynomial {
    if !table.is_complete(sig) {
        fill_signatures(table, &[sig]);
    }
    let coeffs = table
        .signature_entries(sig)
        .into_iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    VolumePolynomial {
        signature: sig,
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: u32, n: u32) -> Signature {
        Signature::new(g, n).unwrap()
    }

    fn mono(n: i64, d: i64, deg: u32) -> PiPoly {
        PiPoly::monomial(rational(n, d), deg)
    }

    #[test]
    fn base_cases() {
        let mut t = CoeffTable::new(Convention::Paper);
        assert_eq!(coeff(sig(0, 3), &[0, 0, 0], &mut t).unwrap(), PiPoly::one());
        assert_eq!(
            coeff(sig(0, 3), &[1, 0, 0], &mut t).unwrap(),
            PiPoly::zero()
        );
        assert_eq!(coeff(sig(1, 1), &[0], &mut t).unwrap(), mono(1, 6, 1));
        assert_eq!(coeff(sig(1, 1), &[1], &mut t).unwrap(), PiPoly::one());
        assert_eq!(coeff(sig(1, 1), &[2], &mut t).unwrap(), PiPoly::zero());
        let mut h = CoeffTable::new(Convention::Half);
        assert_eq!(coeff(sig(1, 1), &[0], &mut h).unwrap(), mono(1, 12, 1));
        assert_eq!(coeff(sig(1, 1), &[1], &mut h).unwrap(), mono(1, 2, 0));
    }

    #[test]
    fn four_punctured_sphere() {
        let mut t = CoeffTable::new(Convention::Paper);
        assert_eq!(
            coeff(sig(0, 4), &[0, 0, 0, 0], &mut t).unwrap(),
            mono(2, 1, 1)
        );
        assert_eq!(
            coeff(sig(0, 4), &[1, 0, 0, 0], &mut t).unwrap(),
            mono(12, 1, 0)
        );
        assert_eq!(
            coeff(sig(0, 4), &[0, 0, 1, 0], &mut t).unwrap(),
            mono(12, 1, 0)
        );
        let rec = Recursion::new(&t);
        let s = sig(0, 4);
        assert_eq!(rec.term_a(s, &[0, 0, 0, 0], 2), mono(2, 3, 1));
        assert_eq!(rec.term_a(s, &[1, 0, 0, 0], 2), mono(4, 1, 0));
        assert_eq!(rec.term_a(s, &[2, 0, 0, 0], 3), PiPoly::zero());
        assert!(rec.term_b(s, &[0, 0, 0, 0]).is_zero());
        for a in [[0, 0, 0, 0], [1, 0, 0, 0]] {
            assert!(rec.term_c(s, &a).is_zero());
        }
    }

    #[test]
    fn torus_two_cusps_by_hand() {
        // A = 8[u1·c11(0)/2 + u2·c11(1)/2] = 17π⁴/180, B = 16·u2 = 7π⁴/45, C = 0
        let mut t = CoeffTable::new(Convention::Paper);
        let s = sig(1, 2);
        assert_eq!(coeff(s, &[0, 0], &mut t).unwrap(), mono(1, 4, 2));
        let rec = Recursion::new(&t);
        assert_eq!(rec.term_a(s, &[0, 0], 2), mono(17, 180, 2));
        assert_eq!(rec.term_b(s, &[0, 0]), mono(7, 45, 2));
        assert!(rec.term_c(s, &[0, 0]).is_zero());
        assert!(sep_configs(s).is_empty());
    }

    #[test]
    fn known_volumes() {
        let mut t = CoeffTable::new(Convention::Paper);
        assert_eq!(coeff(sig(0, 5), &[0; 5], &mut t).unwrap(), mono(10, 1, 2));
        assert_eq!(coeff(sig(2, 1), &[0], &mut t).unwrap(), mono(29, 192, 4));
        assert_eq!(
            coeff(sig(1, 3), &[0, 0, 0], &mut t).unwrap(),
            mono(14, 9, 3)
        );
        // V_{2,1}(L) = (4π²+L²)(12π²+L²)(6960π⁴+384π²L²+5L⁴)/2211840
        let v = volume_poly(sig(2, 1), &mut t);
        assert_eq!(v.coeff(&[1]), mono(169, 120, 3));
        assert_eq!(v.coeff(&[4]), mono(210, 1, 0));
    }

    #[test]
    fn sep_config_enumeration() {
        // (2,1): g1 ∈ {1} only (pieces (1,1)+(1,1)); (0,1) and (2,1)+(0,1) unstable
        let c = sep_configs(sig(2, 1));
        assert_eq!(
            c,
            vec![SepConfig {
                g1: 1,
                subset: vec![]
            }]
        );
        // (0,5): |I|, |J| ≥ 2 among {2,3,4,5}: 6 configurations
        assert_eq!(sep_configs(sig(0, 5)).len(), 6);
        assert!(sep_configs(sig(0, 4)).is_empty());
    }

    #[test]
    fn grouped_term_c_matches_config_sum() {
        let mut t = CoeffTable::new(Convention::Paper);
        let s = sig(2, 3);
        fill_signatures(&mut t, &[s]);
        let rec = Recursion::new(&t);
        for alpha in [[0u32, 0, 0], [2, 1, 1], [1, 0, 2], [3, 0, 0]] {
            let grouped = rec.term_c(s, &alpha);
            let mut direct = PiPoly::zero();
            for cfg in sep_configs(s) {
                direct += &rec.term_c_config(s, &alpha, &cfg);
            }
            assert_eq!(grouped, direct, "alpha {alpha:?}");
        }
    }

    #[test]
    fn sorted_key_enumeration() {
        assert_eq!(sorted_keys(sig(0, 3)), vec![vec![0, 0, 0]]);
        assert_eq!(sorted_keys(sig(1, 1)), vec![vec![0], vec![1]]);
        assert_eq!(sorted_keys(sig(0, 4)).len(), 2);
        assert_eq!(sorted_keys(sig(1, 2)).len(), 4);
    }

    #[test]
    fn fill_is_idempotent() {
        let mut t = CoeffTable::new(Convention::Paper);
        let first = fill(&mut t, 4, 3);
        assert!(first.computed > 0);
        let count = t.computed_count();
        let second = fill(&mut t, 4, 3);
        assert_eq!(second.computed, 0);
        assert_eq!(t.computed_count(), count);
    }

    #[test]
    fn arity_is_checked() {
        let mut t = CoeffTable::default();
        assert!(matches!(
            coeff(sig(0, 4), &[0, 0], &mut t),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
