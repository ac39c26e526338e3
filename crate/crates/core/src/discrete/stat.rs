use super::{delta, CoeffFunction};
use crate::asymptotics::{multi_indices, vgn};
use crate::qpi::{Interval, PiPoly};
use crate::recursion::{CoeffTable, Signature};
use crate::verify::Trend;
use crate::{Error, Result};

/// Per-genus supremum of the normalized discrete derivative.
#[derive(Clone, Debug)]
pub struct DerivativeRow {
    pub g: u32,
    /// `None` when no admissible `(m, α)` exists at this genus.
    pub sup: Option<Interval>,
    pub argmax: Option<(Vec<u32>, Vec<u32>)>,
}

#[derive(Clone, Debug)]
pub struct DerivativeReport {
    pub n: u32,
    pub order: u32,
    pub threshold: u32,
    pub rows: Vec<DerivativeRow>,
    pub trend: Trend,
}

/// Every `m ∈ ℕ₀ⁿ` with `|m| = s`.
fn orders(n: usize, s: u32) -> Vec<Vec<u32>> {
    multi_indices(n, s)
        .into_iter()
        .filter(|m| m.iter().sum::<u32>() == s)
        .collect()
}

/// For each `g`, the supremum over `|m| ∈ {2N−1, 2N}` and `|α| ≤ 3g−2+n`
/// with `α_i ≥ a` wherever `m_i > 0` of
/// `|δ^m c_{g,n}(α)| · ⟨g⟩^N / (⟨|α|⟩^N V_{g,n})`.
pub fn derivative_bound_stat(
    n: u32,
    order: u32,
    a: u32,
    g_range: std::ops::RangeInclusive<u32>,
    table: &CoeffTable,
    prec: u32,
) -> Result<DerivativeReport> {
    let wp = prec + 16;
    let sizes: Vec<u32> = [2 * order as i64 - 1, 2 * order as i64]
        .into_iter()
        .filter(|&s| s >= 0)
        .map(|s| s as u32)
        .collect();
    let ms: Vec<Vec<u32>> = sizes.iter().flat_map(|&s| orders(n as usize, s)).collect();
    let mut rows = Vec::new();
    for g in g_range {
        let Some(sig) = Signature::checked(g as i64, n as i64) else {
            continue;
        };
        let f = CoeffFunction::new(sig, table)?;
        let v = vgn(table, sig)?.enclose(wp);
        let jg = Interval::from_i64(g as i64).japanese(wp).powi(order, wp);
        let mut best: Option<(Interval, Vec<u32>, Vec<u32>)> = None;
        for alpha in multi_indices(n as usize, sig.degree_bound() + 1) {
            let ja = Interval::from_i64(alpha.iter().sum::<u32>() as i64)
                .japanese(wp)
                .powi(order, wp);
            for m in &ms {
                if m.iter().zip(&alpha).any(|(&mi, &ai)| mi > 0 && ai < a) {
                    continue;
                }
                let d: PiPoly = delta(&f, m, &alpha)?;
                let val = if d.is_zero() {
                    Interval::zero()
                } else {
                    d.enclose(wp).abs().mul(&jg, wp).div(&ja.mul(&v, wp), wp)
                };
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => val.hi() > b.hi(),
                };
                if better {
                    best = Some((val, m.clone(), alpha.clone()));
                }
            }
        }
        rows.push(match best {
            Some((sup, m, alpha)) => DerivativeRow {
                g,
                sup: Some(sup),
                argmax: Some((m, alpha)),
            },
            None => DerivativeRow {
                g,
                sup: None,
                argmax: None,
            },
        });
    }
    let series: Vec<(u32, f64)> = rows
        .iter()
        .filter_map(|r| r.sup.as_ref().map(|s| (r.g, s.hi().to_f64())))
        .collect();
    let trend = Trend::from_series(&series).ok_or_else(|| {
        Error::EmptyAdmissibleSet(format!(
            "n={n}, N={order}, a={a}: no alpha within the degree box has the required entries >= a"
        ))
    })?;
    Ok(DerivativeReport {
        n,
        order,
        threshold: a,
        rows,
        trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::{fill, Convention};

    #[test]
    fn zeroth_order_is_at_most_one() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 8, 2);
        for n in 1..=2 {
            let r = derivative_bound_stat(n, 0, 0, 1..=4, &t, 128).unwrap();
            for row in &r.rows {
                let s = row.sup.as_ref().unwrap();
                assert!(s.hi().to_f64() <= 1.0 + 1e-30, "n={n} g={}", row.g);
            }
            // the sup is attained at α = 0 where c = V
            assert!((r.rows[0].sup.as_ref().unwrap().mid_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn empty_admissible_set_is_reported() {
        let mut t = CoeffTable::new(Convention::Paper);
        fill(&mut t, 4, 1);
        assert!(matches!(
            derivative_bound_stat(1, 1, 50, 1..=2, &t, 128),
            Err(Error::EmptyAdmissibleSet(_))
        ));
        let r = derivative_bound_stat(1, 1, 3, 1..=2, &t, 128).unwrap();
        assert!(r.rows[0].sup.is_none());
        assert_eq!(r.trend.reference_g, 2);
    }
}
