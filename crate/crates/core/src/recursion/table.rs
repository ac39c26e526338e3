use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use super::{canonical, Signature};
use crate::qpi::PiPoly;
use crate::Error;

/// Normalization of the once-holed torus volume.
///
/// `Paper` reports `V_{1,1}(x) = π²/6 + x²/24`; `Half` reports
/// `π²/12 + x²/48`. The recursion always consumes the half value, so every
/// other signature is identical under both conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    #[default]
    Paper,
    Half,
}

impl Convention {
    pub fn tag(&self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Half => "half",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "paper" => Ok(Convention::Paper),
            "half" => Ok(Convention::Half),
            other => Err(Error::InvalidArgument(format!(
                "unknown convention `{other}`"
            ))),
        }
    }
}

/// Memoized map from `(g, n, sorted α)` to `c_{g,n}(α)`.
///
/// Only keys with `|α| ≤ 3g − 3 + n` are stored. A signature is *complete*
/// once every such key is present.
#[derive(Clone, Debug, Default)]
pub struct CoeffTable {
    convention: Convention,
    entries: HashMap<Signature, HashMap<Vec<u32>, PiPoly>>,
    complete: BTreeSet<Signature>,
    computed: u64,
}

impl CoeffTable {
    pub fn new(convention: Convention) -> Self {
        Self {
            convention,
            ..Self::default()
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Stored value under the canonical key, `None` if absent.
    pub fn get(&self, sig: Signature, alpha: &[u32]) -> Option<&PiPoly> {
        let sorted;
        let key = if alpha.windows(2).all(|w| w[0] >= w[1]) {
            alpha
        } else {
            sorted = canonical(alpha);
            &sorted
        };
        self.entries.get(&sig)?.get(key)
    }

    pub(crate) fn get_sorted(&self, sig: Signature, key: &[u32]) -> Option<&PiPoly> {
        self.entries.get(&sig)?.get(key)
    }

    /// Inserts under the canonical key; a repeated insert must carry the same
    /// value.
    pub fn insert(&mut self, sig: Signature, alpha: &[u32], value: PiPoly) {
        let key = canonical(alpha);
        let slot = self.entries.entry(sig).or_default();
        if let Some(old) = slot.get(&key) {
            debug_assert_eq!(old, &value, "conflicting insert at {sig} {key:?}");
            return;
        }
        slot.insert(key, value);
    }

    pub(crate) fn insert_computed(&mut self, sig: Signature, values: Vec<(Vec<u32>, PiPoly)>) {
        let slot = self.entries.entry(sig).or_default();
        for (k, v) in values {
            if slot.insert(k, v).is_none() {
                self.computed += 1;
            }
        }
    }

    pub(crate) fn mark_complete(&mut self, sig: Signature) {
        self.complete.insert(sig);
    }

    /// Recomputes completeness from entry counts (used after loading).
    pub(crate) fn refresh_complete(&mut self) {
        self.complete = self
            .entries
            .iter()
            .filter(|(sig, m)| m.len() == super::engine::sorted_key_count(**sig))
            .map(|(sig, _)| *sig)
            .collect();
    }

    pub fn is_complete(&self, sig: Signature) -> bool {
        self.complete.contains(&sig)
    }

    pub fn complete_signatures(&self) -> impl Iterator<Item = Signature> + '_ {
        self.complete.iter().copied()
    }

    /// Per `n`, the largest `|χ|` such that every signature `(g, n)` up to
    /// that `|χ|` is complete. Values of `n` without any complete genus run
    /// starting from the smallest valid genus are omitted.
    pub fn frontier(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        let ns: BTreeSet<u32> = self.complete.iter().map(|s| s.n()).collect();
        for n in ns {
            let g_min = if n >= 3 { 0 } else { 1 };
            let mut last = None;
            let mut g = g_min;
            while let Some(sig) = Signature::checked(g as i64, n as i64) {
                if !self.complete.contains(&sig) {
                    break;
                }
                last = Some(sig.euler_abs());
                g += 1;
            }
            if let Some(chi) = last {
                out.insert(n, chi);
            }
        }
        out
    }

    /// Number of coefficients computed by recursion into this table (loaded
    /// or base-case entries are not counted).
    pub fn computed_count(&self) -> u64 {
        self.computed
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn signatures(&self) -> impl Iterator<Item = Signature> + '_ {
        self.entries.keys().copied()
    }

    /// All entries of one signature, keys ascending.
    pub fn signature_entries(&self, sig: Signature) -> Vec<(&Vec<u32>, &PiPoly)> {
        let mut v: Vec<_> = self
            .entries
            .get(&sig)
            .map(|m| m.iter().collect())
            .unwrap_or_default();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// `V_{g,n} = c_{g,n}(0,…,0)`, if stored.
    pub fn vgn(&self, sig: Signature) -> Option<&PiPoly> {
        self.get_sorted(sig, &vec![0; sig.n() as usize])
    }
}
