//! Folner sequences in N and densities of integer subsets along them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sequence `F_1, F_2, ...` of finite nonempty subsets of N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FolnerSequence {
    /// `F_N = [0, N)`.
    Interval,
    /// `F_N = [offset + step N, offset + step N + N)`.
    Shifted {
        #[serde(default)]
        offset: u64,
        #[serde(default = "one")]
        step: u64,
    },
    /// `F_N = sets[N - 1]`; only the listed terms exist.
    Custom {
        #[serde(deserialize_with = "de_custom_sets")]
        sets: Vec<Vec<u64>>,
    },
}

fn one() -> u64 {
    1
}

fn de_custom_sets<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<Vec<u64>>, D::Error> {
    let sets = Vec::<Vec<u64>>::deserialize(d)?;
    normalize_custom(sets).map_err(serde::de::Error::custom)
}

fn normalize_custom(mut sets: Vec<Vec<u64>>) -> Result<Vec<Vec<u64>>> {
    if sets.is_empty() {
        return Err(Error::Contract("a custom Folner sequence needs at least one set".into()));
    }
    for (i, s) in sets.iter_mut().enumerate() {
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(Error::Contract(format!("F_{} is empty", i + 1)));
        }
    }
    Ok(sets)
}

/// One term `F_N` of a [`FolnerSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FolnerSet<'a> {
    Range { start: u64, len: u64 },
    Explicit(&'a [u64]),
}

impl FolnerSet<'_> {
    pub fn len(&self) -> u64 {
        match self {
            FolnerSet::Range { len, .. } => *len,
            FolnerSet::Explicit(s) => s.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, j: u64) -> bool {
        match self {
            FolnerSet::Range { start, len } => j >= *start && j - start < *len,
            FolnerSet::Explicit(s) => s.binary_search(&j).is_ok(),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match *self {
            FolnerSet::Range { start, len } => Box::new(start..start + len),
            FolnerSet::Explicit(s) => Box::new(s.iter().copied()),
        }
    }
}

impl FolnerSequence {
    pub fn custom(sets: Vec<Vec<u64>>) -> Result<Self> {
        Ok(FolnerSequence::Custom { sets: normalize_custom(sets)? })
    }

    /// Largest available index, if the sequence is finite.
    pub fn max_index(&self) -> Option<u64> {
        match self {
            FolnerSequence::Custom { sets } => Some(sets.len() as u64),
            _ => None,
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, FolnerSequence::Interval)
    }

    /// `F_big_n` for `big_n >= 1`.
    pub fn set(&self, big_n: u64) -> Result<FolnerSet<'_>> {
        if big_n == 0 {
            return Err(Error::Contract("Folner sets are indexed from N = 1".into()));
        }
        match self {
            FolnerSequence::Interval => Ok(FolnerSet::Range { start: 0, len: big_n }),
            FolnerSequence::Shifted { offset, step } => {
                let start = step
                    .checked_mul(big_n)
                    .and_then(|s| s.checked_add(*offset))
                    .filter(|s| s.checked_add(big_n).is_some())
                    .ok_or_else(|| Error::Limit(format!("F_{big_n} overflows u64")))?;
                Ok(FolnerSet::Range { start, len: big_n })
            }
            FolnerSequence::Custom { sets } => sets
                .get(big_n as usize - 1)
                .map(|s| FolnerSet::Explicit(s))
                .ok_or_else(|| {
                    Error::Contract(format!(
                        "custom Folner sequence has {} sets, F_{big_n} requested",
                        sets.len()
                    ))
                }),
        }
    }
}

/// Predicate membership test usable inside an [`IntegerSubset`].
#[derive(Clone)]
pub struct Predicate(pub Arc<dyn Fn(u64) -> bool + Send + Sync>);

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Predicate(..)")
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// A subset `E` of N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegerSubset {
    All,
    Explicit {
        #[serde(deserialize_with = "de_sorted")]
        elements: Vec<u64>,
    },
    /// `{start + step j : j >= 0}`.
    Progression { start: u64, step: u64 },
    /// Elements `j < bound` satisfying the predicate.
    #[serde(skip)]
    Predicate { test: Predicate, bound: u64 },
}

fn de_sorted<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<u64>, D::Error> {
    let mut v = Vec::<u64>::deserialize(d)?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

impl IntegerSubset {
    pub fn explicit(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        IntegerSubset::Explicit { elements }
    }

    pub fn progression(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::Contract("progression step must be positive".into()));
        }
        Ok(IntegerSubset::Progression { start, step })
    }

    pub fn predicate(test: impl Fn(u64) -> bool + Send + Sync + 'static, bound: u64) -> Self {
        IntegerSubset::Predicate { test: Predicate(Arc::new(test)), bound }
    }

    pub fn contains(&self, j: u64) -> bool {
        match self {
            IntegerSubset::All => true,
            IntegerSubset::Explicit { elements } => elements.binary_search(&j).is_ok(),
            IntegerSubset::Progression { start, step } => {
                j >= *start && *step > 0 && (j - start) % step == 0
            }
            IntegerSubset::Predicate { test, bound } => j < *bound && (test.0)(j),
        }
    }

    /// Elements `<= limit` in increasing order.
    pub fn elements_up_to(&self, limit: u64) -> Vec<u64> {
        match self {
            IntegerSubset::Explicit { elements } => {
                elements.iter().copied().take_while(|&j| j <= limit).collect()
            }
            IntegerSubset::Progression { start, step } if *step > 0 => {
                (*start..=limit).step_by(*step as usize).collect()
            }
            _ => (0..=limit).filter(|&j| self.contains(j)).collect(),
        }
    }

    /// `|E ∩ [start, start + len)|`.
    fn count_in_range(&self, start: u64, len: u64) -> u64 {
        let end = start + len;
        match self {
            IntegerSubset::All => len,
            IntegerSubset::Explicit { elements } => {
                (elements.partition_point(|&j| j < end) - elements.partition_point(|&j| j < start))
                    as u64
            }
            IntegerSubset::Progression { start: a, step } if *step > 0 => {
                // number of t >= 0 with a + t step < x
                let below = |x: u64| if x <= *a { 0 } else { (x - a).div_ceil(*step) };
                below(end) - below(start)
            }
            _ => (start..end).filter(|&j| self.contains(j)).count() as u64,
        }
    }

    pub fn count_in(&self, set: &FolnerSet<'_>) -> u64 {
        match set {
            FolnerSet::Range { start, len } => self.count_in_range(*start, *len),
            FolnerSet::Explicit(s) => s.iter().filter(|&&j| self.contains(j)).count() as u64,
        }
    }
}

/// Partial densities `|E ∩ F_N| / |F_N|` for `N = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n_max: u64,
    #[serde(with = "crate::literal::rational_vec")]
    pub partials: Vec<BigRational>,
    /// Final partial, or `None` when the tail oscillates by more than 1/10.
    #[serde(with = "opt_rational")]
    pub estimate: Option<BigRational>,
    /// Running max / min over the tail `N in [n_max/2, n_max]`.
    #[serde(with = "crate::literal::rational")]
    pub upper: BigRational,
    #[serde(with = "crate::literal::rational")]
    pub lower: BigRational,
    pub diverged: bool,
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::literal::{fmt_rational, RatLit};

    pub fn serialize<S: Serializer>(
        q: &Option<BigRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&fmt_rational(q)),
            None => s.serialize_str("diverged"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigRational>, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "diverged" => Ok(None),
            other => RatLit::deserialize(other).map(|r| Some(r.0)).map_err(serde::de::Error::custom),
        }
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn density(e: &IntegerSubset, sigma: &FolnerSequence, n_max: u64) -> Result<DensityReport> {
    if n_max == 0 {
        return Err(Error::Contract("N_max must be at least 1".into()));
    }
    let partials = (1..=n_max)
        .map(|big_n| {
            let f = sigma.set(big_n)?;
            Ok(ratio(e.count_in(&f), f.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &partials[(n_max / 2).saturating_sub(1) as usize..];
    let upper = tail.iter().max().expect("nonempty").clone();
    let lower = tail.iter().min().expect("nonempty").clone();
    let diverged = &upper - &lower > ratio(1, 10);
    let estimate = (!diverged).then(|| partials.last().expect("nonempty").clone());
    Ok(DensityReport { n_max, partials, estimate, upper, lower, diverged })
}

/// `|(F_N + m) Δ F_N| / |F_N|` for `N = 1..=n_max`.
pub fn folner_check(sigma: &FolnerSequence, m: u64, n_max: u64) -> Result<Vec<BigRational>> {
    (1..=n_max)
        .map(|big_n| {
            let f = sigma.set(big_n)?;
            let sym = match f {
                FolnerSet::Range { len, .. } => 2 * m.min(len),
                FolnerSet::Explicit(s) => {
                    let shifted_out =
                        s.iter().filter(|&&j| s.binary_search(&(j + m)).is_err()).count();
                    // |F + m \ F| = |F \ (F + m)| since both sides have |F| elements
                    2 * shifted_out as u64
                }
            };
            Ok(ratio(sym, f.len()))
        })
        .collect()
}
