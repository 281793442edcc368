//! Rational points of the torus `R^n / Z^n` and finitely supported
//! probability measures on them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, Error, Result};
use crate::linalg::IntMatrix;
use crate::literal::{fmt_rational, RatLit};

/// A point of the torus with rational coordinates reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPointQ {
    coords: Vec<BigRational>,
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl TorusPointQ {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.is_empty() {
            return dim_err("torus points need at least one coordinate");
        }
        Ok(Self { coords: coords.iter().map(frac).collect() })
    }

    pub fn origin(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self { coords: vec![BigRational::zero(); n] }
    }

    pub fn from_i64(pairs: &[(i64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect())
            .expect("nonempty")
    }

    /// The point `c / q mod 1`.
    pub fn from_scaled(c: &[BigInt], q: &BigInt) -> Self {
        Self {
            coords: c.iter().map(|v| BigRational::new(v.mod_floor(q), q.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer numerators over a common denominator `q`.
    pub fn scaled(&self, q: &BigInt) -> Vec<BigInt> {
        self.coords
            .iter()
            .map(|c| {
                let v = c * BigRational::from_integer(q.clone());
                debug_assert!(v.is_integer(), "q is not a common denominator");
                v.to_integer()
            })
            .collect()
    }
}

impl fmt::Debug for TorusPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for TorusPointQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::literal::rational_vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for TorusPointQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<RatLit>::deserialize(d)?;
        TorusPointQ::new(v.into_iter().map(|r| r.0).collect()).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub point: TorusPointQ,
    #[serde(with = "crate::literal::rational")]
    pub weight: BigRational,
}

/// Probability measure with finitely many rational atoms, kept sorted by
/// point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAtomic")]
pub struct AtomicMeasure {
    n: usize,
    atoms: Vec<Atom>,
    #[serde(skip_serializing)]
    q: BigInt,
}

#[derive(Deserialize)]
struct RawAtomic {
    n: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawAtomic> for AtomicMeasure {
    type Error = Error;
    fn try_from(raw: RawAtomic) -> Result<Self> {
        let m = AtomicMeasure::new(raw.atoms)?;
        if m.n != raw.n {
            return dim_err(format!("n = {} but atoms have dimension {}", raw.n, m.n));
        }
        Ok(m)
    }
}

impl AtomicMeasure {
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        let Some(first) = atoms.first() else {
            return Err(Error::Contract("an atomic measure needs at least one atom".into()));
        };
        let n = first.point.dim();
        if atoms.iter().any(|a| a.point.dim() != n) {
            return dim_err("atoms have mixed dimensions");
        }
        if let Some(a) = atoms.iter().find(|a| !a.weight.is_positive()) {
            return Err(Error::Contract(format!(
                "atom {:?} has non-positive weight {}",
                a.point,
                fmt_rational(&a.weight)
            )));
        }
        let total: BigRational = atoms.iter().map(|a| &a.weight).sum();
        if !total.is_one() {
            return Err(Error::Contract(format!(
                "weights sum to {}, not 1",
                fmt_rational(&total)
            )));
        }
        atoms.sort_by(|a, b| a.point.cmp(&b.point));
        if let Some(w) = atoms.windows(2).find(|w| w[0].point == w[1].point) {
            return Err(Error::Contract(format!("atom {:?} is listed twice", w[0].point)));
        }
        let q = atoms.iter().fold(BigInt::one(), |acc, a| acc.lcm(&a.point.denominator()));
        Ok(Self { n, atoms, q })
    }

    pub fn dirac(point: TorusPointQ) -> Self {
        Self::new(vec![Atom { point, weight: BigRational::one() }]).expect("valid Dirac")
    }

    /// Uniform measure on distinct points.
    pub fn uniform(points: Vec<TorusPointQ>) -> Result<Self> {
        let w = BigRational::new(BigInt::one(), BigInt::from(points.len().max(1)));
        Self::new(points.into_iter().map(|point| Atom { point, weight: w.clone() }).collect())
    }

    /// Merges weights of repeated points; weights need not be normalized
    /// yet but must sum to a positive value.
    pub fn from_weighted(items: impl IntoIterator<Item = (TorusPointQ, BigRational)>) -> Result<Self> {
        let mut merged: BTreeMap<TorusPointQ, BigRational> = BTreeMap::new();
        for (p, w) in items {
            *merged.entry(p).or_insert_with(BigRational::zero) += w;
        }
        let total: BigRational = merged.values().sum();
        if !total.is_positive() {
            return Err(Error::Contract("total weight must be positive".into()));
        }
        Self::new(
            merged
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(point, w)| Atom { point, weight: w / &total })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Common denominator of all atom coordinates.
    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_dirac(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn support(&self) -> impl Iterator<Item = &TorusPointQ> {
        self.atoms.iter().map(|a| &a.point)
    }

    pub fn total_weight(&self) -> BigRational {
        self.atoms.iter().map(|a| &a.weight).sum()
    }
}

/// A Borel probability measure on the torus that the crate can handle
/// exactly: Haar (Lebesgue) measure or a rational atomic measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum MeasureSpec {
    Lebesgue { n: usize },
    Atomic(AtomicMeasure),
}

impl MeasureSpec {
    pub fn lebesgue(n: usize) -> Result<Self> {
        if n == 0 {
            return dim_err("dimension must be positive");
        }
        Ok(MeasureSpec::Lebesgue { n })
    }

    pub fn n(&self) -> usize {
        match self {
            MeasureSpec::Lebesgue { n } => *n,
            MeasureSpec::Atomic(m) => m.n(),
        }
    }

    pub fn as_atomic(&self) -> Option<&AtomicMeasure> {
        match self {
            MeasureSpec::Atomic(m) => Some(m),
            MeasureSpec::Lebesgue { .. } => None,
        }
    }

    /// Rejects malformed values that bypassed the constructors.
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Lebesgue { n: 0 } => dim_err("dimension must be positive"),
            _ => Ok(()),
        }
    }
}

fn check_square(a: &IntMatrix, n: usize) -> Result<()> {
    if a.rows() != n || a.cols() != n {
        return dim_err(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            a.rows(),
            a.cols()
        ));
    }
    Ok(())
}

/// Image of `mu` under `x -> A x mod Z^n`.
pub fn pushforward(mu: &AtomicMeasure, a: &IntMatrix) -> Result<AtomicMeasure> {
    check_square(a, mu.n)?;
    let q = &mu.q;
    let images = mu
        .atoms
        .iter()
        .map(|atom| {
            let c = a.apply_column(&atom.point.scaled(q))?;
            Ok((TorusPointQ::from_scaled(&c, q), atom.weight.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    AtomicMeasure::from_weighted(images)
}

/// `T_A`-invariance. For atomic measures this is `A_* mu = mu`; Lebesgue
/// measure is preserved by every surjective endomorphism, i.e. `det A != 0`.
pub fn is_invariant(mu: &MeasureSpec, a: &IntMatrix) -> Result<bool> {
    check_square(a, mu.n())?;
    match mu {
        MeasureSpec::Lebesgue { .. } => {
            if a.det()?.is_zero() {
                Err(Error::Unsupported(
                    "invariance of Lebesgue measure under a singular matrix".into(),
                ))
            } else {
                Ok(true)
            }
        }
        MeasureSpec::Atomic(m) => Ok(pushforward(m, a)? == *m),
    }
}
