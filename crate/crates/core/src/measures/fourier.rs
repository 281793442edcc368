//! Fourier coefficients `mu^(k) = ∫ e^{2 pi i k.x} dmu` and the support
//! constraints they impose.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::torus::{AtomicMeasure, MeasureSpec, TorusPointQ};
use crate::algebraic::CyclotomicNumber;
use crate::error::{dim_err, Error, Result};
use crate::linalg::{IntMatrix, IntRowVector};

/// Largest root-of-unity order for which the zero test of a Fourier
/// coefficient is decided exactly.
pub const EXACT_ZERO_ORDER_LIMIT: u64 = 20_000;

/// Largest number of lattice points [`finite_support_candidates`] enumerates.
pub const SUPPORT_ENUMERATION_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierValue {
    pub approx: Complex64,
    pub exactly_one: bool,
    pub exactly_zero: bool,
}

impl FourierValue {
    fn exact_one() -> Self {
        Self { approx: Complex64::new(1.0, 0.0), exactly_one: true, exactly_zero: false }
    }

    fn exact_zero() -> Self {
        Self { approx: Complex64::new(0.0, 0.0), exactly_one: false, exactly_zero: true }
    }
}

fn check_dim(k: &IntRowVector, n: usize) -> Result<()> {
    if k.dim() != n {
        return dim_err(format!("frequency of dim {} for a measure on T^{n}", k.dim()));
    }
    Ok(())
}

/// Atom weights grouped by the phase `q (k.x) mod q`.
pub fn phase_classes(mu: &AtomicMeasure, k: &IntRowVector) -> Result<BTreeMap<BigInt, BigRational>> {
    check_dim(k, mu.n())?;
    let q = mu.q();
    let mut classes: BTreeMap<BigInt, BigRational> = BTreeMap::new();
    for atom in mu.atoms() {
        let phase: BigInt = k
            .entries()
            .iter()
            .zip(atom.point.scaled(q))
            .map(|(a, b)| a * b)
            .sum::<BigInt>()
            .mod_floor(q);
        *classes.entry(phase).or_insert_with(BigRational::zero) += &atom.weight;
    }
    Ok(classes)
}

/// `mu^(k)` as an exact element of `Q(zeta_q)`.
pub fn fourier_exact(mu: &AtomicMeasure, k: &IntRowVector) -> Result<CyclotomicNumber> {
    let order = mu
        .q()
        .to_u64()
        .ok_or_else(|| Error::Limit(format!("denominator {} exceeds u64", mu.q())))?;
    let classes = phase_classes(mu, k)?;
    Ok(CyclotomicNumber::from_terms(
        order,
        classes.into_iter().map(|(p, w)| (p.to_u64().expect("phase < q"), w)),
    ))
}

fn approx_from_classes(classes: &BTreeMap<BigInt, BigRational>, q: &BigInt) -> Complex64 {
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    classes.iter().fold(Complex64::new(0.0, 0.0), |acc, (p, w)| {
        let angle = std::f64::consts::TAU * (p.to_f64().unwrap_or(0.0) / qf);
        acc + Complex64::from_polar(w.to_f64().unwrap_or(f64::NAN), angle)
    })
}

/// Double-precision `mu^(k)` without the exact zero test.
pub fn fourier_approx(mu: &AtomicMeasure, k: &IntRowVector) -> Result<Complex64> {
    Ok(approx_from_classes(&phase_classes(mu, k)?, mu.q()))
}

pub fn fourier(mu: &MeasureSpec, k: &IntRowVector) -> Result<FourierValue> {
    check_dim(k, mu.n())?;
    let m = match mu {
        MeasureSpec::Lebesgue { .. } => {
            return Ok(if k.is_zero() { FourierValue::exact_one() } else { FourierValue::exact_zero() });
        }
        MeasureSpec::Atomic(m) => m,
    };
    let classes = phase_classes(m, k)?;
    // positive weights summing to 1: the value is 1 iff every phase vanishes
    if classes.len() == 1 && classes.keys().next().is_some_and(Zero::is_zero) {
        return Ok(FourierValue::exact_one());
    }
    let approx = approx_from_classes(&classes, m.q());
    // smallest order over which all occurring phases live
    let g = classes.keys().fold(m.q().clone(), |g, p| g.gcd(p));
    let order = m.q() / &g;
    let exactly_zero = match order.to_u64() {
        Some(ord) if ord <= EXACT_ZERO_ORDER_LIMIT => CyclotomicNumber::from_terms(
            ord,
            classes.iter().map(|(p, w)| ((p / &g).to_u64().expect("phase < order"), w.clone())),
        )
        .is_zero(),
        _ => false,
    };
    Ok(FourierValue {
        approx: if exactly_zero { Complex64::new(0.0, 0.0) } else { approx },
        exactly_one: false,
        exactly_zero,
    })
}

/// The condition `k.x in Z` that `mu^(k) = 1` forces on every atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportConstraint {
    pub k: IntRowVector,
}

pub fn support_constraint(k: &IntRowVector) -> Result<SupportConstraint> {
    if k.is_zero() {
        return Err(Error::Contract("support constraints need a nonzero k".into()));
    }
    Ok(SupportConstraint { k: k.clone() })
}

impl SupportConstraint {
    pub fn satisfied_by(&self, x: &TorusPointQ) -> Result<bool> {
        check_dim(&self.k, x.dim())?;
        let dot: BigRational = self
            .k
            .entries()
            .iter()
            .zip(x.coords())
            .map(|(a, c)| c * BigRational::from_integer(a.clone()))
            .sum();
        Ok(dot.is_integer())
    }

    /// Atoms of `mu` violating the constraint.
    pub fn violations(&self, mu: &AtomicMeasure) -> Result<Vec<TorusPointQ>> {
        let mut out = Vec::new();
        for p in mu.support() {
            if !self.satisfied_by(p)? {
                out.push(p.clone());
            }
        }
        Ok(out)
    }
}

/// All `x in [0,1)^n` with `L x in Z^n`, i.e. every point a measure can
/// charge once its Fourier coefficients at the rows of `L` are all 1.
///
/// Writing `m = L x`, each `|m_i|` is at most the absolute row sum of `L`,
/// so it suffices to enumerate `m in [-M, M]^n` and keep `L^{-1} m` when it
/// lands in the unit cube.
pub fn finite_support_candidates(l: &IntMatrix) -> Result<Vec<TorusPointQ>> {
    if !l.is_square() {
        return dim_err("support bounds need a square matrix");
    }
    if l.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let inv = l.inverse_rational()?;
    let n = l.rows();
    let bound = l
        .max_abs_row_sum()
        .to_u64()
        .ok_or_else(|| Error::Limit("row sums exceed u64".into()))?;
    let side = 2 * bound + 1;
    let total = (0..n)
        .try_fold(1u64, |acc, _| acc.checked_mul(side))
        .filter(|&t| t <= SUPPORT_ENUMERATION_LIMIT)
        .ok_or_else(|| {
            Error::Limit(format!("[-{bound},{bound}]^{n} exceeds {SUPPORT_ENUMERATION_LIMIT} points"))
        })?;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let mut points: Vec<TorusPointQ> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut m = vec![BigRational::zero(); n];
            for slot in m.iter_mut().rev() {
                *slot = BigRational::from_integer(BigInt::from(idx % side) - BigInt::from(bound));
                idx /= side;
            }
            let x = inv.apply_column(&m).expect("square");
            x.iter()
                .all(|c| *c >= zero && *c < one)
                .then(|| TorusPointQ::new(x).expect("n >= 1"))
        })
        .collect();
    points.sort();
    points.dedup();
    Ok(points)
}

/// True iff every atom of `mu` lies in `candidates` (sorted).
pub fn support_within(mu: &AtomicMeasure, candidates: &[TorusPointQ]) -> bool {
    mu.support().all(|p| candidates.binary_search(p).is_ok())
}
