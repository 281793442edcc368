//! Eventual periodicity of `j -> k A^j` and the Fourier sequences
//! `j -> mu^(k A^j + l)` built on it.
//!
//! For a rational atomic measure with common denominator `q`, `mu^(m)` only
//! depends on `m mod q`, and `k A^j mod q` lives in the finite set
//! `(Z/q)^n`, so the sequence is eventually periodic. For Lebesgue measure
//! the value is the indicator of `k A^j + l = 0`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebraic::{cyclotomic_poly, euler_phi, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntRowVector};
use crate::measures::{fourier_approx, fourier_exact, AtomicMeasure, MeasureSpec};

/// Stored-state budget for cycle detection.
pub const MAX_ORBIT_STATES: usize = 2_000_000;

/// Work budget (states times atoms) for exact period sums.
pub const MAX_EXACT_WORK: usize = 4_000_000;

/// `states[j]` for `j < preperiod + period`; afterwards the orbit repeats
/// the last `period` states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCycle {
    pub states: Vec<IntRowVector>,
    pub preperiod: usize,
    pub period: usize,
}

impl OrbitCycle {
    pub fn index(&self, j: u64) -> usize {
        let pre = self.preperiod as u64;
        if j < pre {
            j as usize
        } else {
            self.preperiod + ((j - pre) % self.period as u64) as usize
        }
    }
}

fn reduce(v: IntRowVector, q: Option<&BigInt>) -> IntRowVector {
    match q {
        Some(q) => IntRowVector::new(v.entries().iter().map(|x| x.mod_floor(q)).collect())
            .expect("dim >= 1"),
        None => v,
    }
}

/// Orbit of `k` under `v -> v A`, reduced mod `q` when given. Returns
/// `Ok(None)` when no repetition occurs within `max_states` states.
pub fn row_orbit(
    k: &IntRowVector,
    a: &IntMatrix,
    q: Option<&BigInt>,
    max_states: usize,
) -> Result<Option<OrbitCycle>> {
    let mut seen: HashMap<IntRowVector, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut cur = reduce(k.clone(), q);
    loop {
        if let Some(&first) = seen.get(&cur) {
            let period = states.len() - first;
            return Ok(Some(OrbitCycle { states, preperiod: first, period }));
        }
        if states.len() >= max_states {
            return Ok(None);
        }
        seen.insert(cur.clone(), states.len());
        let next = reduce(cur.mul_matrix(a)?, q);
        states.push(std::mem::replace(&mut cur, next));
    }
}

/// True when some eigenvalue of `A` is a root of unity, i.e. some
/// cyclotomic `Phi_m` with `phi(m) <= n` divides the characteristic
/// polynomial. `phi(m) >= sqrt(m/2)` bounds the search by `m <= 2 n^2`.
pub fn has_root_of_unity_eigenvalue(a: &IntMatrix) -> Result<bool> {
    let chi = a.char_poly()?;
    let n = a.rows() as u64;
    Ok((1..=2 * n * n)
        .filter(|&m| euler_phi(m) <= n)
        .any(|m| cyclotomic_poly(m).divides(&chi)))
}

/// The sequence `j -> mu^(k A^j + l)`, indexed through an orbit model.
#[derive(Debug, Clone)]
pub struct FourierSequence {
    /// Approximate value per stored state.
    pub approx: Vec<Complex64>,
    /// Exact value per stored state, when affordable.
    pub exact: Option<Vec<CyclotomicNumber>>,
    pub kind: SequenceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    /// Value at `j` is the one stored at `cycle.index(j)`.
    Periodic { preperiod: usize, period: usize },
    /// Lebesgue measure along an injective orbit: the value is nonzero for at
    /// most one `j`, so every Cesaro and tail limit is 0. `approx` is empty;
    /// values are recomputed on demand.
    EventuallyZero,
    /// No structure found within the budgets; only direct values exist.
    Unresolved,
}

/// `mu^(m)` where `mu` is Lebesgue: 1 at 0, else 0.
fn lebesgue_value(m: &IntRowVector) -> CyclotomicNumber {
    CyclotomicNumber::rational(BigRational::from_integer(BigInt::from(m.is_zero() as u8)))
}

impl FourierSequence {
    pub fn build(mu: &MeasureSpec, a: &IntMatrix, k: &IntRowVector, l: &IntRowVector) -> Result<Self> {
        match mu {
            MeasureSpec::Atomic(m) => Self::atomic(m, a, k, l),
            MeasureSpec::Lebesgue { .. } => Self::lebesgue(a, k, l),
        }
    }

    fn atomic(mu: &AtomicMeasure, a: &IntMatrix, k: &IntRowVector, l: &IntRowVector) -> Result<Self> {
        let cycle = row_orbit(k, a, Some(mu.q()), MAX_ORBIT_STATES)?.ok_or_else(|| {
            Error::Limit(format!("orbit of {k:?} mod {} exceeds {MAX_ORBIT_STATES} states", mu.q()))
        })?;
        let freqs = cycle
            .states
            .iter()
            .map(|s| s.add(l))
            .collect::<Result<Vec<_>>>()?;
        let affordable = mu.q().to_u64().is_some()
            && freqs.len().saturating_mul(mu.atoms().len()) <= MAX_EXACT_WORK;
        let approx = freqs
            .iter()
            .map(|f| fourier_approx(mu, f))
            .collect::<Result<Vec<_>>>()?;
        let exact = if affordable {
            Some(freqs.iter().map(|f| fourier_exact(mu, f)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        Ok(Self {
            approx,
            exact,
            kind: SequenceKind::Periodic { preperiod: cycle.preperiod, period: cycle.period },
        })
    }

    fn lebesgue(a: &IntMatrix, k: &IntRowVector, l: &IntRowVector) -> Result<Self> {
        if k.is_zero() {
            let v = lebesgue_value(l);
            return Ok(Self {
                approx: vec![v.to_complex()],
                exact: Some(vec![v]),
                kind: SequenceKind::Periodic { preperiod: 0, period: 1 },
            });
        }
        if !a.det()?.is_zero() && !has_root_of_unity_eigenvalue(a)? {
            return Ok(Self { approx: Vec::new(), exact: None, kind: SequenceKind::EventuallyZero });
        }
        match row_orbit(k, a, None, 100_000)? {
            Some(cycle) => {
                let exact: Vec<CyclotomicNumber> = cycle
                    .states
                    .iter()
                    .map(|s| s.add(l).map(|m| lebesgue_value(&m)))
                    .collect::<Result<_>>()?;
                Ok(Self {
                    approx: exact.iter().map(CyclotomicNumber::to_complex).collect(),
                    exact: Some(exact),
                    kind: SequenceKind::Periodic { preperiod: cycle.preperiod, period: cycle.period },
                })
            }
            None => Ok(Self { approx: Vec::new(), exact: None, kind: SequenceKind::Unresolved }),
        }
    }

    pub fn preperiod_period(&self) -> Option<(usize, usize)> {
        match self.kind {
            SequenceKind::Periodic { preperiod, period } => Some((preperiod, period)),
            _ => None,
        }
    }

    pub fn state_index(&self, j: u64) -> Option<usize> {
        let (pre, per) = self.preperiod_period()?;
        let pre64 = pre as u64;
        Some(if j < pre64 { j as usize } else { pre + ((j - pre64) % per as u64) as usize })
    }

    /// Exact values of the periodic part, one per state of the cycle.
    pub fn exact_cycle(&self) -> Option<&[CyclotomicNumber]> {
        let (pre, _) = self.preperiod_period()?;
        self.exact.as_deref().map(|v| &v[pre..])
    }

    pub fn approx_cycle(&self) -> Option<&[Complex64]> {
        let (pre, _) = self.preperiod_period()?;
        Some(&self.approx[pre..])
    }
}

/// Direct evaluation of `mu^(k A^j + l)` for `j in 0..len` for Lebesgue
/// measure, filtering candidates modulo a large prime before the exact test.
pub fn lebesgue_direct(a: &IntMatrix, k: &IntRowVector, l: &IntRowVector, len: u64) -> Result<Vec<Complex64>> {
    const P: u128 = (1 << 61) - 1;
    let n = a.rows();
    let to_mod = |v: &BigInt| -> u128 {
        v.mod_floor(&BigInt::from(P)).to_u128().expect("reduced")
    };
    let am: Vec<Vec<u128>> = (0..n).map(|i| a.row(i).iter().map(to_mod).collect()).collect();
    let target: Vec<u128> = l.entries().iter().map(|v| to_mod(&-v)).collect();
    let mut cur: Vec<u128> = k.entries().iter().map(to_mod).collect();
    let mut out = Vec::with_capacity(len as usize);
    for j in 0..len {
        let hit = cur == target && {
            let exact = k.mul_matrix(&a.pow(j)?)?.add(l)?;
            exact.is_zero()
        };
        out.push(Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0));
        cur = (0..n)
            .map(|c| (0..n).fold(0u128, |acc, r| (acc + cur[r] * am[r][c]) % P))
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::TorusPointQ;

    fn v(k: &[i64]) -> IntRowVector {
        IntRowVector::from_i64(k)
    }

    #[test]
    fn orbit_mod_three() {
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        let c = row_orbit(&v(&[1]), &two, Some(&BigInt::from(3)), 100).unwrap().unwrap();
        assert_eq!((c.preperiod, c.period), (0, 2));
        // 2^j mod 12: 1, 2, 4, 8, 4, 8, ...
        let c = row_orbit(&v(&[1]), &two, Some(&BigInt::from(12)), 100).unwrap().unwrap();
        assert_eq!((c.preperiod, c.period), (2, 2));
        assert_eq!(c.states[c.index(10)], v(&[4]));
        assert!(row_orbit(&v(&[1]), &two, None, 50).unwrap().is_none());
    }

    #[test]
    fn root_of_unity_screen() {
        let cat = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(!has_root_of_unity_eigenvalue(&cat).unwrap());
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 1]]).unwrap();
        assert!(has_root_of_unity_eigenvalue(&rot).unwrap());
        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(has_root_of_unity_eigenvalue(&shear).unwrap());
        assert!(!has_root_of_unity_eigenvalue(&IntMatrix::scalar(3, 2)).unwrap());
    }

    #[test]
    fn thirds_sequence() {
        let mu = MeasureSpec::Atomic(
            AtomicMeasure::uniform(vec![TorusPointQ::from_i64(&[(1, 3)]), TorusPointQ::from_i64(&[(2, 3)])])
                .unwrap(),
        );
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        let s = FourierSequence::build(&mu, &two, &v(&[1]), &v(&[1])).unwrap();
        assert_eq!(s.preperiod_period(), Some((0, 2)));
        // mu^(2^j + 1): j even gives mu^(2) = -1/2, j odd gives mu^(3) = 1
        let vals: Vec<_> = s.exact.unwrap().iter().map(|c| c.as_rational().unwrap()).collect();
        let half = BigRational::new((-1).into(), 2.into());
        assert_eq!(vals, vec![half, BigRational::from_integer(1.into())]);
    }

    #[test]
    fn lebesgue_kinds() {
        let cat = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let leb = MeasureSpec::lebesgue(2).unwrap();
        let s = FourierSequence::build(&leb, &cat, &v(&[1, 0]), &v(&[0, 0])).unwrap();
        assert_eq!(s.kind, SequenceKind::EventuallyZero);
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let s = FourierSequence::build(&leb, &rot, &v(&[1, 0]), &v(&[0, 1])).unwrap();
        assert_eq!(s.preperiod_period(), Some((0, 4)));
        let ones = s.approx.iter().filter(|c| c.re == 1.0).count();
        assert_eq!(ones, 1);
        let d = lebesgue_direct(&cat, &v(&[1, 0]), &v(&[-2, -1]), 10).unwrap();
        assert_eq!(d.iter().position(|c| c.re == 1.0), Some(1));
        assert_eq!(d.iter().filter(|c| c.re == 1.0).count(), 1);
    }
}
