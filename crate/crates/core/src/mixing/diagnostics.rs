//! Fourier characterizations of ergodicity, weak mixing and strong mixing
//! for `xA`-invariant measures, evaluated on finitely many frequency pairs.
//!
//! With `v_j = mu^(k A^j + l)` and `t = mu^(k) mu^(l)`:
//!
//! - ergodic: Cesaro averages of `v_j` along every Folner sequence tend to `t`;
//! - weakly mixing: Cesaro averages of `|v_j - t|^2` tend to 0;
//! - strongly mixing: `v_j -> t`.
//!
//! When `v` is eventually periodic the Cesaro limit along (shifted) interval
//! sequences is the mean over one period, so the limits are exact.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::periodic::{lebesgue_direct, FourierSequence, SequenceKind};
use crate::algebraic::{CyclotomicNumber, ExactValue};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{IntMatrix, IntRowVector};
use crate::measures::{fourier, fourier_exact, is_invariant, FolnerSequence, FolnerSet, MeasureSpec};

/// Tolerance for verdicts that rest on floating-point averages.
pub const FLOAT_TOLERANCE: f64 = 1e-6;

/// Largest index evaluated directly when no periodic model exists.
pub const MAX_DIRECT_INDEX: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyPair {
    pub k: IntRowVector,
    pub l: IntRowVector,
}

impl FrequencyPair {
    pub fn new(k: &[i64], l: &[i64]) -> Self {
        Self { k: IntRowVector::from_i64(k), l: IntRowVector::from_i64(l) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRequest {
    pub measure: MeasureSpec,
    pub matrix: IntMatrix,
    pub pairs: Vec<FrequencyPair>,
    pub folner: FolnerSequence,
    pub n_max: u64,
}

impl DiagnosticsRequest {
    pub fn validate(&self) -> Result<()> {
        let n = self.measure.n();
        if self.matrix.rows() != n || self.matrix.cols() != n {
            return dim_err(format!(
                "matrix is {}x{} for a measure on T^{n}",
                self.matrix.rows(),
                self.matrix.cols()
            ));
        }
        for p in &self.pairs {
            if p.k.dim() != n || p.l.dim() != n {
                return dim_err(format!("pair ({:?}, {:?}) does not have dimension {n}", p.k, p.l));
            }
        }
        if self.n_max == 0 {
            return Err(Error::Contract("N must be at least 1".into()));
        }
        if let Some(max) = self.folner.max_index() {
            if self.n_max > max {
                return Err(Error::Contract(format!(
                    "N = {} but the custom Folner sequence has {max} sets",
                    self.n_max
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    Ergodic,
    WeakMixing,
    StrongMixing,
}

/// Limit of the diagnosed sequence along the requested Folner sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitInfo {
    /// `None` only for the strong-mixing tail when it has no limit.
    pub exact_value: Option<ExactValue>,
    pub approx_value: Option<Complex64>,
    pub limit_exists: bool,
    /// Eventual period of `j -> k A^j` (mod the atom denominator for atomic
    /// measures); `preperiod` is `None` when only eventual vanishing is known.
    pub preperiod: Option<u64>,
    pub period: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub k: IntRowVector,
    pub l: IntRowVector,
    /// Averages over `F_N` for `N = 1..=N_max`; for the strong-mixing tail
    /// the values `mu^(k A^N + l)` themselves.
    pub partial_averages: Vec<Complex64>,
    /// Value the averages must approach: `mu^(k) mu^(l)`, or 0 for weak mixing.
    pub target: Complex64,
    pub product: Complex64,
    pub exact_product: Option<ExactValue>,
    pub limit: Option<LimitInfo>,
    /// True when the verdict was decided in exact arithmetic.
    pub exact: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overall {
    pub ergodic_evidence: Verdict,
    pub weak_mixing_evidence: Verdict,
    pub strong_mixing_evidence: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub diagnostic: Diagnostic,
    pub folner: FolnerSequence,
    pub n_max: u64,
    pub invariant: bool,
    pub pairs: Vec<PairReport>,
    pub overall: Overall,
}

/// Exact `mu^(m)` when the measure allows it.
pub(crate) fn exact_coeff(mu: &MeasureSpec, m: &IntRowVector) -> Result<Option<CyclotomicNumber>> {
    match mu {
        MeasureSpec::Lebesgue { .. } => Ok(Some(CyclotomicNumber::rational(BigRational::from_integer(
            BigInt::from(m.is_zero() as u8),
        )))),
        MeasureSpec::Atomic(a) => match fourier_exact(a, m) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Limit(_)) => Ok(None),
            Err(e) => Err(e),
        },
    }
}

fn abs2(z: &CyclotomicNumber) -> CyclotomicNumber {
    z * &z.conj()
}

fn mean(values: &[CyclotomicNumber]) -> CyclotomicNumber {
    let sum = values.iter().fold(CyclotomicNumber::zero(), |acc, v| &acc + v);
    sum.scale(&BigRational::new(BigInt::from(1), BigInt::from(values.len())))
}

fn within_tol(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < FLOAT_TOLERANCE
}

/// Prefix sums `sum_{j < x} g_j` of the diagnosed sequence.
struct Prefix {
    sums: Vec<Complex64>,
    periodic: Option<(usize, usize)>,
}

impl Prefix {
    fn new(values: &[Complex64], periodic: Option<(usize, usize)>) -> Self {
        let mut sums = Vec::with_capacity(values.len() + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        sums.push(acc);
        for v in values {
            acc += v;
            sums.push(acc);
        }
        Self { sums, periodic }
    }

    fn at(&self, x: u64) -> Complex64 {
        match self.periodic {
            Some((pre, per)) if x as usize > pre + per => {
                let r = x - pre as u64;
                let full = (r / per as u64) as f64;
                let rem = (r % per as u64) as usize;
                let cycle = self.sums[pre + per] - self.sums[pre];
                self.sums[pre] + cycle * full + (self.sums[pre + rem] - self.sums[pre])
            }
            _ => self.sums[x as usize],
        }
    }

    fn value(&self, j: u64) -> Complex64 {
        self.at(j + 1) - self.at(j)
    }
}

/// Largest index `+ 1` touched by `F_1..F_{n_max}`.
fn needed_len(sigma: &FolnerSequence, n_max: u64) -> Result<u64> {
    let mut needed = 0;
    for big_n in 1..=n_max {
        needed = needed.max(match sigma.set(big_n)? {
            FolnerSet::Range { start, len } => start + len,
            FolnerSet::Explicit(s) => s.last().map_or(0, |m| m + 1),
        });
    }
    Ok(needed)
}

fn evaluate_pair(req: &DiagnosticsRequest, diag: Diagnostic, pair: &FrequencyPair) -> Result<PairReport> {
    let mu = &req.measure;
    let seq = FourierSequence::build(mu, &req.matrix, &pair.k, &pair.l)?;
    let fk = fourier(mu, &pair.k)?;
    let fl = fourier(mu, &pair.l)?;
    let product = fk.approx * fl.approx;
    let exact_product = match (exact_coeff(mu, &pair.k)?, exact_coeff(mu, &pair.l)?) {
        (Some(a), Some(b)) => Some(&a * &b),
        _ => None,
    };
    let target = match diag {
        Diagnostic::WeakMixing => Complex64::new(0.0, 0.0),
        _ => product,
    };
    let g = |v: Complex64| match diag {
        Diagnostic::WeakMixing => Complex64::new((v - product).norm_sqr(), 0.0),
        _ => v,
    };

    // values of g over stored states, or over a direct prefix of indices
    let tail_len = if diag == Diagnostic::StrongMixing { req.n_max + 1 } else { needed_len(&req.folner, req.n_max)? };
    let prefix = match seq.kind {
        SequenceKind::Periodic { preperiod, period } => {
            let vals: Vec<Complex64> = seq.approx.iter().map(|&v| g(v)).collect();
            Prefix::new(&vals, Some((preperiod, period)))
        }
        SequenceKind::EventuallyZero | SequenceKind::Unresolved => {
            if tail_len > MAX_DIRECT_INDEX {
                return Err(Error::Limit(format!(
                    "direct evaluation up to index {tail_len} exceeds {MAX_DIRECT_INDEX}"
                )));
            }
            let vals: Vec<Complex64> =
                lebesgue_direct(&req.matrix, &pair.k, &pair.l, tail_len)?.into_iter().map(g).collect();
            Prefix::new(&vals, None)
        }
    };

    let partial_averages: Vec<Complex64> = if diag == Diagnostic::StrongMixing {
        (1..=req.n_max).map(|j| prefix.value(j)).collect()
    } else {
        (1..=req.n_max)
            .map(|big_n| {
                let f = req.folner.set(big_n)?;
                let sum = match f {
                    FolnerSet::Range { start, len } => prefix.at(start + len) - prefix.at(start),
                    FolnerSet::Explicit(s) => s.iter().map(|&j| prefix.value(j)).sum(),
                };
                Ok(sum / f.len() as f64)
            })
            .collect::<Result<_>>()?
    };

    let folner_has_period_limit = diag == Diagnostic::StrongMixing || !matches!(req.folner, FolnerSequence::Custom { .. });
    let (limit, exact, verdict) = match (&seq.kind, folner_has_period_limit) {
        (SequenceKind::Periodic { preperiod, period }, true) => {
            let (pre, per) = (Some(*preperiod as u64), Some(*period as u64));
            match (seq.exact_cycle(), &exact_product) {
                (Some(cycle), Some(t)) => {
                    let (value, exists, pass) = match diag {
                        Diagnostic::Ergodic => {
                            let m = mean(cycle);
                            let pass = m.value_eq(t);
                            (Some(m), true, pass)
                        }
                        Diagnostic::WeakMixing => {
                            let devs: Vec<_> = cycle.iter().map(|v| abs2(&(v - t))).collect();
                            let m = mean(&devs);
                            let pass = m.is_zero();
                            (Some(m), true, pass)
                        }
                        Diagnostic::StrongMixing => {
                            let constant = cycle.iter().all(|v| v.value_eq(&cycle[0]));
                            if constant {
                                let pass = cycle[0].value_eq(t);
                                (Some(cycle[0].clone()), true, pass)
                            } else {
                                (None, false, false)
                            }
                        }
                    };
                    let info = LimitInfo {
                        approx_value: value.as_ref().map(CyclotomicNumber::to_complex),
                        exact_value: value.map(|v| v.exact()),
                        limit_exists: exists,
                        preperiod: pre,
                        period: per,
                    };
                    (Some(info), true, if pass { Verdict::Pass } else { Verdict::Fail })
                }
                _ => {
                    let cycle = seq.approx_cycle().expect("periodic");
                    let gs: Vec<Complex64> = cycle.iter().map(|&v| g(v)).collect();
                    let (value, exists) = match diag {
                        Diagnostic::StrongMixing => {
                            let constant = gs.iter().all(|v| within_tol(*v, gs[0]));
                            (constant.then_some(gs[0]), constant)
                        }
                        _ => (Some(gs.iter().sum::<Complex64>() / gs.len() as f64), true),
                    };
                    let pass = value.is_some_and(|v| within_tol(v, target));
                    let info = LimitInfo {
                        exact_value: None,
                        approx_value: value,
                        limit_exists: exists,
                        preperiod: pre,
                        period: per,
                    };
                    (Some(info), false, if pass { Verdict::Pass } else { Verdict::Fail })
                }
            }
        }
        (SequenceKind::EventuallyZero, true) => {
            // at most one nonzero term and a zero target: every limit is 0
            let zero = CyclotomicNumber::zero();
            let info = LimitInfo {
                exact_value: Some(zero.exact()),
                approx_value: Some(Complex64::new(0.0, 0.0)),
                limit_exists: true,
                preperiod: None,
                period: Some(1),
            };
            (Some(info), true, Verdict::Pass)
        }
        _ => {
            let last = *partial_averages.last().expect("n_max >= 1");
            let verdict = if within_tol(last, target) { Verdict::Pass } else { Verdict::Inconclusive };
            (None, false, verdict)
        }
    };

    Ok(PairReport {
        k: pair.k.clone(),
        l: pair.l.clone(),
        partial_averages,
        target,
        product,
        exact_product: exact_product.map(|p| p.exact()),
        limit,
        exact,
        verdict,
    })
}

fn aggregate(pairs: &[PairReport]) -> Verdict {
    if pairs.is_empty() {
        Verdict::Inconclusive
    } else if pairs.iter().any(|p| p.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if pairs.iter().any(|p| p.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Propagates one verdict through strong => weak => ergodic.
fn overall_from(diag: Diagnostic, v: Verdict) -> Overall {
    use Verdict::*;
    let (e, w, s) = match (diag, v) {
        (Diagnostic::Ergodic, Fail) => (Fail, Fail, Fail),
        (Diagnostic::Ergodic, v) => (v, Inconclusive, Inconclusive),
        (Diagnostic::WeakMixing, Pass) => (Pass, Pass, Inconclusive),
        (Diagnostic::WeakMixing, Fail) => (Inconclusive, Fail, Fail),
        (Diagnostic::WeakMixing, v) => (Inconclusive, v, Inconclusive),
        (Diagnostic::StrongMixing, Pass) => (Pass, Pass, Pass),
        (Diagnostic::StrongMixing, v) => (Inconclusive, Inconclusive, v),
    };
    Overall { ergodic_evidence: e, weak_mixing_evidence: w, strong_mixing_evidence: s }
}

pub fn run_diagnostic(req: &DiagnosticsRequest, diag: Diagnostic) -> Result<DiagnosticsReport> {
    req.validate()?;
    if !is_invariant(&req.measure, &req.matrix)? {
        return Err(Error::Contract("the measure is not invariant under A".into()));
    }
    let pairs = req
        .pairs
        .par_iter()
        .map(|p| evaluate_pair(req, diag, p))
        .collect::<Result<Vec<_>>>()?;
    let overall = overall_from(diag, aggregate(&pairs));
    Ok(DiagnosticsReport {
        diagnostic: diag,
        folner: req.folner.clone(),
        n_max: req.n_max,
        invariant: true,
        pairs,
        overall,
    })
}

pub fn ergodic_average(req: &DiagnosticsRequest) -> Result<DiagnosticsReport> {
    run_diagnostic(req, Diagnostic::Ergodic)
}

pub fn weak_mixing_average(req: &DiagnosticsRequest) -> Result<DiagnosticsReport> {
    run_diagnostic(req, Diagnostic::WeakMixing)
}

pub fn strong_mixing_tail(req: &DiagnosticsRequest) -> Result<DiagnosticsReport> {
    run_diagnostic(req, Diagnostic::StrongMixing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{AtomicMeasure, TorusPointQ};

    fn uniform_1d(points: &[(i64, i64)]) -> MeasureSpec {
        MeasureSpec::Atomic(
            AtomicMeasure::uniform(points.iter().map(|&p| TorusPointQ::from_i64(&[p])).collect())
                .unwrap(),
        )
    }

    fn req(measure: MeasureSpec, a: IntMatrix, pairs: Vec<FrequencyPair>) -> DiagnosticsRequest {
        DiagnosticsRequest { measure, matrix: a, pairs, folner: FolnerSequence::Interval, n_max: 200 }
    }

    fn times2() -> IntMatrix {
        IntMatrix::from_rows(&[vec![2]]).unwrap()
    }

    fn rat(n: i64, d: i64) -> ExactValue {
        ExactValue::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn dirac_passes_everything() {
        let dirac = MeasureSpec::Atomic(AtomicMeasure::dirac(TorusPointQ::origin(2)));
        let cat = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let r = req(dirac, cat, vec![FrequencyPair::new(&[1, 0], &[0, 3]), FrequencyPair::new(&[2, -1], &[1, 1])]);
        for d in [Diagnostic::Ergodic, Diagnostic::WeakMixing, Diagnostic::StrongMixing] {
            let rep = run_diagnostic(&r, d).unwrap();
            assert!(rep.pairs.iter().all(|p| p.verdict == Verdict::Pass && p.exact));
        }
        let rep = ergodic_average(&r).unwrap();
        assert!(rep.pairs[0].partial_averages.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn thirds_is_ergodic_not_weakly_mixing() {
        let r = req(uniform_1d(&[(1, 3), (2, 3)]), times2(), vec![FrequencyPair::new(&[1], &[0])]);
        let rep = ergodic_average(&r).unwrap();
        let lim = rep.pairs[0].limit.as_ref().unwrap();
        assert_eq!(lim.exact_value, Some(rat(-1, 2)));
        assert_eq!(rep.pairs[0].verdict, Verdict::Pass);

        let r = req(uniform_1d(&[(1, 3), (2, 3)]), times2(), vec![FrequencyPair::new(&[1], &[1])]);
        let rep = weak_mixing_average(&r).unwrap();
        let lim = rep.pairs[0].limit.as_ref().unwrap();
        assert_eq!(lim.exact_value, Some(rat(9, 16)));
        assert_eq!((lim.preperiod, lim.period), (Some(0), Some(2)));
        assert_eq!(rep.overall.weak_mixing_evidence, Verdict::Fail);
        assert_eq!(rep.overall.strong_mixing_evidence, Verdict::Fail);

        let rep = strong_mixing_tail(&r).unwrap();
        assert!(!rep.pairs[0].limit.as_ref().unwrap().limit_exists);
        assert_eq!(rep.pairs[0].verdict, Verdict::Fail);
        assert_eq!(rep.pairs[0].partial_averages[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn three_atoms_not_ergodic() {
        let r = req(uniform_1d(&[(0, 1), (1, 3), (2, 3)]), times2(), vec![FrequencyPair::new(&[1], &[-1])]);
        let rep = ergodic_average(&r).unwrap();
        let p = &rep.pairs[0];
        assert_eq!(p.limit.as_ref().unwrap().exact_value, Some(rat(1, 2)));
        assert_eq!(p.exact_product, Some(rat(0, 1)));
        assert_eq!(p.verdict, Verdict::Fail);
        assert_eq!(rep.overall.ergodic_evidence, Verdict::Fail);
        // averages over [0, N): 1, 1/2, 2/3, 1/2, ...
        assert!((p.partial_averages[2].re - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_under_cat_map() {
        let cat = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let leb = MeasureSpec::lebesgue(2).unwrap();
        let r = req(leb, cat, vec![FrequencyPair::new(&[1, 0], &[0, 0]), FrequencyPair::new(&[1, 0], &[-2, -1])]);
        for d in [Diagnostic::Ergodic, Diagnostic::WeakMixing, Diagnostic::StrongMixing] {
            let rep = run_diagnostic(&r, d).unwrap();
            assert_eq!(aggregate(&rep.pairs), Verdict::Pass, "{d:?}");
        }
        let rep = strong_mixing_tail(&r).unwrap();
        assert!(rep.pairs[0].partial_averages.iter().all(|z| z.norm() == 0.0));
        // k A = (2,1) = -l: the single hit is at j = 1, reported as index N = 1
        assert_eq!(rep.pairs[1].partial_averages[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn lebesgue_under_rotation_is_not_ergodic() {
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let r = req(MeasureSpec::lebesgue(2).unwrap(), rot, vec![FrequencyPair::new(&[1, 0], &[0, 1])]);
        let rep = ergodic_average(&r).unwrap();
        assert_eq!(rep.pairs[0].limit.as_ref().unwrap().exact_value, Some(rat(1, 4)));
        assert_eq!(rep.pairs[0].verdict, Verdict::Fail);
    }

    #[test]
    fn non_invariant_rejected() {
        let r = req(uniform_1d(&[(0, 1), (1, 2)]), times2(), vec![]);
        assert!(matches!(ergodic_average(&r), Err(Error::Contract(_))));
        let r = req(uniform_1d(&[(1, 3), (2, 3)]), times2(), vec![]);
        let rep = ergodic_average(&r).unwrap();
        assert!(rep.pairs.is_empty());
        assert_eq!(rep.overall.ergodic_evidence, Verdict::Inconclusive);
    }

    #[test]
    fn shifted_and_custom_folner() {
        let mut r = req(uniform_1d(&[(0, 1), (1, 3), (2, 3)]), times2(), vec![FrequencyPair::new(&[1], &[-1])]);
        r.folner = FolnerSequence::Shifted { offset: 3, step: 2 };
        let rep = ergodic_average(&r).unwrap();
        assert_eq!(rep.pairs[0].limit.as_ref().unwrap().exact_value, Some(rat(1, 2)));
        r.folner = FolnerSequence::custom((1..=50).map(|n| (0..2 * n).collect()).collect()).unwrap();
        r.n_max = 50;
        let rep = ergodic_average(&r).unwrap();
        assert!(rep.pairs[0].limit.is_none());
        assert!((rep.pairs[0].partial_averages[49].re - 0.5).abs() < 1e-12);
        r.n_max = 51;
        assert!(ergodic_average(&r).is_err());
    }
}
