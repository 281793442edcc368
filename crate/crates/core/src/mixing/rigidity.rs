//! Orbit measures and a harness that replays the rigidity argument for a
//! strongly independent family `B_1..B_r` on a concrete measure.
//!
//! The chain: invariance under `A^j + B_i` gives
//! `mu^(k A^j + k B_i) = mu^(k)` for `j in E`; averaging over `E` and using
//! ergodicity or mixing forces `mu^(k B_i) = 1` whenever `mu^(k) != 0`, and
//! then every atom lies in the finite set cut out by the rows `k B_i`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diagnostics::{exact_coeff, Diagnostic, DiagnosticsReport, Verdict};
use crate::algebraic::ExactValue;
use crate::error::{dim_err, Error, Result};
use crate::independence::{assess_family, default_box_bound, stacked, MatrixFamily, SiReport, Verdict as SiVerdict};
use crate::linalg::{IntMatrix, IntRowVector};
use crate::measures::{
    density, finite_support_candidates, fourier, is_invariant, pushforward, AtomicMeasure, DensityReport,
    FolnerSequence, FourierValue, IntegerSubset, MeasureSpec, TorusPointQ,
};

/// Empirical measure of `x0, A x0, ..., A^{N-1} x0`, weighted by visit counts.
pub fn orbit_measure(x0: &TorusPointQ, a: &IntMatrix, big_n: u64) -> Result<AtomicMeasure> {
    let n = x0.dim();
    if a.rows() != n || a.cols() != n {
        return dim_err(format!("matrix is {}x{} for a point of T^{n}", a.rows(), a.cols()));
    }
    if big_n == 0 {
        return Err(Error::Contract("orbit length must be at least 1".into()));
    }
    let q = x0.denominator();
    let mut counts: BTreeMap<Vec<BigInt>, u64> = BTreeMap::new();
    let mut c = x0.scaled(&q);
    for _ in 0..big_n {
        let next = a.apply_column(&c)?.into_iter().map(|v| v.mod_floor(&q)).collect();
        *counts.entry(std::mem::replace(&mut c, next)).or_default() += 1;
    }
    let total = BigInt::from(big_n);
    AtomicMeasure::from_weighted(counts.into_iter().map(|(c, m)| {
        (TorusPointQ::from_scaled(&c, &q), BigRational::new(m.into(), total.clone()))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiracCheck {
    pub is_dirac: bool,
    /// More than one atom although every tested pair passed weak mixing.
    pub contradiction_candidate: bool,
}

/// Weakly mixing invariant atomic measures are Dirac; flags inputs whose
/// finite weak-mixing evidence says otherwise.
pub fn dirac_check(mu: &AtomicMeasure, weak_mixing_evidence: &DiagnosticsReport) -> DiracCheck {
    let is_dirac = mu.is_dirac();
    let all_pass = weak_mixing_evidence.diagnostic == Diagnostic::WeakMixing
        && !weak_mixing_evidence.pairs.is_empty()
        && weak_mixing_evidence.pairs.iter().all(|p| p.verdict == Verdict::Pass);
    DiracCheck { is_dirac, contradiction_candidate: !is_dirac && all_pass }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityConfig {
    /// Largest sampled `j in E`.
    pub j_max: u64,
    /// Box bound for independence evidence; `None` uses the default.
    pub box_bound: Option<u64>,
    /// Number of Folner sets used for the density of `E`.
    pub density_n: u64,
}

impl Default for RigidityConfig {
    fn default() -> Self {
        Self { j_max: 64, box_bound: None, density_n: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCheck {
    pub j: u64,
    pub i: usize,
    pub invariant: bool,
    /// `mu^(k A^j + k B_i) = mu^(k)` exactly; `None` when too expensive.
    pub coefficient_identity: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub independence: SiVerdict,
    pub box_bound: u64,
    pub a_invariance: bool,
    pub j_max: u64,
    pub sampled_j: Vec<u64>,
    pub invariance: Vec<InvarianceCheck>,
    pub all_invariant: bool,
    pub e_density: DensityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub i: usize,
    pub row: IntRowVector,
    pub value: FourierValue,
    pub exact: Option<ExactValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierChain {
    pub witness: IntRowVector,
    pub witness_value: FourierValue,
    pub links: Vec<ChainLink>,
    pub all_exactly_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportBound {
    /// Linearly independent rows `k B_i` defining the bound.
    pub l: IntMatrix,
    pub candidates: Vec<TorusPointQ>,
    pub contains_support: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidityConclusion {
    Lebesgue,
    AtomicFinite,
    Dirac,
    InconsistentInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub hypotheses: Hypotheses,
    pub fourier_chain: FourierChain,
    pub support_bound: Option<SupportBound>,
    pub conclusion: RigidityConclusion,
    pub notes: Vec<String>,
}

fn invariant_under(mu: &MeasureSpec, c: &IntMatrix) -> Result<bool> {
    match mu {
        // a singular endomorphism maps onto a proper subtorus
        MeasureSpec::Lebesgue { .. } => Ok(!c.det()?.is_zero()),
        MeasureSpec::Atomic(m) => Ok(pushforward(m, c)? == *m),
    }
}

/// Greedy choice of `n` independent rows, in order.
fn independent_rows(rows: &IntMatrix) -> Result<Option<IntMatrix>> {
    let n = rows.cols();
    let mut chosen: Vec<BigInt> = Vec::new();
    let mut count = 0;
    for r in rows.to_rows() {
        let len = chosen.len();
        chosen.extend(r);
        if IntMatrix::new(count + 1, n, chosen.clone())?.rank_rational() == count + 1 {
            count += 1;
        } else {
            chosen.truncate(len);
        }
        if count == n {
            return Ok(Some(IntMatrix::new(n, n, chosen)?));
        }
    }
    Ok(None)
}

pub fn rigidity_harness(
    mu: &MeasureSpec,
    a: &IntMatrix,
    family: &MatrixFamily,
    e: &IntegerSubset,
    sigma: &FolnerSequence,
    witness_k: &IntRowVector,
    config: &RigidityConfig,
) -> Result<RigidityReport> {
    mu.validate()?;
    let n = mu.n();
    if a.rows() != n || a.cols() != n {
        return dim_err(format!("matrix is {}x{} for a measure on T^{n}", a.rows(), a.cols()));
    }
    if family.n() != n {
        return dim_err(format!("family acts on Z^{} but the measure lives on T^{n}", family.n()));
    }
    if witness_k.dim() != n {
        return dim_err(format!("witness has dimension {} instead of {n}", witness_k.dim()));
    }
    let box_bound = config.box_bound.unwrap_or_else(|| default_box_bound(n));
    let si: SiReport = assess_family(family, box_bound)?;
    if si.verdict == SiVerdict::Refuted {
        let k = si.box_evidence.counterexample.expect("refuted implies a counterexample");
        return Err(Error::Contract(format!(
            "the family is not strongly independent: k = {k:?} gives a singular stacked matrix"
        )));
    }
    let mut notes = Vec::new();

    let a_invariance = is_invariant(mu, a)?;
    let sampled_j = e.elements_up_to(config.j_max);
    let witness_exact = exact_coeff(mu, witness_k)?;
    let jobs: Vec<(u64, usize)> =
        sampled_j.iter().flat_map(|&j| (0..family.members().len()).map(move |i| (j, i))).collect();
    let invariance = jobs
        .par_iter()
        .map(|&(j, i)| {
            let c = a.pow(j)?.add(&family.members()[i])?;
            let invariant = invariant_under(mu, &c)?;
            let coefficient_identity = match (&witness_exact, exact_coeff(mu, &witness_k.mul_matrix(&c)?)?) {
                (Some(w), Some(v)) => Some(w.value_eq(&v)),
                _ => None,
            };
            Ok(InvarianceCheck { j, i, invariant, coefficient_identity })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_invariant = invariance.iter().all(|c| c.invariant);
    if sampled_j.is_empty() {
        notes.push(format!("E has no element <= {}; no invariance under A^j + B_i was sampled", config.j_max));
    }
    let e_density = density(e, sigma, config.density_n)?;

    let witness_value = fourier(mu, witness_k)?;
    let links = family
        .members()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let row = witness_k.mul_matrix(b)?;
            let value = fourier(mu, &row)?;
            let exact = exact_coeff(mu, &row)?.map(|v| v.exact());
            Ok(ChainLink { i, row, value, exact })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_exactly_one = links.iter().all(|l| l.value.exactly_one);
    let fourier_chain = FourierChain { witness: witness_k.clone(), witness_value, links, all_exactly_one };

    let support_bound = match (mu, all_exactly_one) {
        (MeasureSpec::Atomic(m), true) => {
            let rows = stacked(witness_k, family)?;
            match independent_rows(&rows)? {
                Some(l) => {
                    let candidates = finite_support_candidates(&l)?;
                    let contains_support = crate::measures::support_within(m, &candidates);
                    Some(SupportBound { l, candidates, contains_support })
                }
                None => {
                    notes.push("the rows k B_i have rank below n; no finite support bound".into());
                    None
                }
            }
        }
        _ => None,
    };

    let consistent = a_invariance && all_invariant;
    if !a_invariance {
        notes.push("the measure is not invariant under A".into());
    }
    if let Some(bad) = invariance.iter().find(|c| !c.invariant) {
        notes.push(format!("not invariant under A^{} + B_{}", bad.j, bad.i));
    }
    let conclusion = match mu {
        _ if !consistent => RigidityConclusion::InconsistentInput,
        MeasureSpec::Lebesgue { .. } => RigidityConclusion::Lebesgue,
        MeasureSpec::Atomic(m) => match &support_bound {
            Some(b) if b.contains_support => {
                if m.is_dirac() {
                    RigidityConclusion::Dirac
                } else {
                    RigidityConclusion::AtomicFinite
                }
            }
            Some(_) => {
                notes.push("an atom lies outside the support bound".into());
                RigidityConclusion::InconsistentInput
            }
            None if !all_exactly_one => {
                notes.push(if witness_value.exactly_zero {
                    "mu^(k) = 0 for the witness, so the chain forces nothing".into()
                } else {
                    "mu^(k) != 0 but some mu^(k B_i) != 1: the ergodicity or density hypotheses fail".into()
                });
                RigidityConclusion::InconsistentInput
            }
            None => RigidityConclusion::InconsistentInput,
        },
    };
    Ok(RigidityReport {
        hypotheses: Hypotheses {
            independence: si.verdict,
            box_bound,
            a_invariance,
            j_max: config.j_max,
            sampled_j,
            invariance,
            all_invariant,
            e_density,
        },
        fourier_chain,
        support_bound,
        conclusion,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::{m2, powers_family};
    use crate::mixing::diagnostics::{weak_mixing_average, DiagnosticsRequest, FrequencyPair};
    use crate::measures::Atom;

    fn pt(c: &[(i64, i64)]) -> TorusPointQ {
        TorusPointQ::from_i64(c)
    }

    #[test]
    fn orbit_measures() {
        let cat = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(orbit_measure(&TorusPointQ::origin(2), &cat, 10).unwrap().is_dirac());
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        let m = orbit_measure(&pt(&[(1, 3)]), &two, 4).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            m.atoms(),
            &[Atom { point: pt(&[(1, 3)]), weight: half.clone() }, Atom { point: pt(&[(2, 3)]), weight: half }]
        );
        // column orbit of (1, 0) mod 5: the cat map has order 10 on (Z/5)^2 here
        let mut c = vec![BigInt::from(1), BigInt::from(0)];
        let mut period = 0;
        loop {
            c = cat.apply_column(&c).unwrap().into_iter().map(|v| v.mod_floor(&BigInt::from(5))).collect();
            period += 1;
            if c == [BigInt::from(1), BigInt::from(0)] {
                break;
            }
        }
        let m = orbit_measure(&pt(&[(1, 5), (0, 1)]), &cat, 2 * period).unwrap();
        assert_eq!(m.atoms().len() as u64, period);
        assert!(is_invariant(&MeasureSpec::Atomic(m), &cat).unwrap());
    }

    fn harness(mu: MeasureSpec, e: IntegerSubset) -> RigidityReport {
        let a = m2(2).unwrap();
        let fam = powers_family(&a, 2).unwrap();
        let k = IntRowVector::from_i64(&[1, 0]);
        rigidity_harness(&mu, &a, &fam, &e, &FolnerSequence::Interval, &k, &RigidityConfig::default()).unwrap()
    }

    #[test]
    fn dirac_and_lebesgue() {
        let r = harness(MeasureSpec::Atomic(AtomicMeasure::dirac(TorusPointQ::origin(2))), IntegerSubset::All);
        assert_eq!(r.conclusion, RigidityConclusion::Dirac);
        assert_eq!(r.hypotheses.sampled_j.len(), 65);
        assert_eq!(r.hypotheses.invariance.len(), 130);
        assert!(r.fourier_chain.all_exactly_one);
        assert_eq!(r.support_bound.as_ref().unwrap().candidates, vec![TorusPointQ::origin(2)]);
        assert_eq!(r.fourier_chain.links[1].row, IntRowVector::from_i64(&[5, 3]));

        let r = harness(MeasureSpec::lebesgue(2).unwrap(), IntegerSubset::All);
        assert_eq!(r.conclusion, RigidityConclusion::Lebesgue);
        assert!(r.hypotheses.all_invariant);
        assert!(r.fourier_chain.links.iter().all(|l| l.value.exactly_zero));
        assert!(r.support_bound.is_none());
    }

    #[test]
    fn thirds_with_identity_family() {
        let mu = MeasureSpec::Atomic(AtomicMeasure::uniform(vec![pt(&[(1, 3)]), pt(&[(2, 3)])]).unwrap());
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        let fam = MatrixFamily::new(vec![IntMatrix::identity(1)]).unwrap();
        let k = IntRowVector::from_i64(&[1]);
        let cfg = RigidityConfig { j_max: 10, ..Default::default() };
        let run = |e: IntegerSubset| {
            rigidity_harness(&mu, &two, &fam, &e, &FolnerSequence::Interval, &k, &cfg).unwrap()
        };
        let r = run(IntegerSubset::All);
        let pattern: Vec<bool> = r.hypotheses.invariance.iter().map(|c| c.invariant).collect();
        // 2^j + 1 mod 3 is 2 for even j and 0 for odd j
        assert_eq!(pattern, (0..=10).map(|j| j % 2 == 0).collect::<Vec<_>>());
        assert_eq!(r.conclusion, RigidityConclusion::InconsistentInput);

        let r = run(IntegerSubset::progression(0, 2).unwrap());
        assert!(r.hypotheses.all_invariant);
        // mu^(1) = -1/2: the chain does not close, so the rigidity hypotheses fail
        assert!(!r.fourier_chain.all_exactly_one);
        assert_eq!(r.conclusion, RigidityConclusion::InconsistentInput);
    }

    #[test]
    fn refuted_family_is_rejected() {
        let a = m2(2).unwrap();
        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let fam = MatrixFamily::new(vec![shear.clone(), shear]).unwrap();
        let mu = MeasureSpec::lebesgue(2).unwrap();
        let k = IntRowVector::from_i64(&[1, 0]);
        let r = rigidity_harness(&mu, &a, &fam, &IntegerSubset::All, &FolnerSequence::Interval, &k, &RigidityConfig::default());
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn dirac_check_flags() {
        let d = AtomicMeasure::dirac(pt(&[(1, 7), (2, 7)]));
        let thirds = AtomicMeasure::uniform(vec![pt(&[(1, 3)]), pt(&[(2, 3)])]).unwrap();
        let req = DiagnosticsRequest {
            measure: MeasureSpec::Atomic(thirds.clone()),
            matrix: IntMatrix::from_rows(&[vec![2]]).unwrap(),
            pairs: vec![FrequencyPair::new(&[1], &[1])],
            folner: FolnerSequence::Interval,
            n_max: 10,
        };
        let mut rep = weak_mixing_average(&req).unwrap();
        assert_eq!(dirac_check(&d, &rep), DiracCheck { is_dirac: true, contradiction_candidate: false });
        assert_eq!(dirac_check(&thirds, &rep), DiracCheck { is_dirac: false, contradiction_candidate: false });
        rep.pairs[0].verdict = Verdict::Pass;
        assert_eq!(dirac_check(&thirds, &rep), DiracCheck { is_dirac: false, contradiction_candidate: true });
    }
}
