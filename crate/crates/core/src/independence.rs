//! Strong independence of `n` unimodular `n x n` matrices: for every nonzero
//! integer row vector `k`, the rows `k B_1, ..., k B_n` must be linearly
//! independent.
//!
//! Independence of integer vectors over R is equivalent to the stacked
//! integer matrix having nonzero determinant, so every check here is exact.
//! [`prove_powers_m2`] certifies the powers of `M_n(2)` through minimal
//! polynomial degrees of its eigenvalues; [`box_check`] collects finite
//! evidence for arbitrary families.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{euler_phi, is_prime, minpoly_of_shifted_cos};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{stack_rows, IntMatrix, IntRowVector};
use crate::tridiagonal::{char_poly_m2, make_matrix, TridiagSpec, Variant};

/// `n` members of `GL(n, Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixFamily {
    n: usize,
    members: Vec<IntMatrix>,
}

impl MatrixFamily {
    pub fn new(members: Vec<IntMatrix>) -> Result<Self> {
        let n = members.len();
        if n == 0 {
            return dim_err("a family needs at least one member");
        }
        for (i, m) in members.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return dim_err(format!(
                    "member {i} is {}x{}, expected {n}x{n} for a family of {n}",
                    m.rows(),
                    m.cols()
                ));
            }
            let det = m.det()?;
            if !det.abs().is_one() {
                return Err(Error::Contract(format!(
                    "member {i} has determinant {det}, not in GL({n}, Z)"
                )));
            }
        }
        Ok(Self { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[IntMatrix] {
        &self.members
    }
}

impl<'de> Deserialize<'de> for MatrixFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            members: Vec<IntMatrix>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.n != raw.members.len() {
            return Err(serde::de::Error::custom(format!(
                "n = {} but {} members given",
                raw.n,
                raw.members.len()
            )));
        }
        MatrixFamily::new(raw.members).map_err(serde::de::Error::custom)
    }
}

/// The stacked matrix `[k B_1; ...; k B_n]`.
pub fn stacked(k: &IntRowVector, fam: &MatrixFamily) -> Result<IntMatrix> {
    if k.dim() != fam.n {
        return dim_err(format!("vector of dim {} for a family of size {}", k.dim(), fam.n));
    }
    let rows = fam
        .members
        .iter()
        .map(|b| k.mul_matrix(b))
        .collect::<Result<Vec<_>>>()?;
    stack_rows(&rows)
}

/// True iff `k B_1, ..., k B_n` are linearly independent.
pub fn check_vector(k: &IntRowVector, fam: &MatrixFamily) -> Result<bool> {
    if k.dim() != fam.n {
        return dim_err(format!("vector of dim {} for a family of size {}", k.dim(), fam.n));
    }
    if k.is_zero() {
        return Err(Error::Contract("k must be nonzero".into()));
    }
    Ok(!stacked(k, fam)?.det()?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxReport {
    pub bound: u64,
    pub all_pass: bool,
    pub counterexample: Option<IntRowVector>,
    pub vectors_tested: u64,
}

/// The `index`-th vector of `[-K, K]^n` in lexicographic order.
fn box_vector(mut index: u64, n: usize, bound: u64) -> IntRowVector {
    let side = 2 * bound + 1;
    let mut digits = vec![BigInt::zero(); n];
    for slot in digits.iter_mut().rev() {
        *slot = BigInt::from(index % side) - BigInt::from(bound);
        index /= side;
    }
    IntRowVector::new(digits).expect("n >= 1")
}

/// Tests every nonzero `k` in `[-K, K]^n` in lexicographic order starting
/// at `(-K, ..., -K)`. The box is searched in parallel; the reported
/// counterexample is always the lexicographically first one.
pub fn box_check(fam: &MatrixFamily, bound: u64) -> Result<BoxReport> {
    if bound == 0 {
        return Err(Error::Contract("box bound K must be at least 1".into()));
    }
    let n = fam.n;
    let side = 2 * bound + 1;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(side)).ok_or_else(|| {
        Error::Limit(format!("box [-{bound},{bound}]^{n} is too large to enumerate"))
    })?;
    // The zero vector sits exactly in the middle of the lexicographic order.
    let zero_index = total / 2;
    let failure = (0..total).into_par_iter().find_first(|&i| {
        i != zero_index && {
            let k = box_vector(i, n, bound);
            !stacked(&k, fam)
                .and_then(|s| s.det())
                .map(|d| !d.is_zero())
                .unwrap_or(false)
        }
    });
    Ok(match failure {
        Some(i) => BoxReport {
            bound,
            all_pass: false,
            counterexample: Some(box_vector(i, n, bound)),
            vectors_tested: if i > zero_index { i } else { i + 1 },
        },
        None => BoxReport { bound, all_pass: true, counterexample: None, vectors_tested: total - 1 },
    })
}

/// Box size used when none is given: 10 for `n <= 3`, 3 otherwise.
pub fn default_box_bound(n: usize) -> u64 {
    if n <= 3 {
        10
    } else {
        3
    }
}

/// The family `(B, B^2, ..., B^n)`.
pub fn powers_family(b: &IntMatrix, n: usize) -> Result<MatrixFamily> {
    if b.rows() != n || b.cols() != n {
        return dim_err(format!("expected a {n}x{n} matrix, got {}x{}", b.rows(), b.cols()));
    }
    if !b.det()?.abs().is_one() {
        return Err(Error::Contract("B must be unimodular".into()));
    }
    let mut members = Vec::with_capacity(n);
    let mut p = b.clone();
    for _ in 0..n {
        let next = p.mul(b)?;
        members.push(std::mem::replace(&mut p, next));
    }
    MatrixFamily::new(members)
}

/// The matrix `M_n(2)`.
pub fn m2(n: usize) -> Result<IntMatrix> {
    make_matrix(&TridiagSpec::with_int(n, 2, Variant::M)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Proven,
    NotProven,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiCertificate {
    pub family_descriptor: String,
    pub n: usize,
    pub prime_modulus: u64,
    pub modulus_is_prime: bool,
    /// Degree of the minimal polynomial of `2 + 2cos(2k pi/(2n+1))`, for `k = 1..n`.
    pub per_eigenvalue_degrees: Vec<usize>,
    pub minpolys_divide_charpoly: bool,
    pub conclusion: Conclusion,
    pub notes: Vec<String>,
}

/// Certificate for strong independence of `M_n(2), M_n(2)^2, ..., M_n(2)^n`.
///
/// `M_n(2)` is symmetric, so its eigenvectors are pairwise orthogonal and the
/// span of any `n - 1` of them is the orthogonal complement of the last.
/// An integer vector in that complement yields a rational polynomial of
/// degree `n - 1` vanishing at the remaining eigenvalue, which is impossible
/// when every eigenvalue has a minimal polynomial of degree `n`. The degree
/// is `phi(2n+1)/2 = n` exactly when `2n + 1` is prime.
pub fn prove_powers_m2(n: usize) -> Result<SiCertificate> {
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    let modulus = 2 * n as u64 + 1;
    let prime = is_prime(modulus);
    let charpoly = char_poly_m2(n)?;
    let mut degrees = Vec::with_capacity(n);
    let mut divides = true;
    let mut notes = vec![
        format!("M_{n}(2) is symmetric with det 1, so its powers lie in GL({n}, Z)"),
        "eigenvectors of a symmetric matrix with distinct eigenvalues are pairwise orthogonal"
            .to_string(),
        "the span of any n-1 eigenvectors is the orthogonal complement of the remaining one"
            .to_string(),
        "an integer vector in that span gives a degree n-1 rational polynomial vanishing at \
         the remaining eigenvalue"
            .to_string(),
    ];
    for k in 1..=n as u64 {
        let mp = minpoly_of_shifted_cos(modulus, k)?;
        let deg = mp.degree().expect("nonzero");
        divides &= mp.divides(&charpoly);
        if deg < n {
            let value = 2.0 + 2.0 * (std::f64::consts::TAU * k as f64 / modulus as f64).cos();
            notes.push(format!(
                "eigenvalue 2+2cos({}pi/{modulus}) ~ {value:.6} has minimal polynomial {mp} of \
                 degree {deg} < {n}",
                2 * k
            ));
        }
        degrees.push(deg);
    }
    let all_full = degrees.iter().all(|&d| d == n);
    let conclusion = if prime && all_full && divides {
        notes.push(format!(
            "{modulus} is prime: every eigenvalue has degree phi({modulus})/2 = {}, so no such \
             polynomial exists and the powers are strongly independent",
            euler_phi(modulus) / 2
        ));
        Conclusion::Proven
    } else {
        if !prime {
            notes.push(format!("{modulus} is composite; the degree argument does not apply"));
        }
        Conclusion::NotProven
    };
    Ok(SiCertificate {
        family_descriptor: format!("powers 1..{n} of M_{n}(2)"),
        n,
        prime_modulus: modulus,
        modulus_is_prime: prime,
        per_eigenvalue_degrees: degrees,
        minpolys_divide_charpoly: divides,
        conclusion,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proven,
    EvidenceOnly,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiReport {
    pub n: usize,
    pub box_evidence: BoxReport,
    pub certificate: Option<SiCertificate>,
    pub certificate_applies: bool,
    pub verdict: Verdict,
}

/// Merges box evidence with an optional certificate. The certificate only
/// counts when the family is exactly the powers of `M_n(2)` it describes.
pub fn si_report(fam: &MatrixFamily, bound: u64, cert: Option<SiCertificate>) -> Result<SiReport> {
    let box_evidence = box_check(fam, bound)?;
    let certificate_applies = match &cert {
        Some(c) => c.n == fam.n && powers_family(&m2(fam.n)?, fam.n)? == *fam,
        None => false,
    };
    let verdict = if !box_evidence.all_pass {
        Verdict::Refuted
    } else if certificate_applies
        && cert.as_ref().is_some_and(|c| c.conclusion == Conclusion::Proven)
    {
        Verdict::Proven
    } else {
        Verdict::EvidenceOnly
    };
    Ok(SiReport { n: fam.n, box_evidence, certificate: cert, certificate_applies, verdict })
}

/// Box evidence plus, for powers of `M_n(2)`, the degree certificate.
pub fn assess_family(fam: &MatrixFamily, bound: u64) -> Result<SiReport> {
    let cert = if powers_family(&m2(fam.n)?, fam.n)? == *fam {
        Some(prove_powers_m2(fam.n)?)
    } else {
        None
    };
    si_report(fam, bound, cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn shear_family() -> MatrixFamily {
        MatrixFamily::new(vec![IntMatrix::identity(2), mat(&[&[1, 1], &[0, 1]])]).unwrap()
    }

    #[test]
    fn family_validation() {
        let r = MatrixFamily::new(vec![IntMatrix::scalar(2, 2), IntMatrix::identity(2)]);
        assert!(matches!(r, Err(Error::Contract(_))));
        let r = MatrixFamily::new(vec![IntMatrix::identity(2)]);
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn check_vector_examples() {
        let fam = powers_family(&m2(2).unwrap(), 2).unwrap();
        assert!(check_vector(&IntRowVector::from_i64(&[1, 0]), &fam).unwrap());
        assert!(!check_vector(&IntRowVector::from_i64(&[0, 1]), &shear_family()).unwrap());
        let r = check_vector(&IntRowVector::from_i64(&[0, 0]), &fam);
        assert!(matches!(r, Err(Error::Contract(_))));
        let r = check_vector(&IntRowVector::from_i64(&[1, 0, 0]), &fam);
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn box_examples() {
        let fam = powers_family(&m2(2).unwrap(), 2).unwrap();
        let r = box_check(&fam, 10).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.vectors_tested, 440);
        let r = box_check(&shear_family(), 1).unwrap();
        assert!(!r.all_pass);
        // det [k; kS] = k_1^2, so the first failure has k_1 = 0
        assert_eq!(r.counterexample, Some(IntRowVector::from_i64(&[0, -1])));
        assert_eq!(r.vectors_tested, 4);
        let one = MatrixFamily::new(vec![m2(1).unwrap()]).unwrap();
        let r = box_check(&one, 5).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.vectors_tested, 10);
    }

    #[test]
    fn box_vector_order() {
        assert_eq!(box_vector(0, 2, 1), IntRowVector::from_i64(&[-1, -1]));
        assert_eq!(box_vector(4, 2, 1), IntRowVector::from_i64(&[0, 0]));
        assert_eq!(box_vector(8, 2, 1), IntRowVector::from_i64(&[1, 1]));
    }

    #[test]
    fn powers_family_examples() {
        let fam = powers_family(&m2(2).unwrap(), 2).unwrap();
        assert_eq!(fam.members(), &[mat(&[&[2, 1], &[1, 1]]), mat(&[&[5, 3], &[3, 2]])]);
        let id = powers_family(&IntMatrix::identity(2), 2).unwrap();
        assert!(!check_vector(&IntRowVector::from_i64(&[1, 0]), &id).unwrap());
        let b3 = m2(3).unwrap();
        let fam = powers_family(&b3, 3).unwrap();
        assert_eq!(fam.members()[2], b3.pow(3).unwrap());
        assert!(powers_family(&IntMatrix::scalar(2, 2), 2).is_err());
    }

    #[test]
    fn certificate_examples() {
        let c = prove_powers_m2(2).unwrap();
        assert_eq!((c.prime_modulus, c.per_eigenvalue_degrees.clone()), (5, vec![2, 2]));
        assert_eq!(c.conclusion, Conclusion::Proven);
        let c = prove_powers_m2(3).unwrap();
        assert_eq!(c.per_eigenvalue_degrees, vec![3, 3, 3]);
        assert_eq!(c.conclusion, Conclusion::Proven);
        let c = prove_powers_m2(4).unwrap();
        assert_eq!(c.prime_modulus, 9);
        assert_eq!(c.conclusion, Conclusion::NotProven);
        assert!(c.notes.iter().any(|s| s.contains("degree 1")));
        assert!(c.minpolys_divide_charpoly);
    }

    #[test]
    fn report_verdicts() {
        let fam = powers_family(&m2(2).unwrap(), 2).unwrap();
        let r = si_report(&fam, 10, Some(prove_powers_m2(2).unwrap())).unwrap();
        assert_eq!(r.verdict, Verdict::Proven);
        let r = si_report(&shear_family(), 2, None).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert!(r.box_evidence.counterexample.is_some());
        let fam4 = powers_family(&m2(4).unwrap(), 4).unwrap();
        let r = si_report(&fam4, 3, Some(prove_powers_m2(4).unwrap())).unwrap();
        // eigenvalue 1 has the integer eigenvector (1,-1,0,1), fixed by every power
        assert_eq!(r.verdict, Verdict::Refuted);
        assert!(!check_vector(&IntRowVector::from_i64(&[1, -1, 0, 1]), &fam4).unwrap());
        let fam5 = powers_family(&m2(5).unwrap(), 5).unwrap();
        let r = si_report(&fam5, 1, Some(prove_powers_m2(5).unwrap())).unwrap();
        assert_eq!(r.verdict, Verdict::Proven);
        let r = si_report(&fam5, 1, None).unwrap();
        assert_eq!(r.verdict, Verdict::EvidenceOnly);
        assert_eq!(r.box_evidence.vectors_tested, 3u64.pow(5) - 1);
        // a proven certificate does not transfer to an unrelated family
        let other = MatrixFamily::new(vec![mat(&[&[2, 1], &[1, 1]]), mat(&[&[1, 1], &[1, 0]])]).unwrap();
        let r = si_report(&other, 1, Some(prove_powers_m2(2).unwrap())).unwrap();
        assert!(!r.certificate_applies);
        assert_ne!(r.verdict, Verdict::Proven);
    }
}
