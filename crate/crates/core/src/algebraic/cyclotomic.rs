//! Cyclotomic polynomials, Euler's totient and the minimal polynomials of
//! `2cos(2pi/m)` that generate the maximal real subfields.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::RatPolynomial;
use crate::error::{Error, Result};

/// Positive divisors of `m` in ascending order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(m: u64) -> bool {
    m >= 2 && factorize(m) == [(m, 1)]
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi needs m >= 1");
    factorize(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1))
}

/// The `m`-th cyclotomic polynomial, obtained by dividing `x^m - 1` by
/// `Phi_d` for every proper divisor `d` of `m`.
/// Results are memoized process-wide.
pub fn cyclotomic_poly(m: u64) -> RatPolynomial {
    assert!(m >= 1, "cyclotomic_poly needs m >= 1");
    static CACHE: OnceLock<Mutex<HashMap<u64, RatPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache poisoned").get(&m) {
        return p.clone();
    }
    let mut table: BTreeMap<u64, RatPolynomial> = BTreeMap::new();
    for d in divisors(m) {
        let mut p = x_pow_minus_one(d);
        for e in divisors(d) {
            if e == d {
                continue;
            }
            p = p.exact_div(&table[&e]).expect("Phi_e divides x^d - 1");
        }
        table.insert(d, p);
    }
    let mut guard = cache.lock().expect("cache poisoned");
    for (d, p) in &table {
        guard.entry(*d).or_insert_with(|| p.clone());
    }
    table.remove(&m).expect("m divides itself")
}

fn x_pow_minus_one(d: u64) -> RatPolynomial {
    let mut coeffs = vec![BigRational::zero(); d as usize + 1];
    coeffs[0] = -BigRational::one();
    coeffs[d as usize] = BigRational::one();
    RatPolynomial::new(coeffs)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Minimal polynomial `psi_m` of `2cos(2pi/m)` for `m >= 3`.
///
/// Solves `Phi_m(z) = z^d psi_m(z + 1/z)`, `d = phi(m)/2`, for the
/// coefficients of `psi_m`. Matching the coefficients of `z^{2d}` down to
/// `z^d` gives a unit upper-triangular system; the lower half of the
/// identity is then checked as well.
pub fn real_cyclotomic_minpoly(m: u64) -> Result<RatPolynomial> {
    if m < 3 {
        return Err(Error::Domain(format!("real cyclotomic minpoly needs m >= 3, got {m}")));
    }
    let phi = cyclotomic_poly(m);
    let d = phi.degree().expect("nonzero") / 2;
    let mut c = vec![BigRational::zero(); d + 1];
    for t in (0..=d).rev() {
        let mut v = phi.coeff(d + t);
        for i in (t + 2..=d).step_by(2) {
            v -= &c[i] * BigRational::from_integer(binomial(i, (i - t) / 2));
        }
        c[t] = v;
    }
    let psi = RatPolynomial::new(c);
    for t in 0..=2 * d {
        // coefficient of z^t in z^d psi(z + 1/z)
        let mut v = BigRational::zero();
        for (i, ci) in psi.coeffs().iter().enumerate() {
            // z^{d + i - 2j} = z^t  =>  j = (d + i - t) / 2
            let s = d + i;
            if s < t || (s - t) % 2 != 0 || (s - t) / 2 > i {
                continue;
            }
            v += ci * BigRational::from_integer(binomial(i, (s - t) / 2));
        }
        if v != phi.coeff(t) {
            return Err(Error::Contract(format!(
                "coefficient matching against Phi_{m} failed at z^{t}"
            )));
        }
    }
    Ok(psi)
}

/// Minimal polynomial of `2cos(2pi/m)` for every `m >= 1`.
pub(crate) fn two_cos_minpoly(m: u64) -> RatPolynomial {
    match m {
        1 => RatPolynomial::from_i64(&[-2, 1]),
        2 => RatPolynomial::from_i64(&[2, 1]),
        _ => real_cyclotomic_minpoly(m).expect("m >= 3"),
    }
}

/// Minimal polynomial of `2 + 2cos(2k pi/m)`, i.e. `psi_{m/gcd(k,m)}(x - 2)`.
pub fn minpoly_of_shifted_cos(m: u64, k: u64) -> Result<RatPolynomial> {
    if m < 3 {
        return Err(Error::Domain(format!("modulus must be at least 3, got {m}")));
    }
    if k == 0 || k >= m {
        return Err(Error::Domain(format!("k must lie in 1..={}, got {k}", m - 1)));
    }
    let reduced = m / k.gcd(&m);
    Ok(two_cos_minpoly(reduced).shift(&BigRational::from_integer((-2).into())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicDegreeReport {
    pub m: u64,
    pub deg_cyclotomic: usize,
    pub phi: u64,
    pub equal: bool,
}

/// Compares `deg Phi_m` with `phi(m)`.
pub fn degree_check_cyclotomic(m: u64) -> CyclotomicDegreeReport {
    let deg = cyclotomic_poly(m).degree().expect("nonzero");
    let phi = euler_phi(m);
    CyclotomicDegreeReport { m, deg_cyclotomic: deg, phi, equal: deg as u64 == phi }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSubfieldDegreeReport {
    pub m: u64,
    pub deg_real: usize,
    pub half_phi: u64,
    pub equal: bool,
}

/// Compares `deg psi_m` with `phi(m)/2`.
pub fn degree_check_real_subfield(m: u64) -> Result<RealSubfieldDegreeReport> {
    let deg = real_cyclotomic_minpoly(m)?.degree().expect("nonzero");
    let half_phi = euler_phi(m) / 2;
    Ok(RealSubfieldDegreeReport { m, deg_real: deg, half_phi, equal: deg as u64 == half_phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1), RatPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(5), RatPolynomial::from_i64(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_poly(6), RatPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), RatPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_poly(105).coeffs().iter().any(|c| c.numer() == &BigInt::from(-2)));
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(9), 6);
        // brute-force count
        for m in 1..200u64 {
            let count = (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64;
            assert_eq!(euler_phi(m), count, "m = {m}");
        }
    }

    #[test]
    fn real_minpoly_examples() {
        assert_eq!(real_cyclotomic_minpoly(5).unwrap(), RatPolynomial::from_i64(&[-1, 1, 1]));
        assert_eq!(real_cyclotomic_minpoly(3).unwrap(), RatPolynomial::from_i64(&[1, 1]));
        assert_eq!(real_cyclotomic_minpoly(7).unwrap(), RatPolynomial::from_i64(&[-1, -2, 1, 1]));
        assert!(matches!(real_cyclotomic_minpoly(2), Err(Error::Domain(_))));
    }

    #[test]
    fn real_minpoly_numeric_root() {
        for m in 3..=50u64 {
            let psi = real_cyclotomic_minpoly(m).unwrap();
            let v = psi.eval_f64(2.0 * (TAU / m as f64).cos());
            assert!(v.abs() < 1e-9, "m = {m}: {v}");
            assert!(psi.is_monic() && psi.has_integer_coeffs());
        }
    }

    #[test]
    fn degree_reports() {
        assert_eq!(
            degree_check_cyclotomic(5),
            CyclotomicDegreeReport { m: 5, deg_cyclotomic: 4, phi: 4, equal: true }
        );
        assert_eq!(
            degree_check_cyclotomic(1),
            CyclotomicDegreeReport { m: 1, deg_cyclotomic: 1, phi: 1, equal: true }
        );
        assert_eq!(degree_check_cyclotomic(12).deg_cyclotomic, 4);
        let r = degree_check_real_subfield(5).unwrap();
        assert_eq!((r.deg_real, r.half_phi, r.equal), (2, 2, true));
        let r = degree_check_real_subfield(3).unwrap();
        assert_eq!((r.deg_real, r.half_phi, r.equal), (1, 1, true));
        let r = degree_check_real_subfield(11).unwrap();
        assert_eq!((r.deg_real, r.half_phi, r.equal), (5, 5, true));
    }

    #[test]
    fn shifted_cos_examples() {
        assert_eq!(minpoly_of_shifted_cos(5, 1).unwrap(), RatPolynomial::from_i64(&[1, -3, 1]));
        assert_eq!(minpoly_of_shifted_cos(3, 1).unwrap(), RatPolynomial::from_i64(&[-1, 1]));
        assert_eq!(minpoly_of_shifted_cos(9, 3).unwrap(), RatPolynomial::from_i64(&[-1, 1]));
        // 2 + 2cos(pi) = 0
        assert_eq!(minpoly_of_shifted_cos(4, 2).unwrap(), RatPolynomial::x());
        assert!(minpoly_of_shifted_cos(5, 0).is_err());
        assert!(minpoly_of_shifted_cos(5, 5).is_err());
        for m in 3..=50u64 {
            for k in 1..m {
                let p = minpoly_of_shifted_cos(m, k).unwrap();
                let x = 2.0 + 2.0 * (TAU * k as f64 / m as f64).cos();
                assert!(p.eval_f64(x).abs() < 1e-9, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn factorization_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(10007) && !is_prime(9) && !is_prime(1));
    }
}
