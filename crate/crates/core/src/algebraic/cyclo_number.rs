//! Exact finite sums of roots of unity with rational weights.
//!
//! A [`CyclotomicNumber`] stores `sum_a w_a zeta_N^a` as a sparse map from
//! exponents mod `N` to weights. Arithmetic happens in the group ring
//! `Q[Z/N]`; equality of values is decided by reducing modulo the
//! cyclotomic polynomial `Phi_N`, which is the kernel of evaluation at
//! `zeta_N`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{cyclotomic_poly, RatPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    terms: BTreeMap<u64, BigRational>,
}

/// Exact value of a [`CyclotomicNumber`] in canonical form: a rational when
/// the value is rational, otherwise coordinates in the power basis
/// `1, zeta, ..., zeta^{phi(order)-1}` of the smallest order the exponents
/// allow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Rational(#[serde(with = "crate::literal::rational")] BigRational),
    Cyclotomic {
        order: u64,
        #[serde(with = "crate::literal::rational_vec")]
        power_basis: Vec<BigRational>,
    },
}

impl ExactValue {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactValue::Rational(q) => Some(q),
            ExactValue::Cyclotomic { .. } => None,
        }
    }
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self { order: 1, terms: BTreeMap::new() }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_terms(1, [(0, q)])
    }

    /// `zeta_order^exponent`.
    pub fn root_of_unity(order: u64, exponent: u64) -> Self {
        Self::from_terms(order, [(exponent, BigRational::from_integer(1.into()))])
    }

    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        assert!(order >= 1, "order must be positive");
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (a, w) in terms {
            *map.entry(a % order).or_insert_with(BigRational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        Self { order, terms: map }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    /// Rewrites the number over `zeta_order` where `self.order | order`.
    pub fn lift(&self, order: u64) -> Self {
        assert!(order % self.order == 0, "lift to a non-multiple order");
        let f = order / self.order;
        Self {
            order,
            terms: self.terms.iter().map(|(a, w)| (a * f, w.clone())).collect(),
        }
    }

    /// Smallest order compatible with the exponents present.
    pub fn simplify(&self) -> Self {
        let g = self.terms.keys().fold(self.order, |g, a| g.gcd(a));
        if g <= 1 {
            return self.clone();
        }
        Self {
            order: self.order / g,
            terms: self.terms.iter().map(|(a, w)| (a / g, w.clone())).collect(),
        }
    }

    /// Complex conjugate: `zeta^a -> zeta^{-a}`.
    pub fn conj(&self) -> Self {
        Self::from_terms(
            self.order,
            self.terms.iter().map(|(a, w)| ((self.order - a) % self.order, w.clone())),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.order, self.terms.iter().map(|(a, w)| (*a, w * c)))
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (a, w)| {
            let angle = TAU * (*a as f64) / (self.order as f64);
            acc + Complex64::from_polar(w.to_f64().unwrap_or(f64::NAN), angle)
        })
    }

    /// Coordinates in the power basis after reduction modulo `Phi_order`.
    pub fn power_basis(&self) -> (u64, Vec<BigRational>) {
        let s = self.simplify();
        if s.terms.is_empty() {
            return (1, vec![BigRational::zero()]);
        }
        let phi = cyclotomic_poly(s.order);
        let deg = phi.degree().expect("nonzero");
        let mut coeffs = vec![BigRational::zero(); s.order as usize];
        for (a, w) in &s.terms {
            coeffs[*a as usize] = w.clone();
        }
        let r = RatPolynomial::new(coeffs).rem(&phi).expect("nonzero modulus");
        (s.order, (0..deg).map(|i| r.coeff(i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.power_basis().1.iter().all(Zero::is_zero)
    }

    /// The value if it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        let (_, coords) = self.power_basis();
        coords[1..].iter().all(Zero::is_zero).then(|| coords[0].clone())
    }

    pub fn exact(&self) -> ExactValue {
        let (order, coords) = self.power_basis();
        if coords[1..].iter().all(Zero::is_zero) {
            ExactValue::Rational(coords[0].clone())
        } else {
            ExactValue::Cyclotomic { order, power_basis: coords }
        }
    }

    /// Equality of the represented complex numbers.
    pub fn value_eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    fn common_order(&self, other: &Self) -> u64 {
        self.order.lcm(&other.order)
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let n = self.common_order(rhs);
        let (a, b) = (self.lift(n), rhs.lift(n));
        CyclotomicNumber::from_terms(n, a.terms.into_iter().chain(b.terms))
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            terms: self.terms.iter().map(|(a, w)| (*a, -w)).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let n = self.common_order(rhs);
        let (a, b) = (self.lift(n), rhs.lift(n));
        let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (x, wx) in &a.terms {
            for (y, wy) in &b.terms {
                out.push(((x + y) % n, wx * wy));
            }
        }
        CyclotomicNumber::from_terms(n, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sums_of_roots_of_unity() {
        // (zeta_3 + zeta_3^2)/2 = -1/2
        let v = CyclotomicNumber::from_terms(3, [(1, q(1, 2)), (2, q(1, 2))]);
        assert_eq!(v.as_rational(), Some(q(-1, 2)));
        // full orbit of 5th roots sums to zero
        let v = CyclotomicNumber::from_terms(5, (0..5).map(|a| (a, q(1, 5))));
        assert!(v.is_zero());
        // 1 + zeta_4^2 = 0
        assert!(CyclotomicNumber::from_terms(4, [(0, q(1, 1)), (2, q(1, 1))]).is_zero());
        // zeta_5 is not rational
        let z = CyclotomicNumber::root_of_unity(5, 1);
        assert!(z.as_rational().is_none());
        assert!(matches!(z.exact(), ExactValue::Cyclotomic { order: 5, .. }));
    }

    #[test]
    fn mixed_orders_and_conjugation() {
        let a = CyclotomicNumber::root_of_unity(2, 1); // -1
        let b = CyclotomicNumber::root_of_unity(3, 1);
        let prod = &(&a * &b) * &b.conj();
        assert_eq!(prod.as_rational(), Some(q(-1, 1)));
        let z = CyclotomicNumber::root_of_unity(7, 3);
        assert_eq!((&z * &z.conj()).as_rational(), Some(q(1, 1)));
        // zeta_6^2 simplifies to zeta_3
        assert_eq!(CyclotomicNumber::root_of_unity(6, 2).simplify().order(), 3);
    }

    #[test]
    fn complex_approximation() {
        let v = CyclotomicNumber::from_terms(4, [(1, q(1, 2)), (0, q(1, 2))]);
        let c = v.to_complex();
        assert!((c.re - 0.5).abs() < 1e-15 && (c.im - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_value_json() {
        let v = CyclotomicNumber::rational(q(9, 16)).exact();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#""9/16""#);
        let z = CyclotomicNumber::root_of_unity(3, 1).exact();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"order":3,"power_basis":["0","1"]}"#);
        assert_eq!(serde_json::from_str::<ExactValue>(&s).unwrap(), z);
    }
}
