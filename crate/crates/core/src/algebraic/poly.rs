use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::literal::{fmt_rational, RatLit};

/// Univariate polynomial over the rationals, coefficients in ascending
/// degree order with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Polynomial long division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPolynomial) -> Result<(RatPolynomial, RatPolynomial)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Domain("division by the zero polynomial".into()));
        };
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        // Skip zero coefficients of the divisor; cyclotomic divisors are sparse.
        let support: Vec<(usize, &BigRational)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for top in (dd..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let factor = &rem[top] * &lead_inv;
            let shift = top - dd;
            for &(i, c) in &support {
                let t = &factor * c;
                rem[shift + i] -= t;
            }
            quot[shift] = factor;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &RatPolynomial) -> Result<RatPolynomial> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &RatPolynomial) -> Result<RatPolynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Contract(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &RatPolynomial) -> bool {
        other.rem(self).is_ok_and(|r| r.is_zero())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Compensated Horner evaluation in double precision. The result is as
    /// accurate as plain Horner run in twice the working precision, which
    /// matters for high-degree polynomials with large coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut s = 0.0f64;
        let mut err = 0.0f64;
        for c in self.coeffs.iter().rev() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let p = s * x;
            let p_err = s.mul_add(x, -p);
            let t = p + c;
            let z = t - p;
            let t_err = (p - (t - z)) + (c - z);
            s = t;
            err = err.mul_add(x, p_err + t_err);
        }
        s + err
    }

    /// `p(x + c)`, expanded exactly.
    pub fn shift(&self, c: &BigRational) -> Self {
        let lin = Self::new(vec![c.clone(), BigRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| &(&acc * &lin) + &Self::constant(a.clone()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPolynomial) -> RatPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &RatPolynomial) -> (RatPolynomial, RatPolynomial, RatPolynomial) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Integer polynomial with the same roots: multiplies by the lcm of
    /// the denominators and removes the content.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// Rational roots found by the rational root theorem, or `None` when the
    /// candidate set is too large to enumerate (constant or leading term
    /// beyond 10^12 in absolute value).
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        let ints = self.primitive_integer_coeffs();
        if ints.len() < 2 {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        let mut low = 0;
        while ints[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(BigRational::zero());
        }
        let a0 = ints[low].abs().to_u64().filter(|&v| v <= 1_000_000_000_000)?;
        let an = ints.last()?.abs().to_u64().filter(|&v| v <= 1_000_000_000_000)?;
        let reduced = Self::from_ints(&ints[low..]);
        for p in small_divisors(a0) {
            for q in small_divisors(an) {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(p) * sign, BigInt::from(q));
                    if reduced.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Some(roots)
    }
}

fn small_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

impl Add for &RatPolynomial {
    type Output = RatPolynomial;
    fn add(self, rhs: &RatPolynomial) -> RatPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPolynomial {
    type Output = RatPolynomial;
    fn sub(self, rhs: &RatPolynomial) -> RatPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPolynomial {
    type Output = RatPolynomial;
    fn mul(self, rhs: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RatPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPolynomial::new(out)
    }
}

impl Neg for &RatPolynomial {
    type Output = RatPolynomial;
    fn neg(self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() || i == 0 {
                    write!(f, "{}", fmt_rational(&mag))?;
                } else {
                    write!(f, "({})", fmt_rational(&mag))?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPolynomial({self})")
    }
}

impl Serialize for RatPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::literal::rational_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for RatPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<RatLit>::deserialize(d)?;
        Ok(RatPolynomial::new(v.into_iter().map(|r| r.0).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let p = RatPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RatPolynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(RatPolynomial::from_i64(&[]).degree(), None);
    }

    #[test]
    fn division_and_shift() {
        // (x^5 - 1) / (x - 1) = x^4 + x^3 + x^2 + x + 1
        let num = RatPolynomial::from_i64(&[-1, 0, 0, 0, 0, 1]);
        let den = RatPolynomial::from_i64(&[-1, 1]);
        assert_eq!(num.exact_div(&den).unwrap(), RatPolynomial::from_i64(&[1, 1, 1, 1, 1]));
        assert!(RatPolynomial::from_i64(&[1, 0, 1]).exact_div(&den).is_err());
        assert!(num.div_rem(&RatPolynomial::zero()).is_err());
        // (x-2)^2 + (x-2) - 1 = x^2 - 3x + 1
        let p = RatPolynomial::from_i64(&[-1, 1, 1]);
        assert_eq!(p.shift(&q(-2, 1)), RatPolynomial::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn gcd_and_inverse_relation() {
        let a = RatPolynomial::from_i64(&[-1, 0, 1]); // (x-1)(x+1)
        let b = RatPolynomial::from_i64(&[-1, 1]); // x-1
        assert_eq!(a.gcd(&b), b);
        let f = RatPolynomial::from_i64(&[-1, 1, 1]);
        let g = RatPolynomial::from_i64(&[2, 1]);
        let (d, s, t) = g.ext_gcd(&f);
        assert_eq!(d, RatPolynomial::one());
        assert_eq!(&(&s * &g) + &(&t * &f), RatPolynomial::one());
    }

    #[test]
    fn rational_root_screen() {
        assert_eq!(RatPolynomial::from_i64(&[-1, 1, 1]).rational_roots(), Some(vec![]));
        let p = RatPolynomial::from_i64(&[-1, 0, 2]); // 2x^2 - 1
        assert_eq!(p.rational_roots(), Some(vec![]));
        let p = RatPolynomial::from_i64(&[-1, 0, 4]); // roots +-1/2
        assert_eq!(p.rational_roots(), Some(vec![q(-1, 2), q(1, 2)]));
        let p = RatPolynomial::from_i64(&[0, 0, 1]);
        assert_eq!(p.rational_roots(), Some(vec![q(0, 1)]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(RatPolynomial::from_i64(&[-1, 1, 1]).to_string(), "x^2 + x - 1");
        assert_eq!(RatPolynomial::from_i64(&[1, -6, 5, -1]).to_string(), "-x^3 + 5x^2 - 6x + 1");
        assert_eq!(RatPolynomial::new(vec![q(1, 2), q(-3, 4)]).to_string(), "-(3/4)x + 1/2");
        assert_eq!(RatPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn json_literal() {
        let p: RatPolynomial = serde_json::from_str(r#"["-1", 1, "1/1", "0"]"#).unwrap();
        assert_eq!(p, RatPolynomial::from_i64(&[-1, 1, 1]));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["-1","1","1"]"#);
        assert!(serde_json::from_str::<RatPolynomial>(r#"["1/0"]"#).is_err());
    }
}
