//! The symmetric tridiagonal families `M_n(a)` and `N_n(a)`.
//!
//! Both have `a` on the diagonal and ones on the off-diagonals; `M_n(a)`
//! replaces the last diagonal entry with `a - 1`. The characteristic
//! polynomial of `M_n(2)` is `det M_n(2 - x)`, whose roots are
//! `2 + 2cos(2k pi/(2n+1))` for `k = 1..n`.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{minpoly_of_shifted_cos, RatPolynomial};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    M,
    N,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::M => "M",
            Variant::N => "N",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Variant::M),
            "N" | "n" => Ok(Variant::N),
            other => Err(Error::Contract(format!("unknown variant {other:?}, expected M or N"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TridiagSpec {
    n: usize,
    a: BigRational,
    variant: Variant,
}

impl TridiagSpec {
    pub fn new(n: usize, a: BigRational, variant: Variant) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("n must be at least 1".into()));
        }
        Ok(Self { n, a, variant })
    }

    pub fn with_int(n: usize, a: i64, variant: Variant) -> Result<Self> {
        Self::new(n, BigRational::from_integer(a.into()), variant)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    fn int_a(&self) -> Result<BigInt> {
        if self.a.is_integer() {
            Ok(self.a.to_integer())
        } else {
            Err(Error::Contract(format!("a = {} must be an integer here", self.a)))
        }
    }
}

pub fn make_matrix(spec: &TridiagSpec) -> Result<IntMatrix> {
    let a = spec.int_a()?;
    let n = spec.n;
    let mut data = vec![BigInt::zero(); n * n];
    for i in 0..n {
        data[i * n + i] = a.clone();
        if i + 1 < n {
            data[i * n + i + 1] = BigInt::one();
            data[(i + 1) * n + i] = BigInt::one();
        }
    }
    if spec.variant == Variant::M {
        data[n * n - 1] -= 1;
    }
    IntMatrix::new(n, n, data)
}

/// Determinant through the three-term recurrence `f(n) = a f(n-1) - f(n-2)`
/// seeded with `f(1) = a - 1, f(2) = a^2 - a - 1` (variant M) or
/// `g(1) = a, g(2) = a^2 - 1` (variant N).
pub fn det_recurrence(spec: &TridiagSpec) -> BigRational {
    let a = &spec.a;
    let one = BigRational::one();
    let (d1, d2) = match spec.variant {
        Variant::M => (a - &one, a * a - a - &one),
        Variant::N => (a.clone(), a * a - &one),
    };
    if spec.n == 1 {
        return d1;
    }
    let (mut prev, mut cur) = (d1, d2);
    for _ in 3..=spec.n {
        let next = a * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormCase {
    /// `a = 2`
    Two,
    /// `a = -2`
    MinusTwo,
    /// `a != +-2`, via `alpha, beta = (a +- sqrt(a^2 - 4))/2`
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    #[serde(with = "crate::literal::rational")]
    pub value: BigRational,
    pub case: ClosedFormCase,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub erratum: Option<String>,
}

/// Power sums `alpha^m + beta^m` of the roots of `x^2 - a x + 1`, for
/// `m = 0..=upto` (a Lucas sequence, exact integers).
fn root_power_sums(a: &BigInt, upto: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(2), a.clone()];
    while s.len() <= upto {
        let k = s.len();
        let next = a * &s[k - 1] - &s[k - 2];
        s.push(next);
    }
    s
}

/// Closed-form determinant by case on `a`.
///
/// For `a != +-2` the expressions in `alpha^m + beta^m` are evaluated
/// exactly through the power-sum recurrence; this route shares nothing
/// with [`det_recurrence`] beyond the value of `a`.
pub fn det_closed_form(spec: &TridiagSpec) -> Result<ClosedFormReport> {
    let a = spec.int_a()?;
    let n = spec.n;
    let nn = BigInt::from(n);
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let two = BigInt::from(2);
    let report = if a == two {
        let value = match spec.variant {
            Variant::M => BigInt::one(),
            Variant::N => &nn + 1,
        };
        ClosedFormReport { value: BigRational::from_integer(value), case: ClosedFormCase::Two, erratum: None }
    } else if a == -&two {
        match spec.variant {
            Variant::M => ClosedFormReport {
                value: BigRational::from_integer(&sign * (&nn * 2 + 1)),
                case: ClosedFormCase::MinusTwo,
                erratum: Some(
                    "sign (-1)^(n-1)(2n+1) is inconsistent with the recurrence seeded by \
                     f(1) = -3, f(2) = 5; reporting (-1)^n(2n+1)"
                        .into(),
                ),
            },
            Variant::N => ClosedFormReport {
                value: BigRational::from_integer(&sign * (&nn + 1)),
                case: ClosedFormCase::MinusTwo,
                erratum: None,
            },
        }
    } else {
        let s = root_power_sums(&a, n + 1);
        let value = match spec.variant {
            Variant::M => BigRational::new(&s[n + 1] + &s[n], &a + 2),
            Variant::N => BigRational::new(&s[n] * 2 - &a * &s[n + 1], 4 - &a * &a),
        };
        ClosedFormReport { value, case: ClosedFormCase::General, erratum: None }
    };
    Ok(report)
}

/// Characteristic polynomial `det(M_n(2) - x I) = det M_n(2 - x)`, from the
/// determinant recurrence with `a` replaced by the polynomial `2 - x`.
pub fn char_poly_m2(n: usize) -> Result<RatPolynomial> {
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    let a = RatPolynomial::from_i64(&[2, -1]);
    let one = RatPolynomial::one();
    let f1 = &a - &one;
    if n == 1 {
        return Ok(f1);
    }
    let f2 = &(&(&a * &a) - &a) - &one;
    let (mut prev, mut cur) = (f1, f2);
    for _ in 3..=n {
        let next = &(&a * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueDescriptor {
    pub n: usize,
    pub k: usize,
    pub closed_form: String,
    pub approx: f64,
    pub minpoly: RatPolynomial,
}

/// The eigenvalues `2 + 2cos(2k pi/(2n+1))` of `M_n(2)`, ascending.
pub fn eigenvalues_m2(n: usize) -> Result<Vec<EigenvalueDescriptor>> {
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    let m = 2 * n as u64 + 1;
    let mut out = (1..=n)
        .map(|k| {
            Ok(EigenvalueDescriptor {
                n,
                k,
                closed_form: format!("2+2cos({}pi/{m})", 2 * k),
                approx: 2.0 + 2.0 * (TAU * k as f64 / m as f64).cos(),
                minpoly: minpoly_of_shifted_cos(m, k as u64)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.approx.total_cmp(&b.approx));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRootReport {
    pub n: usize,
    #[serde(with = "crate::literal::int")]
    pub p_at_1: BigInt,
    #[serde(with = "crate::literal::int")]
    pub p_at_minus1: BigInt,
    pub p_at_minus1_positive: bool,
    pub has_rational_root: bool,
    pub root_is_one: bool,
}

/// Rational roots of the characteristic polynomial of `M_n(2)`. The
/// constant term is `det M_n(2) = 1` and the leading coefficient is
/// `(-1)^n`, so only `+-1` can be rational roots.
pub fn rational_root_classification(n: usize) -> Result<RationalRootReport> {
    let p = char_poly_m2(n)?;
    debug_assert!(p.coeff(0).is_one() && p.leading().is_some_and(|l| l.abs().is_one()));
    let at = |x: i64| p.eval(&BigRational::from_integer(x.into())).to_integer();
    let p1 = at(1);
    let pm1 = at(-1);
    Ok(RationalRootReport {
        n,
        root_is_one: p1.is_zero(),
        has_rational_root: p1.is_zero() || pm1.is_zero(),
        p_at_minus1_positive: pm1.is_positive(),
        p_at_1: p1,
        p_at_minus1: pm1,
    })
}
