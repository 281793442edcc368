use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::RatPolynomial;
use crate::error::{Error, Result};

/// Simple extension `Q[x]/(minpoly)` with a monic irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: RatPolynomial,
    degree: usize,
}

/// Builds the field `Q[x]/(minpoly)`.
///
/// Irreducibility is the caller's responsibility; polynomials of degree at
/// least two with a rational root are rejected.
pub fn field_of(minpoly: RatPolynomial) -> Result<Arc<NumberField>> {
    let Some(degree) = minpoly.degree() else {
        return Err(Error::Contract("the zero polynomial cannot define a field".into()));
    };
    if degree == 0 {
        return Err(Error::Contract("a constant cannot define a field".into()));
    }
    if !minpoly.is_monic() {
        return Err(Error::Contract(format!("minimal polynomial {minpoly} is not monic")));
    }
    if degree >= 2 {
        if let Some(roots) = minpoly.rational_roots() {
            if let Some(r) = roots.first() {
                return Err(Error::Contract(format!(
                    "{minpoly} has the rational root {r} and is reducible"
                )));
            }
        }
    }
    Ok(Arc::new(NumberField { minpoly, degree }))
}

impl NumberField {
    pub fn minpoly(&self) -> &RatPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Element of a [`NumberField`], stored as its reduced residue
/// `c_0 + c_1 t + ... + c_{d-1} t^{d-1}` in the generator `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl NumberFieldElement {
    pub fn from_poly(field: &Arc<NumberField>, p: &RatPolynomial) -> Self {
        let r = p.rem(&field.minpoly).expect("minpoly is nonzero");
        let coords = (0..field.degree).map(|i| r.coeff(i)).collect();
        Self { field: Arc::clone(field), coords }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::from_poly(field, &RatPolynomial::constant(q))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RatPolynomial::zero())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RatPolynomial::one())
    }

    /// The class of `x`, a root of the minimal polynomial.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RatPolynomial::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn to_poly(&self) -> RatPolynomial {
        RatPolynomial::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    /// Multiplicative inverse via extended gcd with the minimal polynomial.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let (g, s, _) = self.to_poly().ext_gcd(&self.field.minpoly);
        if g.degree() != Some(0) {
            return Err(Error::Contract(format!(
                "{} shares the factor {g} with the modulus",
                self.to_poly()
            )));
        }
        Ok(Self::from_poly(&self.field, &s))
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "arithmetic between elements of different number fields"
        );
    }
}

/// Horner evaluation of `p` at `x`, reducing after every step.
pub fn eval_poly(p: &RatPolynomial, x: &NumberFieldElement) -> NumberFieldElement {
    let field = x.field();
    p.coeffs().iter().rev().fold(NumberFieldElement::zero(field), |acc, c| {
        &(&acc * x) + &NumberFieldElement::from_rational(field, c.clone())
    })
}

impl Add for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn add(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.check_same_field(rhs);
        NumberFieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn sub(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.check_same_field(rhs);
        NumberFieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn mul(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.check_same_field(rhs);
        NumberFieldElement::from_poly(&self.field, &(&self.to_poly() * &rhs.to_poly()))
    }
}

impl Neg for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn neg(self) -> NumberFieldElement {
        NumberFieldElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.to_poly(), self.field.minpoly)
    }
}
