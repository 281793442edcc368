//! Exact arithmetic in cyclotomic and real-cyclotomic number fields.

mod cyclo_number;
mod cyclotomic;
mod field;
mod poly;

pub use cyclo_number::{CyclotomicNumber, ExactValue};
pub use cyclotomic::{
    cyclotomic_poly, degree_check_cyclotomic, degree_check_real_subfield, divisors, euler_phi,
    factorize, is_prime, minpoly_of_shifted_cos, real_cyclotomic_minpoly, CyclotomicDegreeReport,
    RealSubfieldDegreeReport,
};
pub use field::{eval_poly, field_of, NumberField, NumberFieldElement};
pub use poly::RatPolynomial;
