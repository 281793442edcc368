//! Folner sequences and densities, rational measures on the torus, their
//! Fourier coefficients, invariance under `xA` maps and support bounds.

mod folner;
mod fourier;
mod torus;

pub use folner::{
    density, folner_check, DensityReport, FolnerSequence, FolnerSet, IntegerSubset, Predicate,
};
pub use fourier::{
    finite_support_candidates, fourier, fourier_approx, fourier_exact, phase_classes, support_constraint,
    support_within, FourierValue, SupportConstraint, EXACT_ZERO_ORDER_LIMIT,
    SUPPORT_ENUMERATION_LIMIT,
};
pub use torus::{is_invariant, pushforward, Atom, AtomicMeasure, MeasureSpec, TorusPointQ};
