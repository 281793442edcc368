//! Exact ergodic, weak-mixing and strong-mixing diagnostics for
//! `xA`-invariant measures, orbit measures and the rigidity harness.

mod diagnostics;
mod periodic;
mod rigidity;

pub use diagnostics::{
    ergodic_average, run_diagnostic, strong_mixing_tail, weak_mixing_average, Diagnostic,
    DiagnosticsReport, DiagnosticsRequest, FrequencyPair, LimitInfo, Overall, PairReport, Verdict,
    FLOAT_TOLERANCE, MAX_DIRECT_INDEX,
};
pub use periodic::{
    has_root_of_unity_eigenvalue, lebesgue_direct, row_orbit, FourierSequence, OrbitCycle,
    SequenceKind, MAX_EXACT_WORK, MAX_ORBIT_STATES,
};
pub use rigidity::{
    dirac_check, orbit_measure, rigidity_harness, ChainLink, DiracCheck, FourierChain, Hypotheses,
    InvarianceCheck, RigidityConclusion, RigidityConfig, RigidityReport, SupportBound,
};
