//! Theta-lengths of first-return vectors, finite-scale verdicts on their
//! series, the factor conditions built on them, and candidate search.

mod checks;
mod length;
mod scan;
mod verdict;

pub use checks::{
    continuity_modulus, necessary_condition_check, sufficient_condition_check, ContinuityModulus, FactorDiagnostics,
    NecessaryReport, SufficientReport, MAX_PAIRS,
};
pub use length::{factor_map_eval, length_series, theta_length, LengthSeries};
pub use verdict::{series_verdict, verdict_from_lengths, Verdict, VerdictClass, DIVERGENCE_FLOOR, SLOPE_DELTA};
pub use scan::{convergents, theta_scan, Candidate, CandidateSource, ScanSpec};
