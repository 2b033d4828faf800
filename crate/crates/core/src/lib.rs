//! Exact Euclidean geometric algebra and blade decomposability.
//!
//! * [`ga`]: sparse multivectors over the rationals with geometric, outer and
//!   left-contraction products.
//! * [`plucker`]: coordinate Plücker relations, the geometric-product
//!   criterion, span and rank-space characterizations, divisibility, and
//!   factorization of blades into vectors.
//! * [`oracle`]: an independent rank-space blade test and seeded sweeps that
//!   cross-check every criterion.
//! * [`notation`] and [`cli`]: text format and command-line front end.

pub mod cli;
pub mod ga;
pub mod linalg;
pub mod notation;
pub mod oracle;
pub mod plucker;

pub use ga::{blade_sign_and_index, Blade, GaError, Multivector, Rational};
pub use notation::{format_multivector, parse_multivector, ParseError};
pub use oracle::{blade_oracle, run_equivalence_trials, TrialConfig, TrialReport};
pub use plucker::{CheckReport, Condition, Factorization, PluckerError};
