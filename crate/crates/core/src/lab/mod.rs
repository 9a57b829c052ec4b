//! Inequality checkers, extremal-constant estimators, a dense LP solver and a
//! seeded generator of bounded functions.

pub mod checks;
pub mod estimate;
pub mod experiments;
pub mod lp;
pub mod random;

pub use checks::{run_checks, CheckKind, CheckParams};
pub use estimate::{estimate_c, estimate_k, estimate_m, CEstimate, KEstimate, MEstimate};
pub use lp::{DenseLP, LpSolution, Sense};
pub use random::{random_bounded, random_corpus, CorpusEntry};
