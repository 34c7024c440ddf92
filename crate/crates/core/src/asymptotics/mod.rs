//! Weyl-type eigenvalue sequences and the three-term counting law.

pub mod three_term;
pub mod weyl;

pub use three_term::{
    abs_ln, lambda_from_log, sandwich_report, three_term_from_log, three_term_value, SandwichReport, SandwichRow,
};
pub use weyl::{limit_fit, weyl_sequence, weyl_sequence_from_values, LimitFit, WeylSequence, MIN_FIT_POINTS};
