//! Truncated free and perturbed Dirac matrices on the spinor basis, level
//! windows and the finite-truncation experiments.

pub mod assemble;
pub mod experiments;
pub mod levels;
pub mod truncation;

pub use assemble::{assemble_free_dirac, assemble_perturbed_dirac, DiracMatrix};
pub use experiments::{
    prop_inf_experiment, verify_diag_sandwich, DiagSandwichReport, DiagSandwichRow, PropInfBranch, PropInfReport,
    PropInfRow, SandwichCounts,
};
pub use levels::{
    eigen_near_level, eigen_tolerance, level_counts, level_window, CountRow, LevelCountReport, LevelWindow,
    CLUSTER_FACTOR, POLLUTION_OFFSET,
};
pub use truncation::{local_gap, min_gap, Component, SpinorIndex, TruncationSpec};
