//! Monte Carlo estimation of ordering distributions, statistical tests and
//! blow-up statistics.

pub mod blowup;
pub mod consistency;
pub mod distribution;
pub mod perm;
pub mod stats;

pub use consistency::{LabOptions, check_consistency, check_uniformity, compare_across_graphs};
pub use distribution::{
    EventEstimate, OrderingDistribution, estimate_distribution, estimate_distributions, estimate_event,
    estimate_mean,
};
pub use stats::{FamilyReport, TestReport};
pub use blowup::{BlowupStatistics, EmpiricalF, StepCdf, check_inverse_and_ffi, estimate_blowup_statistics};
