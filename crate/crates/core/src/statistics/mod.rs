//! Estimators over simulated trajectories.

pub mod drift;
pub mod escape;
pub mod estimators;
pub mod measure;
pub mod proportion;
pub mod summary;

pub use drift::{drift_identity_check, drift_psi, DriftCheck};
pub use escape::{
    hardtree_descent_probability, hardtree_escape_bound, one_ended_proxy, one_ended_run, pi_estimate,
    summarize_proxy, walked_straight_down, OneEndedReport, OneEndedWatch, ProxyOutcome,
};
pub use estimators::{
    degree_tail, distance_milestone, fit_degree_constants, linear_fit, quantitative_ceiling,
    speed_estimate, tau_ell, visit_tail, LinearFit, SpeedEstimate, TailConstants,
};
pub use measure::{accumulate_ball, merge_measures, tv_distance, EmpiricalMeasure, MeasureRecorder};
pub use proportion::{not_above, Proportion, Z95};
pub use summary::{FirstPassage, TrajectorySummary};
