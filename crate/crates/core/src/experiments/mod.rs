//! Experiment builders (spacecraft MPC, synthetic LASSO) and Monte-Carlo diagnostics.

pub mod diagnostics;
pub mod lasso;
pub mod mpc;

pub use diagnostics::{
    azuma_coverage, hoeffding_coverage, martingale_diagnostic, martingale_increments, martingale_report,
    DiagnosticReport, DiagnosticRow, DiagnosticStatus,
};
pub use lasso::{gen_lasso, LassoInstance};
pub use mpc::{
    build_prediction_matrices, lqr_closed_form, mpc_closed_loop, mpc_to_lasso, rollout_objective, ClosedLoopFailure,
    ClosedLoopReport, CondensedMpc, MpcSpec, StateSpaceModel,
};
