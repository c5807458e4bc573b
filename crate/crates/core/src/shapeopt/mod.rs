//! Volume-constrained minimization of the Dirichlet energy by level-set
//! gradient flow.

mod advect;
mod fdcheck;
mod gradient;
mod optimizer;
mod projection;

pub use advect::{advect, advect_nodal, cfl_step, extend_velocity, BAND_CELLS, CFL};
pub use fdcheck::{finite_difference_check, star_domain, FdCheck, FourierPerturbation};
pub use gradient::{multiplier_estimate, shape_derivative, shape_derivative_vector, shape_gradient, smooth_velocity, EdgeVelocity};
pub use optimizer::{
    evaluate, initial_disk, optimize, optimize_with_observer, resample, Evaluation,
    IterationKind, IterationRecord, OptimizerConfig, OptimizerState, StopReason,
};
pub use projection::{volume_projection, PROJECTION_RTOL};
