//! Sourced classical dynamics around a mean path: trajectories, the
//! closed-path action decomposition, fluctuation Green functions, energy–time
//! variables and the retarded step kernel.

mod action;
mod action_angle;
mod green;
mod kernel;
mod trajectory;

pub use action::{
    decompose_action, decompose_action_with_tolerance, log_log_slope, ActionDecomposition, DeviationField,
    ON_SHELL_TOLERANCE,
};
pub use action_angle::{
    evolve_action_angle, from_action_angle, orbit_partials, poisson_bracket, rescale_sources, shell, theta_of,
    to_action_angle, ActionAngleHistory, ActionAngleState, Shell,
};
pub use green::{causal_response, fluctuation_green, linear_response, FluctuationKernel, SINGULAR_TOLERANCE};
pub use kernel::RetardedKernel;
pub use trajectory::{solve_boundary, solve_newton, Integrator, TimeGrid, Trajectory};
