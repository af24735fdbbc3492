//! Polyhedral control Lyapunov functions (PCLFs) for constrained discrete-time
//! linear systems, and the receding-horizon controllers built on them.

pub mod geometry;
pub mod solvers;

pub use geometry::{HPolytope, VPolytope};
pub use solvers::{LpProblem, QpProblem, SolveOutcome, SolveStatus};
