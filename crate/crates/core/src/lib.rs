//! Minimum-weight perfect matching with cherry trees.

pub mod dual;
pub mod error;
mod forest;
pub mod format;
mod graph;
pub mod heap;
pub mod instances;
mod init;
pub mod mcf;
pub mod rng;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use format::{Certificate, InputEdge, Instance, SetDual, SolutionFile};
pub use solver::{
    solve, DualMode, InitStrategy, Operation, Outcome, PhaseEvent, SolveStats, Solution, Solver, SolverConfig,
};
