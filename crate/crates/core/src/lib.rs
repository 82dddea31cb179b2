//! Hadamard product parametrization (HPP) solvers for L_q-penalized linear and
//! generalized linear regression, with comparison algorithms (LQA, LLA, CCD
//! and their hybrids), spatially structured penalties, a simulation generator
//! and a benchmark harness.

pub mod bench;
pub mod error;
pub mod glm;
pub mod io;
pub mod linalg;
pub mod linear;
pub mod model;
pub mod simgen;
pub mod structured;
pub mod trace;

pub use error::{HppError, Result};
pub use model::{FactorState, PenaltySpec, RegressionProblem};
pub use trace::SolverTrace;
