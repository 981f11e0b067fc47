//! Semidefinite relaxation machinery: a dense interior-point solver, the lifted
//! quadratic forms of the channel gains, and Gaussian randomization.

mod ipm;
mod lifted;
mod randomize;

pub use lifted::{build_lifted_r, build_lifted_t, LiftedForm};
pub use randomize::{gaussian_randomize, leading_phase, RandomizeOutcome};

use crate::error::Result;
use crate::linalg::CMatrix;

/// `maximize Tr(C X)  s.t.  Tr(A_k X) <= b_k,  X_ii = 1 (optional),  X ⪰ 0`.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub objective: CMatrix,
    pub ineq_constraints: Vec<(CMatrix, f64)>,
    pub unit_diagonal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: CMatrix,
    /// `Tr(C X)` in the caller's units.
    pub objective: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Residuals of the internally normalized problem.
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub relative_gap: f64,
    /// Frobenius norm the objective was divided by internally.
    pub objective_scale: f64,
}

impl SdpSolution {
    pub fn is_usable(&self) -> bool {
        match self.status {
            SdpStatus::Optimal => true,
            SdpStatus::MaxIterations => self.primal_residual < 1e-6,
            SdpStatus::Infeasible => false,
        }
    }
}

pub fn solve_sdp(problem: &SdpProblem) -> Result<SdpSolution> {
    ipm::solve(problem)
}
