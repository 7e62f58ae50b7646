use serde::Serialize;

use super::plan::{ceil_log2, CircuitPlan};
use super::two_level::{diagonal_bound, reconstruct, two_level_decompose};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCount {
    pub label: String,
    pub dim: usize,
    pub two_level: usize,
    pub diagonal_bound: usize,
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateCounts {
    pub steps: Vec<StepCount>,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.steps.iter().map(|s| s.two_level).sum()
    }

    pub fn max_reconstruction_error(&self) -> f64 {
        self.steps.iter().map(|s| s.reconstruction_error).fold(0.0, f64::max)
    }

    /// Steps whose two-level count exceeds the diagonal-counting bound.
    pub fn bound_violations(&self) -> impl Iterator<Item = &StepCount> {
        self.steps.iter().filter(|s| s.two_level > s.diagonal_bound)
    }
}

/// Two-level decomposition of every unitary step.
pub fn gate_counts(plan: &CircuitPlan) -> Result<GateCounts> {
    let steps = plan
        .unitaries()
        .map(|u| {
            let ops = two_level_decompose(&u.matrix)?;
            Ok(StepCount {
                label: u.label.clone(),
                dim: u.matrix.dim(),
                two_level: ops.len(),
                diagonal_bound: diagonal_bound(&u.matrix),
                reconstruction_error: reconstruct(&u.matrix, &ops),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GateCounts { steps })
}

/// Clifford+T gates for `p` two-level unitaries of `q` qubits each at total error `eps`.
pub fn clifford_t_estimate(p: u64, q: u64, eps: f64) -> u64 {
    p * q * (p as f64 / eps).log2().ceil() as u64
}

fn clog(k: usize) -> usize {
    ceil_log2(k) as usize
}

/// Peak qubits of the premap that keeps every j-register.
pub fn qubit_count_original(n: usize) -> usize {
    (1..n).map(|k| clog((n + 3 - k) / 2)).sum::<usize>() + clog(n + 1)
}

/// Peak qubits of the premap with Yamanouchi-compressed j-registers.
pub fn qubit_count_modified(n: usize) -> usize {
    n - 3 + clog(n / 2) + 2 * clog(n.div_ceil(2)) + clog((n + 2) / 2) + clog(n + 1)
}
