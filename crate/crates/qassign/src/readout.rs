//! Readout-error characterization, correction, and assignment rejection.
//!
//! Readout noise is modeled per qubit by a 2x2 column-stochastic confusion
//! matrix built from the flip rates `p10 = p(1|0)` and `p01 = p(0|1)`.
//! Correction applies the tensor product of the per-qubit inverses to an
//! observed distribution; corrected vectors may carry small negative entries
//! under shot noise and are deliberately not projected back onto the simplex.

use thiserror::Error;

use crate::graph::{Assignment, NoiseGraph};

#[derive(Debug, Error, PartialEq)]
pub enum ReadoutError {
    #[error("confusion matrix for qubit {qubit} is singular (det = {det})")]
    SingularConfusion { qubit: usize, det: f64 },
    #[error("flip rate {0} is outside [0, 1]")]
    InvalidRate(f64),
    #[error("distribution length {len} does not match {n} qubits")]
    LengthMismatch { len: usize, n: usize },
    #[error("graph lookup: {0}")]
    Graph(#[from] crate::graph::GraphError),
}

/// Per-qubit readout confusion, column-stochastic:
/// `[[p(0|0), p(0|1)], [p(1|0), p(1|1)]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    rates: Vec<(f64, f64)>, // (p10, p01) per qubit
}

impl ConfusionMatrix {
    pub fn from_rates(rates: Vec<(f64, f64)>) -> Result<Self, ReadoutError> {
        for &(p10, p01) in &rates {
            for r in [p10, p01] {
                if !(0.0..=1.0).contains(&r) || !r.is_finite() {
                    return Err(ReadoutError::InvalidRate(r));
                }
            }
        }
        Ok(Self { rates })
    }

    /// Same `(p10, p01)` on every qubit.
    pub fn uniform(n: usize, p10: f64, p01: f64) -> Self {
        Self::from_rates(vec![(p10, p01); n]).expect("rates validated by caller")
    }

    /// Rates looked up from the layout for the qubits of an assignment.
    pub fn from_graph(g: &NoiseGraph, a: &Assignment) -> Result<Self, ReadoutError> {
        let rates = a
            .path()
            .iter()
            .map(|&v| g.readout(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { rates })
    }

    pub fn n(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[(f64, f64)] {
        &self.rates
    }

    fn matrix(&self, q: usize) -> [[f64; 2]; 2] {
        let (p10, p01) = self.rates[q];
        [[1.0 - p10, p01], [p10, 1.0 - p01]]
    }

    /// Forward map: true distribution -> observed distribution.
    pub fn apply(&self, probs: &[f64]) -> Vec<f64> {
        self.transform(probs, false).expect("forward map is always defined")
    }

    /// Inverse map: observed distribution -> corrected distribution.
    pub fn correct(&self, observed: &[f64]) -> Result<Vec<f64>, ReadoutError> {
        self.transform(observed, true)
    }

    /// 1-norm condition number of one qubit's confusion matrix.
    pub fn condition_number(&self, q: usize) -> Result<f64, ReadoutError> {
        let m = self.matrix(q);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() < 1e-9 {
            return Err(ReadoutError::SingularConfusion { qubit: q, det });
        }
        let norm = |m: [[f64; 2]; 2]| {
            let c0 = m[0][0].abs() + m[1][0].abs();
            let c1 = m[0][1].abs() + m[1][1].abs();
            c0.max(c1)
        };
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        Ok(norm(m) * norm(inv))
    }

    fn transform(&self, probs: &[f64], inverse: bool) -> Result<Vec<f64>, ReadoutError> {
        let n = self.n();
        if probs.len() != 1usize << n {
            return Err(ReadoutError::LengthMismatch { len: probs.len(), n });
        }
        let mut out = probs.to_vec();
        for q in 0..n {
            let m = self.matrix(q);
            let m = if inverse {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det.abs() < 1e-9 {
                    return Err(ReadoutError::SingularConfusion { qubit: q, det });
                }
                [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
            } else {
                m
            };
            let bit = 1usize << (n - 1 - q);
            for base in 0..out.len() {
                if base & bit != 0 {
                    continue;
                }
                let x0 = out[base];
                let x1 = out[base | bit];
                out[base] = m[0][0] * x0 + m[0][1] * x1;
                out[base | bit] = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        Ok(out)
    }
}

/// Default rejection threshold on `max(p(0|1), p(1|0))`.
pub const REJECT_THRESHOLD: f64 = 0.15;

/// Per-qubit accept/reject flags and the assignment-level verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectReport {
    /// `true` where the qubit's worst flip rate strictly exceeds the threshold.
    pub rejected_qubits: Vec<bool>,
    pub rejected: bool,
}

/// Reject an assignment when any of its qubits has
/// `max(p(0|1), p(1|0)) > threshold` (strict).
pub fn reject(cm: &ConfusionMatrix, threshold: f64) -> RejectReport {
    let rejected_qubits: Vec<bool> = cm
        .rates()
        .iter()
        .map(|&(p10, p01)| p10.max(p01) > threshold)
        .collect();
    let rejected = rejected_qubits.iter().any(|&r| r);
    RejectReport { rejected_qubits, rejected }
}
