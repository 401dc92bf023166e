//! Direct fidelity estimation recipes for the structured target states used
//! in the experiments: GHZ states (n+1 measurement settings), Fourier-basis
//! product states (one setting), transported single-qubit states (one
//! single-qubit projective measurement), and stabilizer-predicted basis
//! states.
//!
//! Estimates are deliberately not clipped to [0, 1]; under shot noise they
//! may land slightly outside, which keeps them unbiased near F = 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{mat2_mul, GateKind, C64};
use crate::metrics::MetricsError;
use crate::sim::{sample_bitstrings, DensityMatrix};

/// Per-qubit pre-measurement basis choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisRotation {
    /// Measure Z directly.
    Computational,
    /// Measure `cos(theta) X + sin(theta) Y`.
    XyPlane(f64),
}

impl BasisRotation {
    /// Rotation applied before a Z-basis measurement.
    fn matrix(&self) -> Option<[[C64; 2]; 2]> {
        match *self {
            BasisRotation::Computational => None,
            BasisRotation::XyPlane(theta) => Some(mat2_mul(
                &GateKind::H.unitary2(),
                &GateKind::Rz(-theta).unitary2(),
            )),
        }
    }
}

/// One measurement configuration of a DFE recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub rotations: Vec<BasisRotation>,
}

impl MeasurementSetting {
    /// Computational-basis probabilities of `rho` after the pre-measurement
    /// rotations.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Vec<f64> {
        debug_assert_eq!(self.rotations.len(), rho.n());
        let mut rotated = rho.clone();
        for (q, r) in self.rotations.iter().enumerate() {
            if let Some(m) = r.matrix() {
                rotated.apply_single(&m, q);
            }
        }
        rotated.diagonal_probs()
    }
}

fn parity_expectation(probs: &[f64]) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(b, &p)| if (b.count_ones() & 1) == 0 { p } else { -p })
        .sum()
}

fn empirical(counts: &[u64]) -> Vec<f64> {
    let t: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / t as f64).collect()
}

// ---------------------------------------------------------------------------
// GHZ
// ---------------------------------------------------------------------------

/// The n+1 measurement settings of the GHZ recipe: one computational-basis
/// setting and n settings measuring `(cos(kπ/n) X + sin(kπ/n) Y)^{⊗n}`.
pub fn ghz_settings(n: usize) -> Vec<MeasurementSetting> {
    assert!(n >= 2);
    let mut settings = vec![MeasurementSetting {
        rotations: vec![BasisRotation::Computational; n],
    }];
    for k in 1..=n {
        let theta = k as f64 * PI / n as f64;
        settings.push(MeasurementSetting {
            rotations: vec![BasisRotation::XyPlane(theta); n],
        });
    }
    settings
}

fn ghz_assemble(n: usize, setting_probs: &[Vec<f64>]) -> f64 {
    let dim = 1usize << n;
    // f_Z: the even-parity Z-string sum collapses to the all-zeros and
    // all-ones populations
    let pz = &setting_probs[0];
    let f_z = 0.5 * (pz[0] + pz[dim - 1]);
    let mut f_xy = 0.0;
    for (k, probs) in setting_probs.iter().enumerate().skip(1) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        f_xy += sign * parity_expectation(probs);
    }
    f_xy /= 2.0 * n as f64;
    f_z + f_xy
}

/// GHZ fidelity from exact expectation values.
pub fn ghz_dfe_exact(rho: &DensityMatrix) -> f64 {
    let n = rho.n();
    let probs: Vec<Vec<f64>> = ghz_settings(n).iter().map(|s| s.probabilities(rho)).collect();
    ghz_assemble(n, &probs)
}

/// GHZ fidelity estimated from `t` shots per setting.
pub fn ghz_dfe_sampled<R: Rng>(
    rho: &DensityMatrix,
    t: u64,
    rng: &mut R,
) -> Result<f64, MetricsError> {
    let n = rho.n();
    let mut probs = Vec::with_capacity(n + 1);
    for s in ghz_settings(n) {
        let p = s.probabilities(rho);
        let counts = sample_bitstrings(&p, t, rng)?;
        probs.push(empirical(&counts));
    }
    Ok(ghz_assemble(n, &probs))
}

// ---------------------------------------------------------------------------
// Fourier basis states
// ---------------------------------------------------------------------------

/// The single measurement setting of the Fourier-basis recipe for target
/// `⊗_k (|0> + exp(-i 2π j / 2^{k+1}) |1>)/√2`: qubit `k` measures the XY
/// operator at angle `-2π j / 2^{k+1}`.
pub fn qft_settings(n: usize, j: u64) -> Vec<MeasurementSetting> {
    let rotations = (0..n)
        .map(|k| {
            let theta_p = 2.0 * PI * j as f64 / (1u64 << (k + 1)) as f64;
            BasisRotation::XyPlane(-theta_p)
        })
        .collect();
    vec![MeasurementSetting { rotations }]
}

fn qft_assemble(probs: &[f64]) -> f64 {
    // mean over all 2^n marginal parity products; algebraically this is the
    // rotated-basis all-zeros population
    let dim = probs.len();
    let n = dim.trailing_zeros();
    let mut acc = 0.0;
    for ell in 0..dim {
        let masked: f64 = probs
            .iter()
            .enumerate()
            .map(|(b, &p)| if ((b & ell).count_ones() & 1) == 0 { p } else { -p })
            .sum();
        acc += masked;
    }
    acc / (1u64 << n) as f64
}

/// Fourier-basis-state fidelity from exact expectation values.
pub fn qft_dfe_exact(rho: &DensityMatrix, j: u64) -> f64 {
    let probs = qft_settings(rho.n(), j)[0].probabilities(rho);
    qft_assemble(&probs)
}

/// Fourier-basis-state fidelity estimated from one batch of `t` shots.
pub fn qft_dfe_sampled<R: Rng>(
    rho: &DensityMatrix,
    j: u64,
    t: u64,
    rng: &mut R,
) -> Result<f64, MetricsError> {
    let probs = qft_settings(rho.n(), j)[0].probabilities(rho);
    let counts = sample_bitstrings(&probs, t, rng)?;
    Ok(qft_assemble(&empirical(&counts)))
}

// ---------------------------------------------------------------------------
// Transported single-qubit states
// ---------------------------------------------------------------------------

fn state_prep_inverse(alpha: Complex64, beta: Complex64) -> [[C64; 2]; 2] {
    // V with V (alpha|0> + beta|1>) = |0>
    [[alpha.conj(), beta.conj()], [-beta, alpha]]
}

/// Overlap of the reduced state on `dest` with `alpha|0> + beta|1>`; the
/// constant-cost fidelity of a state-transport circuit.
pub fn swapnet_fidelity_exact(
    rho: &DensityMatrix,
    alpha: Complex64,
    beta: Complex64,
    dest: usize,
) -> f64 {
    let mut rotated = rho.clone();
    rotated.apply_single(&state_prep_inverse(alpha, beta), dest);
    let probs = rotated.diagonal_probs();
    let n = rho.n();
    let bit = 1usize << (n - 1 - dest);
    probs
        .iter()
        .enumerate()
        .filter(|(b, _)| b & bit == 0)
        .map(|(_, &p)| p)
        .sum()
}

/// Shot-sampled version of [`swapnet_fidelity_exact`].
pub fn swapnet_fidelity_sampled<R: Rng>(
    rho: &DensityMatrix,
    alpha: Complex64,
    beta: Complex64,
    dest: usize,
    t: u64,
    rng: &mut R,
) -> Result<f64, MetricsError> {
    let mut rotated = rho.clone();
    rotated.apply_single(&state_prep_inverse(alpha, beta), dest);
    let counts = sample_bitstrings(&rotated.diagonal_probs(), t, rng)?;
    let n = rho.n();
    let bit = 1usize << (n - 1 - dest);
    let hits: u64 = counts
        .iter()
        .enumerate()
        .filter(|(b, _)| b & bit == 0)
        .map(|(_, &c)| c)
        .sum();
    Ok(hits as f64 / t as f64)
}

// ---------------------------------------------------------------------------
// Basis-state targets (conjugated-Pauli mirror circuits)
// ---------------------------------------------------------------------------

/// Probability of measuring a specific basis bitstring.
pub fn basis_state_fidelity_exact(rho: &DensityMatrix, bits: usize) -> f64 {
    rho.get(bits, bits).re
}

/// Shot-sampled probability of a specific basis bitstring.
pub fn basis_state_fidelity_sampled<R: Rng>(
    rho: &DensityMatrix,
    bits: usize,
    t: u64,
    rng: &mut R,
) -> Result<f64, MetricsError> {
    let counts = sample_bitstrings(&rho.diagonal_probs(), t, rng)?;
    Ok(counts[bits] as f64 / t as f64)
}

/// The basis index carrying (almost) all of a state's weight, if any.
pub fn predicted_bitstring(psi: &[Complex64]) -> Option<usize> {
    let (idx, amp) = psi
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())?;
    if amp.norm_sqr() > 1.0 - 1e-9 {
        Some(idx)
    } else {
        None
    }
}
