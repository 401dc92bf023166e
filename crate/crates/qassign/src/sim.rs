//! Dense density-matrix simulation of assigned circuits under configurable
//! noise models.
//!
//! Qubit `k` of an n-qubit register maps to bit weight `2^(n-1-k)` (qubit 0
//! is the most significant bit of a basis index). Hard cap at 12 qubits.

// the gate kernels walk parallel offset tables; positional loops are the
// clearest form for them
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, GateKind, GateKindTag, Targets, C64};
use crate::graph::{Assignment, GraphError, NoiseGraph};
use crate::readout::ConfusionMatrix;

pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("register of {0} qubits exceeds the {MAX_QUBITS}-qubit cap")]
    TooManyQubits(usize),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(#[from] GraphError),
    #[error("assignment length {assignment} does not match circuit width {circuit}")]
    LengthMismatch { assignment: usize, circuit: usize },
    #[error("probability vector sums to {0}, expected 1")]
    NonNormalized(f64),
    #[error("channel probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// 2^n x 2^n complex positive operator with unit trace; the simulator state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    dim: usize,
    data: Vec<Complex64>, // row-major
}

impl DensityMatrix {
    /// |0...0><0...0|
    pub fn zero_state(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let dim = 1usize << n;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        data[0] = C64::new(1.0, 0.0);
        Ok(Self { n, dim, data })
    }

    pub fn from_statevector(psi: &[Complex64]) -> Result<Self, SimError> {
        let dim = psi.len();
        let n = dim.trailing_zeros() as usize;
        assert_eq!(1usize << n, dim, "statevector length must be a power of two");
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = psi[r] * psi[c].conj();
            }
        }
        Ok(Self { n, dim, data })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let dim = 1usize << n;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        let w = 1.0 / dim as f64;
        for r in 0..dim {
            data[r * dim + r] = C64::new(w, 0.0);
        }
        Ok(Self { n, dim, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|r| self.get(r, r)).sum()
    }

    /// Convex mixture `self = (1-w)·self + w·other`.
    pub fn mix_with(&mut self, other: &DensityMatrix, w: f64) {
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a = *a * (1.0 - w) + *b * w;
        }
    }

    fn bit(&self, q: usize) -> usize {
        1usize << (self.n - 1 - q)
    }

    /// In-place `rho -> U rho U^dagger` for a single-qubit unitary on `q`.
    pub fn apply_single(&mut self, u: &[[C64; 2]; 2], q: usize) {
        let dim = self.dim;
        let b = self.bit(q);
        // left: rows
        for base in 0..dim {
            if base & b != 0 {
                continue;
            }
            let r0 = base;
            let r1 = base | b;
            for c in 0..dim {
                let x0 = self.data[r0 * dim + c];
                let x1 = self.data[r1 * dim + c];
                self.data[r0 * dim + c] = u[0][0] * x0 + u[0][1] * x1;
                self.data[r1 * dim + c] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
        // right: columns pick up conj(U)
        for r in 0..dim {
            let row = r * dim;
            for base in 0..dim {
                if base & b != 0 {
                    continue;
                }
                let c0 = base;
                let c1 = base | b;
                let x0 = self.data[row + c0];
                let x1 = self.data[row + c1];
                self.data[row + c0] = u[0][0].conj() * x0 + u[0][1].conj() * x1;
                self.data[row + c1] = u[1][0].conj() * x0 + u[1][1].conj() * x1;
            }
        }
    }

    /// In-place `rho -> U rho U^dagger` for a two-qubit unitary on `(q1, q2)`;
    /// `q1` supplies the more significant bit of the 4-dim gate space.
    pub fn apply_two(&mut self, u: &[[C64; 4]; 4], q1: usize, q2: usize) {
        assert_ne!(q1, q2);
        let dim = self.dim;
        let b1 = self.bit(q1);
        let b2 = self.bit(q2);
        let offs = [0, b2, b1, b1 | b2];
        for base in 0..dim {
            if base & (b1 | b2) != 0 {
                continue;
            }
            for c in 0..dim {
                let x: [C64; 4] = std::array::from_fn(|i| self.data[(base | offs[i]) * dim + c]);
                for i in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..4 {
                        acc += u[i][k] * x[k];
                    }
                    self.data[(base | offs[i]) * dim + c] = acc;
                }
            }
        }
        for r in 0..dim {
            let row = r * dim;
            for base in 0..dim {
                if base & (b1 | b2) != 0 {
                    continue;
                }
                let x: [C64; 4] = std::array::from_fn(|i| self.data[row + (base | offs[i])]);
                for i in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..4 {
                        acc += u[i][k].conj() * x[k];
                    }
                    self.data[row + (base | offs[i])] = acc;
                }
            }
        }
    }

    /// Symmetric depolarizing channel on a subset of qubits:
    /// the reduced state on `targets` is replaced by the maximally mixed state
    /// with probability `p`.
    pub fn depolarize(&mut self, p: f64, targets: &[usize]) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim;
        let k = targets.len();
        let dt = 1usize << k;
        let bits: Vec<usize> = targets.iter().map(|&q| self.bit(q)).collect();
        let mask: usize = bits.iter().sum();
        let offs: Vec<usize> = (0..dt)
            .map(|pat| {
                bits.iter()
                    .enumerate()
                    .filter(|(i, _)| (pat >> (k - 1 - i)) & 1 == 1)
                    .map(|(_, &b)| b)
                    .sum()
            })
            .collect();
        let inv_dt = 1.0 / dt as f64;
        for rbase in 0..dim {
            if rbase & mask != 0 {
                continue;
            }
            for cbase in 0..dim {
                if cbase & mask != 0 {
                    continue;
                }
                // block trace over the target subsystem
                let mut tr = C64::new(0.0, 0.0);
                for i in 0..dt {
                    tr += self.data[(rbase | offs[i]) * dim + (cbase | offs[i])];
                }
                for i in 0..dt {
                    for jj in 0..dt {
                        let idx = (rbase | offs[i]) * dim + (cbase | offs[jj]);
                        let mut v = self.data[idx] * (1.0 - p);
                        if i == jj {
                            v += tr * (p * inv_dt);
                        }
                        self.data[idx] = v;
                    }
                }
            }
        }
    }

    /// Global depolarizing channel over the whole register.
    pub fn depolarize_global(&mut self, p: f64) {
        if p == 0.0 {
            return;
        }
        let tr = self.trace();
        let w = tr * (p / self.dim as f64);
        for v in self.data.iter_mut() {
            *v *= 1.0 - p;
        }
        for r in 0..self.dim {
            self.data[r * self.dim + r] += w;
        }
    }

    /// Real diagonal, i.e. computational-basis probabilities.
    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r).re).collect()
    }

    /// `<psi| rho |psi>`
    pub fn expectation_state(&self, psi: &[Complex64]) -> f64 {
        assert_eq!(psi.len(), self.dim);
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.dim {
            let mut row = C64::new(0.0, 0.0);
            for c in 0..self.dim {
                row += self.get(r, c) * psi[c];
            }
            acc += psi[r].conj() * row;
        }
        acc.re
    }

    /// Largest absolute difference between `rho` and its adjoint.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Power-iteration estimate of the minimum eigenvalue (spot check for
    /// positivity). Iterates on `I - rho`, whose top eigenvalue is
    /// `1 - lambda_min(rho)`.
    pub fn min_eigenvalue_estimate(&self, iters: usize) -> f64 {
        let dim = self.dim;
        let mut v: Vec<C64> = (0..dim)
            .map(|i| C64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..iters {
            // w = (I - rho) v
            let mut w = vec![C64::new(0.0, 0.0); dim];
            for r in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..dim {
                    acc += self.get(r, c) * v[c];
                }
                w[r] = v[r] - acc;
            }
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return 0.0;
            }
            for x in w.iter_mut() {
                *x /= norm;
            }
            lambda = norm_rayleigh(self, &w);
            v = w;
        }
        lambda
    }
}

fn norm_rayleigh(rho: &DensityMatrix, v: &[C64]) -> f64 {
    // Rayleigh quotient <v|rho|v> ~ min eigenvalue after power iteration on I - rho
    rho.expectation_state(v) / v.iter().map(|x| x.norm_sqr()).sum::<f64>()
}

// ---------------------------------------------------------------------------
// Statevector path (noiseless reference)
// ---------------------------------------------------------------------------

/// Noiseless output `U|0...0>` of a circuit, simulated on logical positions.
pub fn noiseless_state(c: &Circuit) -> Vec<Complex64> {
    let n = c.n();
    let dim = 1usize << n;
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[0] = C64::new(1.0, 0.0);
    for g in c.gates() {
        apply_gate_state(&mut psi, c, g);
    }
    psi
}

fn apply_gate_state(psi: &mut [C64], c: &Circuit, g: &Gate) {
    let n = c.n();
    match g.targets {
        Targets::One(_) => {
            let (q, _) = c.gate_positions(g);
            let u = g.kind.unitary2();
            let b = 1usize << (n - 1 - q);
            for base in 0..psi.len() {
                if base & b != 0 {
                    continue;
                }
                let x0 = psi[base];
                let x1 = psi[base | b];
                psi[base] = u[0][0] * x0 + u[0][1] * x1;
                psi[base | b] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
        Targets::Two(..) => {
            let (q1, q2) = c.gate_positions(g);
            let q2 = q2.expect("two-qubit gate");
            let u = g.kind.unitary4();
            let b1 = 1usize << (n - 1 - q1);
            let b2 = 1usize << (n - 1 - q2);
            let offs = [0, b2, b1, b1 | b2];
            for base in 0..psi.len() {
                if base & (b1 | b2) != 0 {
                    continue;
                }
                let x: [C64; 4] = std::array::from_fn(|i| psi[base | offs[i]]);
                for i in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..4 {
                        acc += u[i][k] * x[k];
                    }
                    psi[base | offs[i]] = acc;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Noise models
// ---------------------------------------------------------------------------

/// One noise-channel application, the unit the noise models are built from.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// One-qubit symmetric depolarizing channel.
    Depolarize2 { p: f64, target: usize },
    /// Two-qubit symmetric depolarizing channel.
    Depolarize4 { p: f64, targets: (usize, usize) },
    /// Depolarizing channel over the whole register.
    GlobalDepolarize { p: f64 },
    /// A unitary Kraus set with a single element acting on one qubit.
    UnitaryKraus1 { u: [[C64; 2]; 2], target: usize },
    /// A unitary Kraus set with a single element acting on a pair.
    UnitaryKraus2 { u: [[C64; 4]; 4], targets: (usize, usize) },
}

impl ChannelSpec {
    fn probability(&self) -> Option<f64> {
        match *self {
            ChannelSpec::Depolarize2 { p, .. }
            | ChannelSpec::Depolarize4 { p, .. }
            | ChannelSpec::GlobalDepolarize { p } => Some(p),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if let Some(p) = self.probability() {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(SimError::InvalidProbability(p));
            }
        }
        Ok(())
    }

    pub fn apply(&self, rho: &mut DensityMatrix) -> Result<(), SimError> {
        self.validate()?;
        match *self {
            ChannelSpec::Depolarize2 { p, target } => rho.depolarize(p, &[target]),
            ChannelSpec::Depolarize4 { p, targets } => rho.depolarize(p, &[targets.0, targets.1]),
            ChannelSpec::GlobalDepolarize { p } => rho.depolarize_global(p),
            ChannelSpec::UnitaryKraus1 { u, target } => rho.apply_single(&u, target),
            ChannelSpec::UnitaryKraus2 { u, targets } => rho.apply_two(&u, targets.0, targets.1),
        }
        Ok(())
    }
}

/// Rotation generator of a coherent perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoherentAxis {
    /// `Rz(angle)` on the gate's (first) target.
    Z,
    /// `Rx(angle)` on the gate's (first) target.
    X,
    /// `exp(-i angle/2 · Z⊗Z)` on a two-qubit gate's targets.
    Zz,
}

/// A fixed perturbation attached to one gate kind. When `weight_scaled` is
/// set, the rotation angle is multiplied by the acted vertex's eps (or edge's
/// eta), tying the perturbation strength to the noise graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentTerm {
    pub axis: CoherentAxis,
    pub angle: f64,
    pub weight_scaled: bool,
}

/// Per-gate-kind unitary perturbation map for the adjoint-reversed coherent
/// error model: the forward circuit applies `W` after each gate, and the
/// inverse circuit applies `W†` before each inverted gate, so the noisy
/// inverse is exactly the adjoint of the noisy forward process.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoherentNoise {
    pub terms: BTreeMap<GateKindTag, CoherentTerm>,
}

impl CoherentNoise {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_term(mut self, tag: GateKindTag, term: CoherentTerm) -> Self {
        self.terms.insert(tag, term);
        self
    }
}

/// Noise configurations understood by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Ideal unitary evolution.
    None,
    /// After each single-qubit gate on physical vertex `i`, a one-qubit
    /// depolarizing channel with probability `eps_i`; after each two-qubit
    /// gate on edge `{i,j}`, a two-qubit depolarizing channel with `eta_ij`.
    LocalDepolarizing,
    /// After each gate, a depolarizing channel over the whole register with
    /// probability equal to the acted vertex's eps or edge's eta.
    GlobalDepolarizing,
    /// Gate-dependent unitary perturbations with adjoint reversal.
    UnitaryAdjointError(CoherentNoise),
}

/// Whether a circuit is being executed as written or as the inverse half of
/// an echo. Only [`NoiseModel::UnitaryAdjointError`] distinguishes the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Apply a gate's unitary to the state at its logical line positions.
pub fn apply_gate(rho: &mut DensityMatrix, c: &Circuit, g: &Gate) {
    match g.targets {
        Targets::One(_) => {
            let (q, _) = c.gate_positions(g);
            rho.apply_single(&g.kind.unitary2(), q);
        }
        Targets::Two(..) => {
            let (q1, q2) = c.gate_positions(g);
            rho.apply_two(&g.kind.unitary4(), q1, q2.expect("two-qubit gate"));
        }
    }
}

/// Depolarize a target subset (1 or 2 qubits) or, with `targets` covering the
/// register, the whole state.
pub fn apply_depolarizing(rho: &mut DensityMatrix, p: f64, targets: &[usize]) {
    if targets.len() == rho.n() {
        rho.depolarize_global(p);
    } else {
        rho.depolarize(p, targets);
    }
}

struct NoiseContext<'a> {
    graph: &'a NoiseGraph,
    assignment: &'a Assignment,
}

impl<'a> NoiseContext<'a> {
    /// eps/eta weight of the physical vertex or edge under a gate.
    fn weight(&self, c: &Circuit, g: &Gate) -> Result<f64, SimError> {
        let path = self.assignment.path();
        Ok(match g.targets {
            Targets::One(_) => {
                let (q, _) = c.gate_positions(g);
                self.graph.eps(path[q])?
            }
            Targets::Two(..) => {
                let (q1, q2) = c.gate_positions(g);
                self.graph.eta(path[q1], path[q2.expect("two-qubit gate")])?
            }
        })
    }
}

fn coherent_unitary(
    rho: &mut DensityMatrix,
    c: &Circuit,
    g: &Gate,
    term: &CoherentTerm,
    ctx: &NoiseContext,
    adjoint: bool,
) -> Result<(), SimError> {
    let mut angle = term.angle;
    if term.weight_scaled {
        angle *= ctx.weight(c, g)?;
    }
    if adjoint {
        angle = -angle;
    }
    match (term.axis, g.targets) {
        (CoherentAxis::Z, _) => {
            let (q, _) = c.gate_positions(g);
            rho.apply_single(&GateKind::Rz(angle).unitary2(), q);
        }
        (CoherentAxis::X, _) => {
            let (q, _) = c.gate_positions(g);
            rho.apply_single(&GateKind::Rx(angle).unitary2(), q);
        }
        (CoherentAxis::Zz, Targets::Two(..)) => {
            let (q1, q2) = c.gate_positions(g);
            let half = angle / 2.0;
            let mut u = [[C64::new(0.0, 0.0); 4]; 4];
            u[0][0] = C64::from_polar(1.0, -half);
            u[1][1] = C64::from_polar(1.0, half);
            u[2][2] = C64::from_polar(1.0, half);
            u[3][3] = C64::from_polar(1.0, -half);
            rho.apply_two(&u, q1, q2.expect("two-qubit gate"));
        }
        (CoherentAxis::Zz, Targets::One(_)) => {}
    }
    Ok(())
}

/// Run a circuit on an existing state. `dir` selects the perturbation
/// placement for the adjoint-reversed unitary error model; depolarizing noise
/// always follows its gate.
pub fn run_onto(
    rho: &mut DensityMatrix,
    c: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
    dir: Direction,
) -> Result<(), SimError> {
    if a.len() != c.n() {
        return Err(SimError::LengthMismatch { assignment: a.len(), circuit: c.n() });
    }
    a.validate(g)?;
    let ctx = NoiseContext { graph: g, assignment: a };
    let n = c.n();
    for gate in c.gates() {
        match nm {
            NoiseModel::None => apply_gate(rho, c, gate),
            NoiseModel::LocalDepolarizing => {
                apply_gate(rho, c, gate);
                let p = ctx.weight(c, gate)?;
                let targets = gate_target_positions(c, gate);
                rho.depolarize(p, &targets);
            }
            NoiseModel::GlobalDepolarizing => {
                apply_gate(rho, c, gate);
                let p = ctx.weight(c, gate)?;
                let all: Vec<usize> = (0..n).collect();
                apply_depolarizing(rho, p, &all);
            }
            NoiseModel::UnitaryAdjointError(map) => match dir {
                Direction::Forward => {
                    apply_gate(rho, c, gate);
                    if let Some(term) = map.terms.get(&gate.kind.tag()) {
                        coherent_unitary(rho, c, gate, term, &ctx, false)?;
                    }
                }
                Direction::Reverse => {
                    // this gate is the inverse of a forward gate; undo that
                    // forward gate's perturbation first
                    if let Some(term) = map.terms.get(&gate.kind.inverse().tag()) {
                        coherent_unitary(rho, c, gate, term, &ctx, true)?;
                    }
                    apply_gate(rho, c, gate);
                }
            },
        }
    }
    Ok(())
}

fn gate_target_positions(c: &Circuit, g: &Gate) -> Vec<usize> {
    let (q1, q2) = c.gate_positions(g);
    match q2 {
        None => vec![q1],
        Some(q2) => vec![q1, q2],
    }
}

/// Noisy execution of an assigned circuit from `|0...0>`.
pub fn run(
    c: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
) -> Result<DensityMatrix, SimError> {
    let mut rho = DensityMatrix::zero_state(c.n())?;
    run_onto(&mut rho, c, a, g, nm, Direction::Forward)?;
    Ok(rho)
}

/// Noisy execution of the circuit followed by its noisy inverse.
pub fn run_echo(
    c: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
) -> Result<DensityMatrix, SimError> {
    let mut rho = DensityMatrix::zero_state(c.n())?;
    run_onto(&mut rho, c, a, g, nm, Direction::Forward)?;
    let inv = crate::circuit::invert(c);
    run_onto(&mut rho, &inv, a, g, nm, Direction::Reverse)?;
    Ok(rho)
}

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

/// Computational-basis outcome probabilities, optionally pushed through
/// per-qubit readout confusion.
pub fn measure_probs(rho: &DensityMatrix, confusion: Option<&ConfusionMatrix>) -> Vec<f64> {
    let probs = rho.diagonal_probs();
    match confusion {
        None => probs,
        Some(cm) => cm.apply(&probs),
    }
}

/// Draw `t` bitstrings from a probability vector; returns per-outcome counts.
pub fn sample_bitstrings<R: Rng>(
    probs: &[f64],
    t: u64,
    rng: &mut R,
) -> Result<Vec<u64>, SimError> {
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SimError::NonNormalized(total));
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let scale = acc;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..t {
        let x: f64 = rng.gen::<f64>() * scale;
        let idx = cdf.partition_point(|&v| v < x).min(probs.len() - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}
