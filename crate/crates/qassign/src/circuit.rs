//! Gate-level circuit representation, circuit families, and hardware-native
//! decomposition.
//!
//! Circuits are immutable gate sequences over an ordered line of qubits; every
//! two-qubit gate acts on adjacent line positions. Builders emit circuits over
//! the native set {PhasedXZ, sqrt-iSWAP, inverse sqrt-iSWAP} so that gate
//! counts reflect hardware-native tallies.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Assignment, Edge, QubitId};
use crate::rng::seeded_rng;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("gate targets qubit {0} which is not on the circuit line")]
    UnknownQubit(QubitId),
    #[error("two-qubit gate on ({0}, {1}) violates line connectivity")]
    NonAdjacent(QubitId, QubitId),
    #[error("two-qubit gate targets must be distinct (got {0})")]
    DegenerateTargets(QubitId),
    #[error("gate parameter is not finite")]
    NonFiniteParameter,
    #[error("duplicate qubit {0} on the circuit line")]
    DuplicateQubit(QubitId),
    #[error("amplitudes are not normalized: |a|^2+|b|^2 = {0}")]
    InvalidAmplitudes(f64),
    #[error("assignment length {assignment} does not match circuit width {circuit}")]
    LengthMismatch { assignment: usize, circuit: usize },
    #[error("hop count {hops} exceeds line length minus one ({max})")]
    TooManyHops { hops: usize, max: usize },
    #[error("basis index {j} out of range for {n} qubits")]
    BasisOutOfRange { j: u64, n: usize },
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

/// Gate kinds. `PhasedXz(a, b, c)` is `Rz(a) · Rx(b) · Rz(c)` (rightmost
/// applied first), the native single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Rx(f64),
    Ry(f64),
    Rz(f64),
    PhasedXz(f64, f64, f64),
    H,
    X,
    Y,
    Z,
    Cnot,
    SqrtIswap,
    SqrtIswapInv,
    Swap,
    Cz,
}

/// Parameter-free discriminant of a gate kind, used to key per-kind noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GateKindTag {
    Rx,
    Ry,
    Rz,
    PhasedXz,
    H,
    X,
    Y,
    Z,
    Cnot,
    SqrtIswap,
    SqrtIswapInv,
    Swap,
    Cz,
}

impl GateKind {
    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            GateKind::Cnot | GateKind::SqrtIswap | GateKind::SqrtIswapInv | GateKind::Swap | GateKind::Cz
        )
    }

    pub fn tag(&self) -> GateKindTag {
        match self {
            GateKind::Rx(_) => GateKindTag::Rx,
            GateKind::Ry(_) => GateKindTag::Ry,
            GateKind::Rz(_) => GateKindTag::Rz,
            GateKind::PhasedXz(..) => GateKindTag::PhasedXz,
            GateKind::H => GateKindTag::H,
            GateKind::X => GateKindTag::X,
            GateKind::Y => GateKindTag::Y,
            GateKind::Z => GateKindTag::Z,
            GateKind::Cnot => GateKindTag::Cnot,
            GateKind::SqrtIswap => GateKindTag::SqrtIswap,
            GateKind::SqrtIswapInv => GateKindTag::SqrtIswapInv,
            GateKind::Swap => GateKindTag::Swap,
            GateKind::Cz => GateKindTag::Cz,
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::PhasedXz(a, b, c) => GateKind::PhasedXz(-c, -b, -a),
            GateKind::SqrtIswap => GateKind::SqrtIswapInv,
            GateKind::SqrtIswapInv => GateKind::SqrtIswap,
            k => k, // H, X, Y, Z, CNOT, SWAP, CZ are self-inverse
        }
    }

    fn params_finite(&self) -> bool {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) => t.is_finite(),
            GateKind::PhasedXz(a, b, c) => a.is_finite() && b.is_finite() && c.is_finite(),
            _ => true,
        }
    }

    /// 2x2 unitary for single-qubit kinds.
    pub fn unitary2(&self) -> [[C64; 2]; 2] {
        match *self {
            GateKind::Rx(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]]
            }
            GateKind::Ry(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
            }
            GateKind::Rz(t) => [
                [C64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, t / 2.0)],
            ],
            GateKind::PhasedXz(a, b, c) => {
                let rz_a = GateKind::Rz(a).unitary2();
                let rx_b = GateKind::Rx(b).unitary2();
                let rz_c = GateKind::Rz(c).unitary2();
                mat2_mul(&mat2_mul(&rz_a, &rx_b), &rz_c)
            }
            GateKind::H => {
                let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::Y => [[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]],
            GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
            _ => panic!("unitary2 called on two-qubit kind"),
        }
    }

    /// 4x4 unitary for two-qubit kinds. Basis order |00>,|01>,|10>,|11> with
    /// the first target as the more significant bit.
    pub fn unitary4(&self) -> [[C64; 4]; 4] {
        let mut m = [[ZERO; 4]; 4];
        match *self {
            GateKind::Cnot => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
            }
            GateKind::Cz => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][2] = ONE;
                m[3][3] = -ONE;
            }
            GateKind::Swap => {
                m[0][0] = ONE;
                m[1][2] = ONE;
                m[2][1] = ONE;
                m[3][3] = ONE;
            }
            GateKind::SqrtIswap | GateKind::SqrtIswapInv => {
                let c = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let s = if matches!(self, GateKind::SqrtIswap) {
                    C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)
                } else {
                    C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)
                };
                m[0][0] = ONE;
                m[1][1] = c;
                m[1][2] = s;
                m[2][1] = s;
                m[2][2] = c;
                m[3][3] = ONE;
            }
            _ => panic!("unitary4 called on single-qubit kind"),
        }
        m
    }
}

pub(crate) fn mat2_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Gate targets: one qubit id, or an ordered pair of ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Targets {
    One(QubitId),
    Two(QubitId, QubitId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Targets,
}

impl Gate {
    pub fn single(kind: GateKind, q: QubitId) -> Self {
        debug_assert!(!kind.is_two_qubit());
        Self { kind, targets: Targets::One(q) }
    }

    pub fn two(kind: GateKind, a: QubitId, b: QubitId) -> Self {
        debug_assert!(kind.is_two_qubit());
        Self { kind, targets: Targets::Two(a, b) }
    }

    pub fn inverse(&self) -> Self {
        Self { kind: self.kind.inverse(), targets: self.targets }
    }
}

// ---------------------------------------------------------------------------
// Circuits
// ---------------------------------------------------------------------------

/// Ordered gate sequence over a line of named qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubits: Vec<QubitId>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Validates that every target is on the line, two-qubit targets are
    /// distinct and adjacent line positions, and angle parameters are finite.
    pub fn new(qubits: Vec<QubitId>, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut pos: BTreeMap<QubitId, usize> = BTreeMap::new();
        for (i, &q) in qubits.iter().enumerate() {
            if pos.insert(q, i).is_some() {
                return Err(CircuitError::DuplicateQubit(q));
            }
        }
        for g in &gates {
            if !g.kind.params_finite() {
                return Err(CircuitError::NonFiniteParameter);
            }
            match g.targets {
                Targets::One(q) => {
                    if !pos.contains_key(&q) {
                        return Err(CircuitError::UnknownQubit(q));
                    }
                    if g.kind.is_two_qubit() {
                        return Err(CircuitError::DegenerateTargets(q));
                    }
                }
                Targets::Two(a, b) => {
                    if a == b {
                        return Err(CircuitError::DegenerateTargets(a));
                    }
                    let (pa, pb) = match (pos.get(&a), pos.get(&b)) {
                        (Some(&pa), Some(&pb)) => (pa, pb),
                        (None, _) => return Err(CircuitError::UnknownQubit(a)),
                        (_, None) => return Err(CircuitError::UnknownQubit(b)),
                    };
                    if pa.abs_diff(pb) != 1 {
                        return Err(CircuitError::NonAdjacent(a, b));
                    }
                }
            }
        }
        Ok(Self { qubits, gates })
    }

    /// Line of `n` qubits named `0..n`.
    pub fn line(n: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        Self::new((0..n as QubitId).collect(), gates)
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn position_of(&self, q: QubitId) -> Option<usize> {
        self.qubits.iter().position(|&x| x == q)
    }

    /// Line positions of a gate's targets.
    pub fn gate_positions(&self, g: &Gate) -> (usize, Option<usize>) {
        match g.targets {
            Targets::One(q) => (self.position_of(q).expect("validated"), None),
            Targets::Two(a, b) => (
                self.position_of(a).expect("validated"),
                Some(self.position_of(b).expect("validated")),
            ),
        }
    }
}

/// Gates reversed, each replaced by its inverse.
pub fn invert(c: &Circuit) -> Circuit {
    let gates = c.gates.iter().rev().map(Gate::inverse).collect();
    Circuit { qubits: c.qubits.clone(), gates }
}

/// Relabel circuit qubits onto the vertices of an assignment.
pub fn assign(c: &Circuit, a: &Assignment) -> Result<Circuit, CircuitError> {
    if a.len() != c.n() {
        return Err(CircuitError::LengthMismatch { assignment: a.len(), circuit: c.n() });
    }
    let map: BTreeMap<QubitId, QubitId> = c
        .qubits
        .iter()
        .copied()
        .zip(a.path().iter().copied())
        .collect();
    let gates = c
        .gates
        .iter()
        .map(|g| Gate {
            kind: g.kind,
            targets: match g.targets {
                Targets::One(q) => Targets::One(map[&q]),
                Targets::Two(x, y) => Targets::Two(map[&x], map[&y]),
            },
        })
        .collect();
    Ok(Circuit { qubits: a.path().to_vec(), gates })
}

// ---------------------------------------------------------------------------
// Gate counts
// ---------------------------------------------------------------------------

/// Per-vertex single-qubit and per-edge two-qubit gate tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub per_vertex: BTreeMap<QubitId, u64>,
    pub per_edge: BTreeMap<Edge, u64>,
}

impl GateCounts {
    pub fn total_single(&self) -> u64 {
        self.per_vertex.values().sum()
    }

    pub fn total_two(&self) -> u64 {
        self.per_edge.values().sum()
    }

    pub fn total(&self) -> u64 {
        self.total_single() + self.total_two()
    }
}

pub fn gate_counts(c: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in c.gates() {
        match g.targets {
            Targets::One(q) => *counts.per_vertex.entry(q).or_insert(0) += 1,
            Targets::Two(a, b) => {
                let e = if a <= b { (a, b) } else { (b, a) };
                *counts.per_edge.entry(e).or_insert(0) += 1;
            }
        }
    }
    counts
}

// ---------------------------------------------------------------------------
// ZXZ Euler extraction and native decomposition
// ---------------------------------------------------------------------------

/// Angles `(a, b, c)` with `Rz(a)·Rx(b)·Rz(c)` equal to `m` up to global phase.
pub fn phasedxz_angles(m: &[[C64; 2]; 2]) -> (f64, f64, f64) {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let phase = C64::from_polar(1.0, -det.arg() / 2.0);
    let m00 = m[0][0] * phase;
    let m10 = m[1][0] * phase;
    let b = 2.0 * m10.norm().atan2(m00.norm());
    const EPS: f64 = 1e-12;
    if m00.norm() > EPS && m10.norm() > EPS {
        let apc = -2.0 * m00.arg();
        let amc = 2.0 * (m10.arg() + PI / 2.0);
        ((apc + amc) / 2.0, b, (apc - amc) / 2.0)
    } else if m00.norm() > EPS {
        (-2.0 * m00.arg(), b, 0.0)
    } else {
        (2.0 * (m10.arg() + PI / 2.0), b, 0.0)
    }
}

fn phasedxz_of(m: &[[C64; 2]; 2], q: QubitId) -> Gate {
    let (a, b, c) = phasedxz_angles(m);
    Gate::single(GateKind::PhasedXz(a, b, c), q)
}

/// Merge a time-ordered list of single-qubit kinds into one PhasedXZ gate.
fn merged_single(kinds: &[GateKind], q: QubitId) -> Gate {
    let mut m = [[ONE, ZERO], [ZERO, ONE]];
    for k in kinds {
        m = mat2_mul(&k.unitary2(), &m);
    }
    phasedxz_of(&m, q)
}

/// CZ as two sqrt-iSWAP-family gates with PhasedXZ corrections.
fn push_cz_native(out: &mut Vec<Gate>, a: QubitId, b: QubitId) {
    out.push(merged_single(&[GateKind::Rx(-PI / 2.0)], a));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0)], b));
    out.push(Gate::two(GateKind::SqrtIswapInv, a, b));
    out.push(merged_single(&[GateKind::Rx(-PI)], b));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0), GateKind::Rz(PI / 2.0)], a));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0), GateKind::Rz(PI / 2.0)], b));
}

/// CNOT with control `c` and target `t` per the native-gate identity
/// CNOT = (I⊗H)·CZ·(I⊗H), with the Hadamards merged into the corrections.
fn push_cnot_native(out: &mut Vec<Gate>, c: QubitId, t: QubitId) {
    out.push(merged_single(&[GateKind::Rx(-PI / 2.0)], c));
    out.push(merged_single(&[GateKind::H, GateKind::Rx(PI / 2.0)], t));
    out.push(Gate::two(GateKind::SqrtIswapInv, c, t));
    out.push(merged_single(&[GateKind::Rx(-PI)], t));
    out.push(Gate::two(GateKind::SqrtIswap, c, t));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0), GateKind::Rz(PI / 2.0)], c));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0), GateKind::Rz(PI / 2.0), GateKind::H], t));
}

/// Controlled phase `diag(1,1,1,e^{i theta})` as two sqrt-iSWAP-family gates.
///
/// Trailing single-qubit factors `extra_a`/`extra_b` (time order) are merged
/// into the final PhasedXZ layer.
fn push_cphase_native(
    out: &mut Vec<Gate>,
    theta: f64,
    a: QubitId,
    b: QubitId,
    extra_a: &[GateKind],
    extra_b: &[GateKind],
) {
    let t = theta.rem_euclid(2.0 * PI);
    let (sign, tp) = if t <= PI { (1.0, t) } else { (-1.0, 2.0 * PI - t) };
    let (phi, xi) = if (tp - PI).abs() < 1e-12 {
        (PI / 2.0, PI / 2.0)
    } else {
        let phi = (std::f64::consts::SQRT_2 * (tp / 4.0).sin()).asin();
        (phi, (phi.tan() / std::f64::consts::SQRT_2).atan())
    };
    out.push(merged_single(&[GateKind::Rz(sign * 0.5 * tp), GateKind::Rx(xi)], a));
    out.push(merged_single(&[GateKind::Rz(sign * 0.5 * tp), GateKind::Rx(-sign * PI / 2.0)], b));
    out.push(Gate::two(GateKind::SqrtIswapInv, a, b));
    out.push(merged_single(&[GateKind::Rx(-2.0 * phi)], a));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
    let mut tail_a = vec![GateKind::Rx(xi)];
    tail_a.extend_from_slice(extra_a);
    let mut tail_b = vec![GateKind::Rx(sign * PI / 2.0)];
    tail_b.extend_from_slice(extra_b);
    out.push(merged_single(&tail_a, a));
    out.push(merged_single(&tail_b, b));
}

/// SWAP via `SWAP = iSWAP · (S†⊗S†) · CZ`; four entangling gates total.
fn push_swap_native(out: &mut Vec<Gate>, a: QubitId, b: QubitId) {
    // CZ body, with the S† corrections merged into its trailing layer.
    out.push(merged_single(&[GateKind::Rx(-PI / 2.0)], a));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0)], b));
    out.push(Gate::two(GateKind::SqrtIswapInv, a, b));
    out.push(merged_single(&[GateKind::Rx(-PI)], b));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
    // CZ's trailing Rz(π/2) cancels against the S† correction on each qubit.
    out.push(merged_single(&[GateKind::Rx(PI / 2.0)], a));
    out.push(merged_single(&[GateKind::Rx(PI / 2.0)], b));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
}

/// Fused controlled-phase-plus-swap, `G(θ) = CP(θ)·SWAP`, used by the
/// line-connectivity QFT. Identity: `G(θ) = iSWAP · (S†⊗S†) · CP(θ+π)`.
fn push_cphase_swap_native(out: &mut Vec<Gate>, theta: f64, a: QubitId, b: QubitId) {
    push_cphase_native(out, theta + PI, a, b, &[GateKind::Rz(-PI / 2.0)], &[GateKind::Rz(-PI / 2.0)]);
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
    out.push(Gate::two(GateKind::SqrtIswap, a, b));
}

/// Rewrite a circuit over the native gate set. Each input gate decomposes
/// independently; no merging happens across input gate boundaries.
pub fn decompose_to_native(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len() * 3);
    for g in c.gates() {
        match (g.kind, g.targets) {
            (GateKind::SqrtIswap, Targets::Two(a, b)) => gates.push(Gate::two(GateKind::SqrtIswap, a, b)),
            (GateKind::SqrtIswapInv, Targets::Two(a, b)) => {
                gates.push(Gate::two(GateKind::SqrtIswapInv, a, b))
            }
            (GateKind::Cnot, Targets::Two(a, b)) => push_cnot_native(&mut gates, a, b),
            (GateKind::Cz, Targets::Two(a, b)) => push_cz_native(&mut gates, a, b),
            (GateKind::Swap, Targets::Two(a, b)) => push_swap_native(&mut gates, a, b),
            (kind, Targets::One(q)) => gates.push(merged_single(&[kind], q)),
            _ => unreachable!("validated circuit"),
        }
    }
    Circuit { qubits: c.qubits().to_vec(), gates }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// GHZ preparation: H on the first qubit, then a CNOT ladder down the line,
/// emitted in native form.
pub fn build_ghz(n: usize) -> Circuit {
    assert!(n >= 1);
    let mut gates = vec![Gate::single(GateKind::H, 0)];
    for q in 0..n.saturating_sub(1) as QubitId {
        gates.push(Gate::two(GateKind::Cnot, q, q + 1));
    }
    decompose_to_native(&Circuit::line(n, gates).expect("ghz builder"))
}

/// State-transport circuit: prepare `alpha|0> + beta|1>` on qubit 0, then move
/// it `hops` positions down the line, one iSWAP (two sqrt-iSWAPs) plus a phase
/// fix per hop. The noiseless output carries the state on qubit `hops`.
pub fn build_swapnet(
    n: usize,
    alpha: C64,
    beta: C64,
    hops: usize,
) -> Result<Circuit, CircuitError> {
    assert!(n >= 1);
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(CircuitError::InvalidAmplitudes(norm));
    }
    if hops > n - 1 {
        return Err(CircuitError::TooManyHops { hops, max: n - 1 });
    }
    let mut gates = Vec::new();
    // State preparation. Global phase is irrelevant throughout.
    let b_angle = 2.0 * beta.norm().atan2(alpha.norm());
    let a_angle = if beta.norm() < 1e-15 || alpha.norm() < 1e-15 {
        0.0
    } else {
        (beta / alpha).arg() + PI / 2.0
    };
    gates.push(Gate::single(GateKind::PhasedXz(a_angle, b_angle, 0.0), 0));
    for h in 0..hops as QubitId {
        gates.push(Gate::two(GateKind::SqrtIswap, h, h + 1));
        gates.push(Gate::two(GateKind::SqrtIswap, h, h + 1));
        // undo the iSWAP's i-phase on |1>: S^dagger on the destination
        gates.push(Gate::single(GateKind::PhasedXz(-PI / 2.0, 0.0, 0.0), h + 1));
    }
    Circuit::line(n, gates)
}

/// Conjugated-Pauli mirror circuit `H^{⊗n} C† P C H^{⊗n}` with `C` a random
/// layered line-connectivity Clifford and `P` a random Pauli string. The
/// noiseless output is a computational basis state.
pub fn build_clifford_conjugation(n: usize, seed: u64) -> Circuit {
    decompose_to_native(&build_clifford_conjugation_raw(n, seed))
}

/// Undecomposed form of [`build_clifford_conjugation`], over {H, S=Rz(π/2),
/// CZ, X, Y, Z}. Useful for stabilizer-level analysis.
pub fn build_clifford_conjugation_raw(n: usize, seed: u64) -> Circuit {
    assert!(n >= 1);
    let mut rng = seeded_rng(seed, "clifford-conjugation", 0);
    let depth = 2 * n;
    let mut clifford: Vec<Gate> = Vec::new();
    for layer in 0..depth {
        for q in 0..n as QubitId {
            match rng.gen_range(0..3u8) {
                0 => clifford.push(Gate::single(GateKind::H, q)),
                1 => clifford.push(Gate::single(GateKind::Rz(PI / 2.0), q)),
                _ => {}
            }
        }
        let start = (layer % 2) as QubitId;
        let mut q = start;
        while (q as usize) + 1 < n {
            if rng.gen_bool(0.7) {
                clifford.push(Gate::two(GateKind::Cz, q, q + 1));
            }
            q += 2;
        }
    }
    let pauli: Vec<Option<GateKind>> = (0..n)
        .map(|_| match rng.gen_range(0..4u8) {
            0 => None,
            1 => Some(GateKind::X),
            2 => Some(GateKind::Y),
            _ => Some(GateKind::Z),
        })
        .collect();

    let mut gates: Vec<Gate> = Vec::new();
    for q in 0..n as QubitId {
        gates.push(Gate::single(GateKind::H, q));
    }
    gates.extend(clifford.iter().copied());
    for (q, p) in pauli.iter().enumerate() {
        if let Some(kind) = p {
            gates.push(Gate::single(*kind, q as QubitId));
        }
    }
    for g in clifford.iter().rev() {
        gates.push(g.inverse());
    }
    for q in 0..n as QubitId {
        gates.push(Gate::single(GateKind::H, q));
    }
    Circuit::line(n, gates).expect("clifford builder")
}

/// Basis-state quantum Fourier transform: X gates preparing `|j>` followed by
/// a line-connectivity QFT built from fused controlled-phase-plus-swap gates.
/// The inherent output reversal is absorbed by relabeling, so the noiseless
/// output on qubit `k` is `(|0> + exp(-i 2π j / 2^{k+1}) |1>)/√2`.
pub fn build_qft_basis(n: usize, j: u64) -> Result<Circuit, CircuitError> {
    assert!(n >= 1);
    if n < 64 && j >= (1u64 << n) {
        return Err(CircuitError::BasisOutOfRange { j, n });
    }
    let mut gates = Vec::new();
    for k in 0..n {
        if (j >> (n - 1 - k)) & 1 == 1 {
            gates.push(merged_single(&[GateKind::X], k as QubitId));
        }
    }
    for i in 1..=n {
        gates.push(merged_single(&[GateKind::H], 0));
        for step in 1..=(n - i) {
            let theta = -2.0 * PI / (1u64 << (step + 1)) as f64;
            push_cphase_swap_native(&mut gates, theta, step as QubitId - 1, step as QubitId);
        }
    }
    Circuit::line(n, gates)
}

/// Random line circuit: alternating layers of uniformly random PhasedXZ
/// rotations on every qubit and sqrt-iSWAP on alternating adjacent pairs.
pub fn build_random_circuit(n: usize, depth: usize, seed: u64) -> Circuit {
    assert!(n >= 1);
    let mut rng = seeded_rng(seed, "random-circuit", 0);
    let mut gates = Vec::new();
    let mut entangling_parity = 0usize;
    for layer in 0..depth {
        if layer % 2 == 0 {
            for q in 0..n as QubitId {
                gates.push(random_phasedxz(&mut rng, q));
            }
        } else {
            let mut q = entangling_parity as QubitId;
            while (q as usize) + 1 < n {
                gates.push(Gate::two(GateKind::SqrtIswap, q, q + 1));
                q += 2;
            }
            entangling_parity ^= 1;
        }
    }
    Circuit::line(n, gates).expect("random builder")
}

fn random_phasedxz<R: Rng>(rng: &mut R, q: QubitId) -> Gate {
    let a = rng.gen_range(-PI..PI);
    let b = rng.gen_range(-PI..PI);
    let c = rng.gen_range(-PI..PI);
    Gate::single(GateKind::PhasedXz(a, b, c), q)
}

/// Random circuit with exactly the same per-vertex single-qubit and per-edge
/// two-qubit gate counts as `template`: every single-qubit gate is replaced by
/// a fresh random PhasedXZ and every two-qubit gate by a sqrt-iSWAP on the
/// same targets. This is the ensemble member generator behind the
/// random-circuit survival average.
pub fn random_counts_matched(template: &Circuit, seed: u64) -> Circuit {
    let mut rng = seeded_rng(seed, "counts-matched", 0);
    let gates = template
        .gates()
        .iter()
        .map(|g| match g.targets {
            Targets::One(q) => random_phasedxz(&mut rng, q),
            Targets::Two(a, b) => Gate::two(GateKind::SqrtIswap, a, b),
        })
        .collect();
    Circuit { qubits: template.qubits().to_vec(), gates }
}
