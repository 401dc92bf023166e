//! Noise-aware qubit assignment at desk scale.
//!
//! This crate scores placements of line-connectivity circuits onto weighted
//! device graphs, searches for good placements by simulated annealing, and
//! analyzes how well cheap diagnostics track the true state fidelity.
//!
//! The pieces:
//!
//! - [`graph`]: weighted connectivity graphs, simple-path assignments, and
//!   reversal-augmented neighborhoods.
//! - [`circuit`]: a small gate IR, circuit families (GHZ, state transport,
//!   conjugated-Pauli mirrors, Fourier-basis states, random lines), exact
//!   inversion, and decomposition to the native {PhasedXZ, sqrt-iSWAP} set.
//! - [`sim`]: dense density-matrix evolution under local/global depolarizing
//!   or adjoint-reversed coherent noise, plus measurement with readout
//!   confusion.
//! - [`metrics`]: state fidelity F, Loschmidt survival F_LE (exact, observed,
//!   and shot-sampled), the benchmark product F0, the random-circuit survival
//!   average, and the single-error extrapolation relating them.
//! - [`dfe`]: direct fidelity estimation recipes for the structured targets.
//! - [`readout`]: confusion-matrix correction and assignment rejection.
//! - [`anneal`]: simulated annealing with memoized cost oracles, the
//!   best-of-n random baseline, and cost-landscape locality.
//! - [`stats`]: Kendall tau-b, conditional percentile probabilities, and
//!   bootstrap errors.

pub mod anneal;
pub mod circuit;
pub mod dfe;
pub mod graph;
pub mod metrics;
pub mod noisemap;
pub mod readout;
pub mod rng;
pub mod sim;
pub mod stats;

pub use graph::{Assignment, NeighborhoodSpec, NoiseGraph, Population};
pub use metrics::{Evaluator, MetricsRecord};
pub use rng::seeded_rng;
pub use sim::{DensityMatrix, NoiseModel};
