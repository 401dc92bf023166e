//! Assignment quality metrics: state fidelity, Loschmidt echo survival,
//! benchmark product, random-circuit survival average, and the relations
//! between them.

use rand::Rng;
use thiserror::Error;

use num_complex::Complex64;

use crate::circuit::{self, Circuit, GateCounts};
use crate::graph::{Assignment, GraphError, NoiseGraph};
use crate::readout::{ConfusionMatrix, ReadoutError};
use crate::rng::seeded_rng;
use crate::sim::{self, Direction, NoiseModel, SimError};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Readout(#[from] ReadoutError),
    #[error("benchmark product F0 is zero")]
    ZeroF0,
    #[error("missing weight for {0}")]
    MissingWeight(String),
    #[error("no rescaling flip witness found within the search budget")]
    WitnessNotFound,
    #[error("shot count must be at least 1")]
    NoShots,
}

/// Per-assignment metric tuple produced by sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub assignment: Assignment,
    pub f: f64,
    pub f_le: f64,
    pub f0: f64,
    pub f_le_rand_mean: Option<f64>,
    pub f_le_rand_std: Option<f64>,
    /// Shots used for the Loschmidt estimate; 0 means exact.
    pub shots: u64,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Evaluator: shared noiseless reference across many assignments
// ---------------------------------------------------------------------------

/// Caches the circuit, its inverse, and the noiseless output state so that a
/// sweep over many assignments pays for them once.
pub struct Evaluator {
    circuit: Circuit,
    inverse: Circuit,
    psi: Vec<Complex64>,
}

impl Evaluator {
    pub fn new(c: &Circuit) -> Self {
        Self {
            circuit: c.clone(),
            inverse: circuit::invert(c),
            psi: sim::noiseless_state(c),
        }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn noiseless_state(&self) -> &[Complex64] {
        &self.psi
    }

    /// `(F, F_LE)` in one pass: the forward state gives the fidelity, and the
    /// echo continues from it.
    pub fn evaluate(
        &self,
        a: &Assignment,
        g: &NoiseGraph,
        nm: &NoiseModel,
    ) -> Result<(f64, f64), MetricsError> {
        let mut rho = sim::DensityMatrix::zero_state(self.circuit.n())?;
        sim::run_onto(&mut rho, &self.circuit, a, g, nm, Direction::Forward)?;
        let f = clamp_unit(rho.expectation_state(&self.psi));
        sim::run_onto(&mut rho, &self.inverse, a, g, nm, Direction::Reverse)?;
        let f_le = clamp_unit(rho.get(0, 0).re);
        Ok((f, f_le))
    }

    pub fn fidelity(&self, a: &Assignment, g: &NoiseGraph, nm: &NoiseModel) -> Result<f64, MetricsError> {
        let rho = sim::run(&self.circuit, a, g, nm)?;
        Ok(clamp_unit(rho.expectation_state(&self.psi)))
    }

    pub fn loschmidt_exact(
        &self,
        a: &Assignment,
        g: &NoiseGraph,
        nm: &NoiseModel,
    ) -> Result<f64, MetricsError> {
        Ok(self.evaluate(a, g, nm)?.1)
    }

    /// Exact all-zeros return probability as observed through optional
    /// readout confusion, optionally corrected by linear inversion.
    pub fn loschmidt_observed(
        &self,
        a: &Assignment,
        g: &NoiseGraph,
        nm: &NoiseModel,
        confusion: Option<&ConfusionMatrix>,
        correct_readout: bool,
    ) -> Result<f64, MetricsError> {
        let rho = sim::run_echo(&self.circuit, a, g, nm)?;
        let mut probs = sim::measure_probs(&rho, confusion);
        if correct_readout {
            if let Some(cm) = confusion {
                probs = cm.correct(&probs)?;
            }
        }
        Ok(probs[0])
    }

    /// Shot-sampled Loschmidt estimate and its binomial standard error.
    ///
    /// The standard error is computed from the raw (pre-correction) all-zeros
    /// frequency, which stays meaningful when correction pushes the estimate
    /// to the boundary.
    #[allow(clippy::too_many_arguments)]
    pub fn loschmidt_sampled<R: Rng>(
        &self,
        a: &Assignment,
        g: &NoiseGraph,
        nm: &NoiseModel,
        t: u64,
        confusion: Option<&ConfusionMatrix>,
        correct_readout: bool,
        rng: &mut R,
    ) -> Result<(f64, f64), MetricsError> {
        if t == 0 {
            return Err(MetricsError::NoShots);
        }
        let rho = sim::run_echo(&self.circuit, a, g, nm)?;
        let probs = sim::measure_probs(&rho, confusion);
        let counts = sim::sample_bitstrings(&probs, t, rng)?;
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / t as f64).collect();
        let raw = empirical[0];
        let stderr = (raw * (1.0 - raw) / t as f64).sqrt();
        let estimate = if correct_readout {
            match confusion {
                Some(cm) => cm.correct(&empirical)?[0],
                None => raw,
            }
        } else {
            raw
        };
        Ok((estimate, stderr))
    }
}

// ---------------------------------------------------------------------------
// Spec-shaped free functions
// ---------------------------------------------------------------------------

/// State fidelity `<psi| rho |psi>` of the noisy run against the noiseless
/// output.
pub fn fidelity(c: &Circuit, a: &Assignment, g: &NoiseGraph, nm: &NoiseModel) -> Result<f64, MetricsError> {
    Evaluator::new(c).fidelity(a, g, nm)
}

/// Exact Loschmidt survival: run the circuit and its inverse, both noisy, and
/// return the all-zeros component.
pub fn loschmidt_exact(
    c: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
) -> Result<f64, MetricsError> {
    Evaluator::new(c).loschmidt_exact(a, g, nm)
}

/// Shot-sampled Loschmidt estimate; see [`Evaluator::loschmidt_sampled`].
#[allow(clippy::too_many_arguments)]
pub fn loschmidt_sampled<R: Rng>(
    c: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
    t: u64,
    confusion: Option<&ConfusionMatrix>,
    correct_readout: bool,
    rng: &mut R,
) -> Result<(f64, f64), MetricsError> {
    Evaluator::new(c).loschmidt_sampled(a, g, nm, t, confusion, correct_readout, rng)
}

/// Benchmark product over gate counts:
/// `prod_i (1-eps_i)^{n_i} * prod_{ij} (1-eta_ij)^{n_ij}`.
pub fn f0(counts: &GateCounts, g: &NoiseGraph) -> Result<f64, MetricsError> {
    let mut acc = 1.0f64;
    for (&v, &m) in &counts.per_vertex {
        let eps = g.eps(v).map_err(|_| MetricsError::MissingWeight(format!("vertex {v}")))?;
        acc *= (1.0 - eps).powi(m as i32);
    }
    for (&(a, b), &m) in &counts.per_edge {
        let eta = g
            .eta(a, b)
            .map_err(|_| MetricsError::MissingWeight(format!("edge ({a}, {b})")))?;
        acc *= (1.0 - eta).powi(m as i32);
    }
    Ok(acc)
}

/// `f0` of a logical circuit placed on an assignment.
pub fn f0_of_assignment(c: &Circuit, a: &Assignment, g: &NoiseGraph) -> Result<f64, MetricsError> {
    let assigned = circuit::assign(c, a).map_err(|e| MetricsError::MissingWeight(e.to_string()))?;
    f0(&circuit::gate_counts(&assigned), g)
}

/// Pauli error rate equivalent to a depolarization parameter `p` on `n`
/// qubits: `e_p = p (1 - 4^{-n})`.
pub fn pauli_rate(p: f64, n: u32) -> f64 {
    p * (1.0 - 0.25f64.powi(n as i32))
}

/// Single-error extrapolation `F ≈ (F_LE/F0 + F0) / 2`.
pub fn extrapolate_f(f_le: f64, f0: f64) -> Result<f64, MetricsError> {
    if f0 <= 0.0 {
        return Err(MetricsError::ZeroF0);
    }
    Ok(0.5 * (f_le / f0 + f0))
}

// ---------------------------------------------------------------------------
// Rescaling flip witness
// ---------------------------------------------------------------------------

/// A pair of weight vectors whose ranking under
/// `f(x, c) = prod_i (1 - c x_i)^{n_i}` flips between scale factors `c` and
/// `c_prime`. Demonstrates that the benchmark product's argmax depends on
/// whether weights are read as depolarization parameters or Pauli rates.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipWitness {
    pub eps: Vec<f64>,
    pub eps_prime: Vec<f64>,
    pub counts: Vec<u64>,
    pub c: f64,
    pub c_prime: f64,
}

/// `f(x, c) = prod_i (1 - c x_i)^{n_i}`
pub fn weighted_product(x: &[f64], counts: &[u64], c: f64) -> f64 {
    x.iter()
        .zip(counts.iter())
        .map(|(&xi, &ni)| (1.0 - c * xi).powi(ni as i32))
        .product()
}

impl FlipWitness {
    /// Re-evaluate both strict inequalities.
    pub fn holds(&self) -> bool {
        let f = |x: &[f64], c: f64| weighted_product(x, &self.counts, c);
        f(&self.eps, self.c) > f(&self.eps_prime, self.c)
            && f(&self.eps, self.c_prime) < f(&self.eps_prime, self.c_prime)
    }
}

/// Randomized search (fixed seed) for a [`FlipWitness`] with `c = 1` and
/// `c' = 1 - 4^{-1}`, the Pauli-rate conversion factor for one qubit.
pub fn f0_rescaling_flip_witness() -> Result<FlipWitness, MetricsError> {
    let mut rng = seeded_rng(0x0f11, "flip-witness", 0);
    let c = 1.0;
    let c_prime = 1.0 - 0.25;
    for _ in 0..100_000 {
        let counts: Vec<u64> = (0..2).map(|_| rng.gen_range(1..=5)).collect();
        let eps: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..0.99)).collect();
        let eps_prime: Vec<f64> = (0..2).map(|_| rng.gen_range(0.0..0.99)).collect();
        let w = FlipWitness { eps, eps_prime, counts, c, c_prime };
        if w.holds() {
            return Ok(w);
        }
    }
    Err(MetricsError::WitnessNotFound)
}

// ---------------------------------------------------------------------------
// Random-circuit survival average
// ---------------------------------------------------------------------------

/// Mean and sample standard deviation of the exact Loschmidt survival over an
/// ensemble of `r` random circuits gate-count-matched to `template`.
pub fn loschmidt_rand_avg(
    template: &Circuit,
    a: &Assignment,
    g: &NoiseGraph,
    nm: &NoiseModel,
    r: usize,
    seed: u64,
) -> Result<(f64, f64), MetricsError> {
    assert!(r >= 1);
    let mut values = Vec::with_capacity(r);
    for i in 0..r {
        let member = circuit::random_counts_matched(template, seed.wrapping_add(i as u64));
        values.push(Evaluator::new(&member).loschmidt_exact(a, g, nm)?);
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    let std = if r >= 2 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r as f64 - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok((mean, std))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ghz, build_random_circuit, Gate, GateKind};
    use crate::graph::NoiseGraph;
    use crate::sim::{CoherentAxis, CoherentNoise, CoherentTerm};
    use crate::circuit::GateKindTag;

    fn line_graph(n: usize, eps: f64, eta: f64) -> (NoiseGraph, Assignment) {
        let mut g = NoiseGraph::new();
        for v in 0..n as u32 {
            g.add_qubit(v, None, eps, (0.0, 0.0)).unwrap();
        }
        for v in 0..(n as u32).saturating_sub(1) {
            g.add_edge(v, v + 1, eta).unwrap();
        }
        (g, Assignment::new((0..n as u32).collect()))
    }

    #[test]
    fn noiseless_metrics_are_unity() {
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.0, 0.0);
        assert!((fidelity(&c, &a, &g, &NoiseModel::None).unwrap() - 1.0).abs() < 1e-12);
        assert!((loschmidt_exact(&c, &a, &g, &NoiseModel::None).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_qubit_hand_values() {
        let c = Circuit::line(1, vec![Gate::single(GateKind::X, 0)]).unwrap();
        let (g, a) = line_graph(1, 0.1, 0.0);
        let f = fidelity(&c, &a, &g, &NoiseModel::LocalDepolarizing).unwrap();
        assert!((f - 0.95).abs() < 1e-12, "F = {f}");
        let f_le = loschmidt_exact(&c, &a, &g, &NoiseModel::LocalDepolarizing).unwrap();
        assert!((f_le - 0.905).abs() < 1e-12, "F_LE = {f_le}");
    }

    #[test]
    fn fully_depolarized_edge_erases_everything_downstream() {
        // GHZ-3 with eps = 0 everywhere and eta = 1 on the second ladder
        // edge: the first channel on that edge replaces the pair with I/4
        // while qubit 0 (entangled with it) is left maximally mixed, so the
        // final state is exactly I/8 and F = <GHZ| I/8 |GHZ> = 1/8.
        let c = build_ghz(3);
        let mut g = NoiseGraph::new();
        for v in 0..3 {
            g.add_qubit(v, None, 0.0, (0.0, 0.0)).unwrap();
        }
        g.add_edge(0, 1, 0.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        let a = Assignment::new(vec![0, 1, 2]);
        let rho = crate::sim::run(&c, &a, &g, &NoiseModel::LocalDepolarizing).unwrap();
        for r in 0..8 {
            for col in 0..8 {
                let want = if r == col { 0.125 } else { 0.0 };
                assert!((rho.get(r, col).re - want).abs() < 1e-12);
                assert!(rho.get(r, col).im.abs() < 1e-12);
            }
        }
        let f = fidelity(&c, &a, &g, &NoiseModel::LocalDepolarizing).unwrap();
        assert!((f - 0.125).abs() < 1e-12);
    }

    #[test]
    fn invalid_assignment_is_rejected() {
        let c = build_ghz(3);
        let (g, _) = line_graph(3, 0.0, 0.0);
        let broken = Assignment::new(vec![0, 2, 1]); // (0, 2) is not an edge
        assert!(matches!(
            fidelity(&c, &broken, &g, &NoiseModel::None),
            Err(MetricsError::Sim(crate::sim::SimError::InvalidAssignment(_)))
        ));
    }

    #[test]
    fn sampled_estimate_requires_shots() {
        let c = build_ghz(2);
        let (g, a) = line_graph(2, 0.0, 0.0);
        let mut rng = seeded_rng(1, "noshots", 0);
        assert!(matches!(
            loschmidt_sampled(&c, &a, &g, &NoiseModel::None, 0, None, false, &mut rng),
            Err(MetricsError::NoShots)
        ));
    }

    #[test]
    fn global_depolarizing_closed_forms() {
        for seed in 0..6 {
            let n = 2 + (seed as usize % 3);
            let c = build_random_circuit(n, 5, seed);
            let (g, a) = line_graph(n, 0.011 + 0.003 * seed as f64, 0.029);
            let nm = NoiseModel::GlobalDepolarizing;
            let ev = Evaluator::new(&c);
            let (f, f_le) = ev.evaluate(&a, &g, &nm).unwrap();
            let f0v = f0_of_assignment(&c, &a, &g).unwrap();
            let d = (1usize << n) as f64;
            let want_f = (d - 1.0) / d * f0v + 1.0 / d;
            let want_f_le = (d - 1.0) / d * f0v * f0v + 1.0 / d;
            assert!((f - want_f).abs() < 1e-12, "F {f} vs {want_f}");
            assert!((f_le - want_f_le).abs() < 1e-12, "F_LE {f_le} vs {want_f_le}");
        }
    }

    #[test]
    fn f0_examples() {
        let mut g = NoiseGraph::new();
        g.add_qubit(0, None, 0.01, (0.0, 0.0)).unwrap();
        g.add_qubit(1, None, 0.02, (0.0, 0.0)).unwrap();
        g.add_edge(0, 1, 0.05).unwrap();
        let mut counts = GateCounts::default();
        counts.per_vertex.insert(0, 2);
        counts.per_vertex.insert(1, 1);
        counts.per_edge.insert((0, 1), 1);
        let v = f0(&counts, &g).unwrap();
        assert!((v - 0.9124731).abs() < 1e-7, "{v}");

        // all weights zero -> 1
        let g0 = NoiseGraph::grid(1, 2, 0.0, 0.0, (0.0, 0.0));
        assert!((f0(&counts, &g0).unwrap() - 1.0).abs() < 1e-15);

        // a unit weight with nonzero count -> 0
        let mut g1 = NoiseGraph::new();
        g1.add_qubit(0, None, 1.0, (0.0, 0.0)).unwrap();
        g1.add_qubit(1, None, 0.0, (0.0, 0.0)).unwrap();
        g1.add_edge(0, 1, 0.0).unwrap();
        assert_eq!(f0(&counts, &g1).unwrap(), 0.0);
    }

    #[test]
    fn f0_missing_weight() {
        let g = NoiseGraph::grid(1, 2, 0.0, 0.0, (0.0, 0.0));
        let mut counts = GateCounts::default();
        counts.per_vertex.insert(77, 1);
        assert!(matches!(f0(&counts, &g), Err(MetricsError::MissingWeight(_))));
    }

    #[test]
    fn pauli_rate_values() {
        assert_eq!(pauli_rate(0.0, 3), 0.0);
        assert!((pauli_rate(0.1, 1) - 0.075).abs() < 1e-15);
        assert!((pauli_rate(0.1, 24) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn extrapolation_examples() {
        assert!((extrapolate_f(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let v = extrapolate_f(0.905, 0.9).unwrap();
        assert!((v - 0.9527777777777777).abs() < 1e-12, "{v}");
        // pure zero-error case F_LE = F0^2 returns F0
        let f0v = 0.87;
        assert!((extrapolate_f(f0v * f0v, f0v).unwrap() - f0v).abs() < 1e-15);
        assert!(matches!(extrapolate_f(0.5, 0.0), Err(MetricsError::ZeroF0)));
    }

    #[test]
    fn flip_witness_found_and_holds() {
        let w = f0_rescaling_flip_witness().unwrap();
        assert!(w.holds());
        assert_ne!(w.c, w.c_prime);
        assert!(w.eps.len() >= 2);
    }

    #[test]
    fn sampled_estimate_concentrates() {
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.01, 0.02);
        let ev = Evaluator::new(&c);
        let exact = ev.loschmidt_exact(&a, &g, &NoiseModel::LocalDepolarizing).unwrap();
        let mut rng = seeded_rng(11, "sampled", 0);
        let t = 100_000u64;
        let (est, stderr) = ev
            .loschmidt_sampled(&a, &g, &NoiseModel::LocalDepolarizing, t, None, false, &mut rng)
            .unwrap();
        assert!((est - exact).abs() < 5.0 * stderr, "est {est} exact {exact} stderr {stderr}");
    }

    #[test]
    fn sampled_noiseless_is_exactly_one() {
        let c = build_ghz(2);
        let (g, a) = line_graph(2, 0.0, 0.0);
        let mut rng = seeded_rng(12, "sampled", 0);
        let (est, _) = loschmidt_sampled(&c, &a, &g, &NoiseModel::None, 1000, None, false, &mut rng).unwrap();
        assert_eq!(est, 1.0);
    }

    #[test]
    fn readout_bias_reproduced_exactly() {
        // noiseless echo + confusion: uncorrected F_LE = prod p(0|0)
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.0, 0.0);
        let cm = ConfusionMatrix::from_rates(vec![(0.05, 0.1), (0.02, 0.04), (0.07, 0.01)]).unwrap();
        let ev = Evaluator::new(&c);
        let biased = ev
            .loschmidt_observed(&a, &g, &NoiseModel::None, Some(&cm), false)
            .unwrap();
        let want = 0.95 * 0.98 * 0.93;
        assert!((biased - want).abs() < 1e-12, "{biased} vs {want}");
        let corrected = ev
            .loschmidt_observed(&a, &g, &NoiseModel::None, Some(&cm), true)
            .unwrap();
        assert!((corrected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rand_avg_noiseless_and_global() {
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.0, 0.0);
        let (mean, std) = loschmidt_rand_avg(&c, &a, &g, &NoiseModel::None, 5, 3).unwrap();
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(std.abs() < 1e-12);

        // under global depolarizing every count-matched member has the same
        // F_LE, so the ensemble spread collapses
        let (g2, a2) = line_graph(3, 0.01, 0.04);
        let (_, std2) = loschmidt_rand_avg(&c, &a2, &g2, &NoiseModel::GlobalDepolarizing, 5, 4).unwrap();
        assert!(std2.abs() < 1e-12, "std {std2}");
    }

    #[test]
    fn weak_error_linear_relation_scaling() {
        // |(F-1) - (F_LE-1)/2| shrinks ~ s^2
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.004, 0.012);
        let ev = Evaluator::new(&c);
        let resid = |scale: f64| {
            let gs = g.scaled_weights(scale);
            let (f, f_le) = ev.evaluate(&a, &gs, &NoiseModel::LocalDepolarizing).unwrap();
            ((f - 1.0) - (f_le - 1.0) / 2.0).abs()
        };
        let r1 = resid(1.0);
        let r2 = resid(0.5);
        let ratio = r1 / r2;
        assert!((ratio - 4.0).abs() < 0.8, "quadratic residual scaling violated: {ratio}");
    }

    #[test]
    fn unitary_adjoint_error_echo_is_perfect() {
        let c = build_ghz(3);
        let (g, a) = line_graph(3, 0.02, 0.3);
        let noise = CoherentNoise::new()
            .with_term(
                GateKindTag::SqrtIswap,
                CoherentTerm { axis: CoherentAxis::Zz, angle: 20.0, weight_scaled: true },
            )
            .with_term(
                GateKindTag::SqrtIswapInv,
                CoherentTerm { axis: CoherentAxis::Zz, angle: 20.0, weight_scaled: true },
            )
            .with_term(
                GateKindTag::PhasedXz,
                CoherentTerm { axis: CoherentAxis::Z, angle: 5.0, weight_scaled: true },
            );
        let nm = NoiseModel::UnitaryAdjointError(noise);
        let ev = Evaluator::new(&c);
        let (f, f_le) = ev.evaluate(&a, &g, &nm).unwrap();
        assert!((f_le - 1.0).abs() < 1e-12, "echo must hide unitary error, F_LE = {f_le}");
        assert!(f < 0.999, "fidelity should be damaged, F = {f}");
    }
}
