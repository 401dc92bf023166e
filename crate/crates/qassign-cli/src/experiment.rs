//! Shared experiment plumbing: circuit family construction, noise-mode
//! resolution, and the per-assignment sweep used by both `sweep` and the
//! offline annealer.

use num_complex::Complex64;

use qassign::circuit::{
    build_clifford_conjugation, build_ghz, build_qft_basis, build_random_circuit, build_swapnet,
    Circuit, GateKindTag,
};
use qassign::graph::{NoiseGraph, Population};
use qassign::metrics::{extrapolate_f, f0_of_assignment, loschmidt_rand_avg, Evaluator, MetricsRecord};
use qassign::readout::{reject, ConfusionMatrix};
use qassign::rng::seeded_rng;
use qassign::sim::{CoherentAxis, CoherentNoise, CoherentTerm, NoiseModel};

use crate::args::{CircuitArgs, CircuitFamily, NoiseMode, SweepArgs};
use crate::error::CliError;

/// Sweeps larger than this are refused; the assignment count grows
/// combinatorially with the device size.
pub const SWEEP_BUDGET: usize = 1_000_000;

pub fn build_circuit(args: &CircuitArgs) -> Result<Circuit, CliError> {
    if args.n == 0 {
        return Err(CliError::BadArgument("n must be at least 1".into()));
    }
    Ok(match args.circuit {
        CircuitFamily::Ghz => build_ghz(args.n),
        CircuitFamily::Swapnet => {
            let alpha = Complex64::new((args.theta / 2.0).cos(), 0.0);
            let beta = Complex64::from_polar((args.theta / 2.0).sin(), args.phi);
            let hops = args.hops.unwrap_or(args.n - 1);
            build_swapnet(args.n, alpha, beta, hops)?
        }
        CircuitFamily::Clifford => build_clifford_conjugation(args.n, args.circuit_seed),
        CircuitFamily::Qft => build_qft_basis(args.n, args.j)?,
        CircuitFamily::Random => build_random_circuit(args.n, args.depth, args.circuit_seed),
    })
}

pub fn noise_model(mode: NoiseMode) -> NoiseModel {
    match mode {
        NoiseMode::None => NoiseModel::None,
        NoiseMode::Local => NoiseModel::LocalDepolarizing,
        NoiseMode::Global => NoiseModel::GlobalDepolarizing,
        NoiseMode::Coherent => NoiseModel::UnitaryAdjointError(
            CoherentNoise::new()
                .with_term(
                    GateKindTag::SqrtIswap,
                    CoherentTerm { axis: CoherentAxis::Zz, angle: 2.0, weight_scaled: true },
                )
                .with_term(
                    GateKindTag::SqrtIswapInv,
                    CoherentTerm { axis: CoherentAxis::Zz, angle: 2.0, weight_scaled: true },
                )
                .with_term(
                    GateKindTag::PhasedXz,
                    CoherentTerm { axis: CoherentAxis::Z, angle: 1.0, weight_scaled: true },
                ),
        ),
    }
}

/// One sweep row per assignment, in enumeration order: the metric record
/// plus the derived extrapolation and readout verdict.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub record: MetricsRecord,
    pub f_extrap: Option<f64>,
    pub f_le_stderr: Option<f64>,
    pub rejected: bool,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(args: &SweepArgs, g: &NoiseGraph) -> Result<SweepResult, CliError> {
    let circuit = build_circuit(&args.circuit)?;
    let nm = noise_model(args.noise);
    let paths = qassign::graph::enumerate_simple_paths_capped(g, args.circuit.n, SWEEP_BUDGET)
        .map_err(|e| match e {
            qassign::graph::GraphError::PopulationCap { cap } => {
                CliError::BudgetExceeded { assignments: cap + 1, budget: cap }
            }
            other => CliError::Graph(other),
        })?;
    let population = Population::from_paths(g, paths)?;
    let ev = Evaluator::new(&circuit);
    let mut rows = Vec::with_capacity(population.len());
    for (idx, a) in population.paths().iter().enumerate() {
        let cm = ConfusionMatrix::from_graph(g, a)?;
        let rejected = reject(&cm, qassign::readout::REJECT_THRESHOLD).rejected;
        let (f, f_le_exact) = ev.evaluate(a, g, &nm)?;
        let (f_le, f_le_stderr) = if args.shots > 0 {
            let mut rng = seeded_rng(args.seed, "sweep-shots", idx as u64);
            let (est, se) = ev.loschmidt_sampled(
                a,
                g,
                &nm,
                args.shots,
                Some(&cm),
                args.readout_correct,
                &mut rng,
            )?;
            (est, Some(se))
        } else {
            (f_le_exact, None)
        };
        let f0 = f0_of_assignment(&circuit, a, g)?;
        let f_extrap = extrapolate_f(f_le, f0).ok();
        let (f_le_rand_mean, f_le_rand_std) = if args.rand_ensemble > 0 {
            let (mean, std) = loschmidt_rand_avg(
                &circuit,
                a,
                g,
                &nm,
                args.rand_ensemble,
                args.seed.wrapping_mul(0x9e37_79b9).wrapping_add(idx as u64),
            )?;
            (Some(mean), Some(std))
        } else {
            (None, None)
        };
        rows.push(SweepRow {
            record: MetricsRecord {
                assignment: a.clone(),
                f,
                f_le,
                f0,
                f_le_rand_mean,
                f_le_rand_std,
                shots: args.shots,
            },
            f_extrap,
            f_le_stderr,
            rejected,
        });
    }
    Ok(SweepResult { rows })
}
