//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured quantities (visible under `--nocapture`).
//!
//! Run with `cargo test -p qassign --test acceptance -- --nocapture`.

use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;

use qassign::anneal::{anneal, random_baseline, locality, CostOracle, Schedule};
use qassign::circuit::{
    build_ghz, build_qft_basis, build_random_circuit, GateKindTag,
};
use qassign::dfe;
use qassign::graph::{enumerate_simple_paths, Assignment, NeighborTable, NoiseGraph, Population};
use qassign::metrics::{extrapolate_f, f0_of_assignment, Evaluator};
use qassign::noisemap::{generate, NoisemapSpec};
use qassign::readout::{reject, ConfusionMatrix, REJECT_THRESHOLD};
use qassign::rng::seeded_rng;
use qassign::sim::{self, CoherentAxis, CoherentNoise, CoherentTerm, NoiseModel};
use qassign::stats::{
    bootstrap_mean_ci, conditional_percentile_prob, kendall_tau_b, PairedSample,
};

fn line_graph_with(weights: &[(f64, f64)], etas: &[f64]) -> (NoiseGraph, Assignment) {
    let n = weights.len();
    let mut g = NoiseGraph::new();
    for (v, &(eps, _)) in weights.iter().enumerate() {
        g.add_qubit(v as u32, None, eps, (0.0, 0.0)).unwrap();
    }
    for (v, &eta) in etas.iter().enumerate() {
        g.add_edge(v as u32, v as u32 + 1, eta).unwrap();
    }
    (g, Assignment::new((0..n as u32).collect()))
}

/// 5x5 grid with fresh uniform weight draws, eps <= 1e-3 and eta <= 1e-2.
fn weak_random_grid(seed: u64) -> NoiseGraph {
    let spec = NoisemapSpec {
        rows: 5,
        cols: 5,
        eps: qassign::noisemap::WeightRange::new(0.0, 1e-3),
        eta: qassign::noisemap::WeightRange::new(0.0, 1e-2),
        p10: qassign::noisemap::WeightRange::new(0.0, 0.0),
        p01: qassign::noisemap::WeightRange::new(0.0, 0.0),
        planted_len: None,
        planted_factor: 1.0,
    };
    generate(&spec, seed).0
}

fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0
}

fn layout_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../layouts")
        .join(name)
}

// ---------------------------------------------------------------------------
// 1. Global-depolarizing closed forms
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_global_depolarizing_closed_forms() {
    let start = Instant::now();
    let mut worst_le = 0.0f64;
    let mut worst_f = 0.0f64;
    for i in 0..50u64 {
        let n = 2 + (i as usize % 3); // n in {2, 3, 4}
        let depth = 3 + (i as usize % 5);
        let c = build_random_circuit(n, depth, 1000 + i);
        let mut rng = seeded_rng(0xac1, "weights", i);
        let weights: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..0.05), 0.0)).collect();
        let etas: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..0.08)).collect();
        let (g, a) = line_graph_with(&weights, &etas);

        let ev = Evaluator::new(&c);
        let (f, f_le) = ev.evaluate(&a, &g, &NoiseModel::GlobalDepolarizing).unwrap();
        let f0 = f0_of_assignment(&c, &a, &g).unwrap();
        let d = (1usize << n) as f64;
        worst_le = worst_le.max((f_le - ((d - 1.0) / d * f0 * f0 + 1.0 / d)).abs());
        worst_f = worst_f.max((f - ((d - 1.0) / d * f0 + 1.0 / d)).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst_le <= 1e-12, "F_LE closed-form deviation {worst_le}");
    assert!(worst_f <= 1e-12, "F closed-form deviation {worst_f}");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "[criterion 1] PASS: closed forms within 1e-12 over 50 circuits \
         (max |dF_LE| = {worst_le:.2e}, max |dF| = {worst_f:.2e}, {elapsed:.2?})"
    );
}

// ---------------------------------------------------------------------------
// 2. Weak-error argmax concordance
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_weak_error_argmax_concordance() {
    let start = Instant::now();
    let c = build_ghz(5);
    let ev = Evaluator::new(&c);
    let mut agree = 0usize;
    let mut min_tau = f64::INFINITY;
    for draw in 0..20u64 {
        let g = weak_random_grid(100 + draw);
        let pop = Population::enumerate(&g, 5).unwrap();
        let mut fs = Vec::with_capacity(pop.len());
        let mut les = Vec::with_capacity(pop.len());
        for a in pop.paths() {
            let (f, f_le) = ev.evaluate(a, &g, &NoiseModel::LocalDepolarizing).unwrap();
            fs.push(f);
            les.push(f_le);
        }
        if argmax(&fs) == argmax(&les) {
            agree += 1;
        }
        let tau = kendall_tau_b(&PairedSample::new(les, fs).unwrap()).unwrap();
        min_tau = min_tau.min(tau);
        assert!(tau >= 0.9, "draw {draw}: tau_b(F_LE, F) = {tau}");
    }
    let elapsed = start.elapsed();
    assert!(agree >= 19, "argmax agreement only {agree}/20");
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "[criterion 2] PASS: argmax F_LE = argmax F in {agree}/20 draws, \
         min tau_b = {min_tau:.4} ({elapsed:.2?})"
    );
}

// ---------------------------------------------------------------------------
// 3. Single-error extrapolation accuracy and quadratic residual
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_extrapolation_accuracy() {
    let start = Instant::now();
    let c = build_ghz(5);
    let ev = Evaluator::new(&c);
    let mut worst_residual = 0.0f64;
    let mut worst_ratio_err = 0.0f64;
    for draw in 0..20u64 {
        let g = weak_random_grid(100 + draw);
        let pop = Population::enumerate(&g, 5).unwrap();
        let max_residual = |graph: &NoiseGraph| -> (f64, f64) {
            // (max residual overall, max residual on F >= 0.9)
            let mut max_all = 0.0f64;
            let mut max_high = 0.0f64;
            for a in pop.paths() {
                let (f, f_le) = ev.evaluate(a, graph, &NoiseModel::LocalDepolarizing).unwrap();
                let f0 = f0_of_assignment(&c, a, graph).unwrap();
                let resid = (extrapolate_f(f_le, f0).unwrap() - f).abs();
                max_all = max_all.max(resid);
                if f >= 0.9 {
                    max_high = max_high.max(resid);
                }
            }
            (max_all, max_high)
        };
        let (full_all, full_high) = max_residual(&g);
        assert!(full_high <= 0.01, "draw {draw}: residual {full_high} above 0.01");
        worst_residual = worst_residual.max(full_high);

        let (half_all, _) = max_residual(&g.scaled_weights(0.5));
        let ratio = full_all / half_all;
        assert!(
            (3.2..=4.8).contains(&ratio),
            "draw {draw}: residual ratio {ratio} outside 4x +/- 20%"
        );
        worst_ratio_err = worst_ratio_err.max((ratio - 4.0).abs());
    }
    let elapsed = start.elapsed();
    println!(
        "[criterion 3] PASS: extrapolation residual <= {worst_residual:.2e} at F >= 0.9; \
         halving weights scales the residual by 4 +/- {worst_ratio_err:.2} ({elapsed:.2?})"
    );
}

// ---------------------------------------------------------------------------
// 4. Weak-error linear relation between F and F_LE
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_weak_error_linear_relation() {
    let c = build_ghz(4);
    let mut rng = seeded_rng(0xac4, "weights", 0);
    let weights: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(5e-4..2e-3), 0.0)).collect();
    let etas: Vec<f64> = (0..3).map(|_| rng.gen_range(4e-3..1e-2)).collect();
    let (g, a) = line_graph_with(&weights, &etas);
    let ev = Evaluator::new(&c);
    let normalized: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|&s| {
            let gs = g.scaled_weights(s);
            let (f, f_le) = ev.evaluate(&a, &gs, &NoiseModel::LocalDepolarizing).unwrap();
            ((f - 1.0) - (f_le - 1.0) / 2.0).abs() / (s * s)
        })
        .collect();
    let max = normalized.iter().cloned().fold(f64::MIN, f64::max);
    let min = normalized.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max / min;
    assert!(spread <= 1.25, "normalized residuals vary by {spread}: {normalized:?}");
    println!(
        "[criterion 4] PASS: |(F-1) - (F_LE-1)/2| / s^2 constant within {:.1}% over s in {{1, 1/2, 1/4}}",
        (spread - 1.0) * 100.0
    );
}

// ---------------------------------------------------------------------------
// 5. Adjoint-reversed unitary noise decouples F_LE from F
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_unitary_counterexample() {
    let spec = NoisemapSpec {
        rows: 5,
        cols: 5,
        eps: qassign::noisemap::WeightRange::new(0.05, 0.3),
        eta: qassign::noisemap::WeightRange::new(0.1, 0.9),
        p10: qassign::noisemap::WeightRange::new(0.0, 0.0),
        p01: qassign::noisemap::WeightRange::new(0.0, 0.0),
        planted_len: None,
        planted_factor: 1.0,
    };
    let (g, _) = generate(&spec, 0xac5);
    let noise = CoherentNoise::new()
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
        );
    let nm = NoiseModel::UnitaryAdjointError(noise);
    let c = build_ghz(5);
    let ev = Evaluator::new(&c);
    let pop = Population::enumerate(&g, 5).unwrap();
    let mut worst_echo = 0.0f64;
    let mut fs = Vec::with_capacity(pop.len());
    for a in pop.paths() {
        let (f, f_le) = ev.evaluate(a, &g, &nm).unwrap();
        worst_echo = worst_echo.max((f_le - 1.0).abs());
        fs.push(f);
    }
    let fmin = fs.iter().cloned().fold(f64::MAX, f64::min);
    let fmax = fs.iter().cloned().fold(f64::MIN, f64::max);
    assert!(worst_echo <= 1e-12, "F_LE drifted from 1 by {worst_echo}");
    assert!(fmin <= 0.9, "no assignment with F <= 0.9 (min {fmin})");
    assert!(fmax - fmin >= 0.1, "F range {:.3} too narrow", fmax - fmin);
    println!(
        "[criterion 5] PASS: F_LE = 1 within {worst_echo:.1e} on all {} assignments while \
         F spans [{fmin:.3}, {fmax:.3}]",
        pop.len()
    );
}

// ---------------------------------------------------------------------------
// 6. Readout bias, correction, and rejection
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_readout_bias_and_correction() {
    let c = build_ghz(4);
    let mut g = NoiseGraph::new();
    let rates = [(0.03, 0.06), (0.05, 0.02), (0.04, 0.08), (0.02, 0.05)];
    for (v, &(p10, p01)) in rates.iter().enumerate() {
        g.add_qubit(v as u32, None, 0.0, (p10, p01)).unwrap();
    }
    for v in 0..3u32 {
        g.add_edge(v, v + 1, 0.0).unwrap();
    }
    let a = Assignment::new(vec![0, 1, 2, 3]);
    let cm = ConfusionMatrix::from_graph(&g, &a).unwrap();
    let ev = Evaluator::new(&c);

    // analytic path: uncorrected survival equals the product of p(0|0)
    let biased = ev
        .loschmidt_observed(&a, &g, &NoiseModel::None, Some(&cm), false)
        .unwrap();
    let want: f64 = rates.iter().map(|&(p10, _)| 1.0 - p10).product();
    assert!((biased - want).abs() <= 1e-12, "bias {biased} vs {want}");

    // sampled path: corrected estimate returns to 1 within shot noise
    let t = 15_000u64;
    let mut rng = seeded_rng(0xac6, "shots", 0);
    let (corrected, stderr) = ev
        .loschmidt_sampled(&a, &g, &NoiseModel::None, t, Some(&cm), true, &mut rng)
        .unwrap();
    assert!(
        (corrected - 1.0).abs() <= 3.0 * stderr,
        "corrected {corrected} not within 3 stderr ({stderr}) of 1"
    );

    // rejection at the 0.15 threshold
    let bad = ConfusionMatrix::from_rates(vec![(0.02, 0.02), (0.02, 0.2)]).unwrap();
    assert!(reject(&bad, REJECT_THRESHOLD).rejected);
    let boundary = ConfusionMatrix::from_rates(vec![(0.15, 0.15)]).unwrap();
    assert!(!reject(&boundary, REJECT_THRESHOLD).rejected);

    println!(
        "[criterion 6] PASS: uncorrected F_LE = prod p(0|0) = {want:.4} exactly; \
         corrected sampled F_LE = {corrected:.4} within 3 x {stderr:.1e} of 1; \
         rejection threshold enforced strictly"
    );
}

// ---------------------------------------------------------------------------
// 7. Annealing beats matched random search on the planted map
// ---------------------------------------------------------------------------

fn planted_spec() -> NoisemapSpec {
    let mut spec = NoisemapSpec::grid5x5();
    spec.eps = qassign::noisemap::WeightRange::new(2e-3, 6e-3);
    spec.eta = qassign::noisemap::WeightRange::new(2e-2, 6e-2);
    spec.planted_len = Some(5);
    spec.planted_factor = 0.05;
    spec
}

#[test]
fn criterion_07_annealing_vs_random_baseline() {
    let start = Instant::now();
    let (g, planted) = generate(&planted_spec(), 20);
    let planted = planted.unwrap();

    let c = build_ghz(5);
    let ev = Evaluator::new(&c);
    let pop = Population::enumerate(&g, 5).unwrap();
    let costs: Vec<f64> = pop
        .paths()
        .iter()
        .map(|a| 1.0 - ev.loschmidt_exact(a, &g, &NoiseModel::LocalDepolarizing).unwrap())
        .collect();
    let optimum = costs.iter().cloned().fold(f64::MAX, f64::min);
    let best_idx = costs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let best_path = &pop.paths()[best_idx];
    assert!(
        best_path == &planted || best_path == &planted.reversed(),
        "exhaustive optimum is not the planted path"
    );

    let table = NeighborTable::build(&pop, 2);
    let schedule = Schedule::Exponential { t0: 0.10, alpha: 0.987 };
    let trials = 500usize;
    let steps = 150usize;
    let mut found = 0usize;
    let mut improvements = Vec::with_capacity(trials);
    let mut ns_values = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = seeded_rng(0xac7, "trial", trial as u64);
        let init = rng.gen_range(0..pop.len());
        let mut oracle = CostOracle::from_table(&costs);
        let trace = anneal(&pop, &table, &mut oracle, schedule, steps, init, &mut rng).unwrap();
        if trace.best_cost <= optimum + 1e-12 {
            found += 1;
        }
        ns_values.push(trace.n_s);
        let mut brng = seeded_rng(0xac7, "baseline", trial as u64);
        let base = random_baseline(&costs, trace.n_s, 1, &mut brng).unwrap()[0];
        // improvement in survival units: F_sa - F_random
        improvements.push(base - trace.best_cost);
    }
    let frac = found as f64 / trials as f64;
    let mean_improvement: f64 = improvements.iter().sum::<f64>() / trials as f64;
    let mut crng = seeded_rng(0xac7, "ci", 0);
    let (lo, hi) = bootstrap_mean_ci(&improvements, 10_000, 0.95, &mut crng);
    let mean_ns: f64 = ns_values.iter().sum::<usize>() as f64 / trials as f64;
    let elapsed = start.elapsed();
    assert!(frac >= 0.8, "only {frac:.2} of trials reached the optimum");
    assert!(lo > 0.0, "bootstrap CI [{lo:.5}, {hi:.5}] does not exclude 0");
    assert!(elapsed.as_secs_f64() < 900.0, "took {elapsed:?}");
    println!(
        "[criterion 7] PASS: {:.1}% of {trials} anneals found the planted optimum; mean F_LE \
         improvement over best-of-n_s random = {mean_improvement:.5} (95% CI [{lo:.5}, {hi:.5}]), \
         mean n_s = {mean_ns:.1} ({elapsed:.2?})",
        frac * 100.0
    );
}

// ---------------------------------------------------------------------------
// 8. Cost-landscape locality decreases with the neighborhood bound
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_locality_decreases_with_k() {
    let (g, _) = generate(&planted_spec(), 20);
    let c = build_ghz(5);
    let ev = Evaluator::new(&c);
    let pop = Population::enumerate(&g, 5).unwrap();
    let values: Vec<f64> = pop
        .paths()
        .iter()
        .map(|a| ev.loschmidt_exact(a, &g, &NoiseModel::LocalDepolarizing).unwrap())
        .collect();
    let ks = [0usize, 1, 2, 3];
    let loc = locality(&pop, &values, &ks);
    for w in loc.windows(2) {
        assert!(w[0] <= w[1] + 1e-15, "locality not monotone: {loc:?}");
    }
    println!(
        "[criterion 8] PASS: mean |dF_LE| per neighborhood is non-increasing toward smaller k: \
         {:?}",
        loc.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>()
    );
}

// ---------------------------------------------------------------------------
// 9. Statistics oracles
// ---------------------------------------------------------------------------

fn kendall_brute(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let sign = |a: f64, b: f64| -> i64 {
        if a > b {
            1
        } else if a < b {
            -1
        } else {
            0
        }
    };
    let (mut c, mut d) = (0i64, 0i64);
    let (mut n1, mut n2) = (0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = sign(x[i], x[j]);
            let dy = sign(y[i], y[j]);
            if dx == 0 {
                n1 += 1;
            }
            if dy == 0 {
                n2 += 1;
            }
            if dx != 0 && dy != 0 {
                if dx == dy {
                    c += 1;
                } else {
                    d += 1;
                }
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    (c - d) as f64 / ((n0 - n1 as f64) * (n0 - n2 as f64)).sqrt()
}

#[test]
fn criterion_09_statistics_oracles() {
    // exact agreement with O(n^2) pair counting at n = 500, ties included
    let mut rng = seeded_rng(0xac9, "tau", 0);
    let n = 500usize;
    let x: Vec<f64> = (0..n).map(|_| (rng.gen_range(0..200) as f64) / 7.0).collect();
    let y: Vec<f64> = (0..n)
        .map(|i| x[i] * 0.5 + (rng.gen_range(0..150) as f64) / 5.0)
        .collect();
    let fast = kendall_tau_b(&PairedSample::new(x.clone(), y.clone()).unwrap()).unwrap();
    let brute = kendall_brute(&x, &y);
    assert!((fast - brute).abs() <= 1e-12, "tau mismatch: {fast} vs {brute}");

    // independent uniforms: P(Y_k | X_k) ~ 1 - k/100
    let m = 10_000usize;
    let mut rng = seeded_rng(0xac9, "cond", 0);
    let xu: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
    let yu: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
    let s = PairedSample::new(xu, yu).unwrap();
    let mut worst_z = 0.0f64;
    for k in [25.0, 50.0, 85.0] {
        let p = conditional_percentile_prob(&s, k).unwrap();
        let q = 1.0 - k / 100.0;
        let sigma = (q * (1.0 - q) / (m as f64 * q)).sqrt();
        let z = (p - q).abs() / sigma;
        worst_z = worst_z.max(z);
        assert!(z <= 3.0, "k={k}: {p} vs {q} is {z:.2} sigma off");
    }
    println!(
        "[criterion 9] PASS: tau_b equals brute force at n=500 (|delta| = {:.1e}); \
         conditional exceedance within {worst_z:.2} sigma of 1 - k/100",
        (fast - brute).abs()
    );
}

// ---------------------------------------------------------------------------
// 10. DFE estimators agree with exact fidelity
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_dfe_estimators() {
    let t = 15_000u64;
    let seeds = 50usize;

    // GHZ-4 under local depolarizing
    let c = build_ghz(4);
    let (g, a) = line_graph_with(
        &[(0.002, 0.0), (0.004, 0.0), (0.003, 0.0), (0.005, 0.0)],
        &[0.01, 0.015, 0.02],
    );
    let rho = sim::run(&c, &a, &g, &NoiseModel::LocalDepolarizing).unwrap();
    let f_exact = Evaluator::new(&c).fidelity(&a, &g, &NoiseModel::LocalDepolarizing).unwrap();
    assert_eq!(dfe::ghz_settings(4).len(), 5, "GHZ recipe must use n + 1 settings");
    let mut estimates = Vec::with_capacity(seeds);
    for i in 0..seeds {
        let mut rng = seeded_rng(0xac10, "ghz", i as u64);
        estimates.push(dfe::ghz_dfe_sampled(&rho, t, &mut rng).unwrap());
    }
    let mean: f64 = estimates.iter().sum::<f64>() / seeds as f64;
    let std: f64 = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>()
        / (seeds as f64 - 1.0))
        .sqrt();
    let sem = std / (seeds as f64).sqrt();
    let z_ghz = (mean - f_exact).abs() / sem;
    assert!(z_ghz <= 5.0, "GHZ DFE mean {mean} vs {f_exact} is {z_ghz:.2} sem off");

    // QFT-3 on |j=5> under local depolarizing
    let cq = build_qft_basis(3, 5).unwrap();
    let (gq, aq) = line_graph_with(&[(0.002, 0.0), (0.003, 0.0), (0.004, 0.0)], &[0.012, 0.018]);
    let rhoq = sim::run(&cq, &aq, &gq, &NoiseModel::LocalDepolarizing).unwrap();
    let fq_exact = Evaluator::new(&cq).fidelity(&aq, &gq, &NoiseModel::LocalDepolarizing).unwrap();
    assert_eq!(dfe::qft_settings(3, 5).len(), 1, "QFT recipe must use one setting");
    let mut estimates = Vec::with_capacity(seeds);
    for i in 0..seeds {
        let mut rng = seeded_rng(0xac10, "qft", i as u64);
        estimates.push(dfe::qft_dfe_sampled(&rhoq, 5, t, &mut rng).unwrap());
    }
    let meanq: f64 = estimates.iter().sum::<f64>() / seeds as f64;
    let stdq: f64 = (estimates.iter().map(|e| (e - meanq).powi(2)).sum::<f64>()
        / (seeds as f64 - 1.0))
        .sqrt();
    let semq = stdq / (seeds as f64).sqrt();
    let z_qft = (meanq - fq_exact).abs() / semq;
    assert!(z_qft <= 5.0, "QFT DFE mean {meanq} vs {fq_exact} is {z_qft:.2} sem off");

    println!(
        "[criterion 10] PASS: GHZ DFE mean {mean:.4} vs F = {f_exact:.4} ({z_ghz:.2} sem) with 5 \
         settings; QFT DFE mean {meanq:.4} vs F = {fq_exact:.4} ({z_qft:.2} sem) with 1 setting"
    );
}

// ---------------------------------------------------------------------------
// 11. Path-count layout diagnostics
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_path_count_layout_validation() {
    let square = NoiseGraph::grid(2, 2, 0.0, 0.0, (0.0, 0.0));
    assert_eq!(enumerate_simple_paths(&square, 3).len(), 8);

    let rainbow = NoiseGraph::load_layout(&layout_path("rainbow.json")).unwrap();
    assert_eq!(rainbow.vertex_count(), 23);
    let r3 = enumerate_simple_paths(&rainbow, 3).len();
    let r8 = enumerate_simple_paths(&rainbow, 8).len();
    let r9 = enumerate_simple_paths(&rainbow, 9).len();
    assert_eq!(r3, 148, "rainbow n=3 count");
    assert_eq!(r8, 2984, "rainbow n=8 count");
    assert_eq!(r9, 4972, "rainbow n=9 count");

    let weber = NoiseGraph::load_layout(&layout_path("weber.json")).unwrap();
    assert_eq!(weber.vertex_count(), 53);
    let w4 = enumerate_simple_paths(&weber, 4).len();
    assert_eq!(w4, 1116, "weber n=4 count");

    println!(
        "[criterion 11] PASS: 2x2/n=3 -> 8; rainbow -> {r3}/{r8}/{r9} for n=3/8/9; \
         weber -> {w4} for n=4"
    );
}
