//! Subcommand implementations.

use std::path::Path;

use rand::Rng;
use serde_json::json;

use qassign::anneal::{anneal, locality, random_baseline, CostOracle, Schedule};
use qassign::graph::{Assignment, NeighborTable, NoiseGraph, Population};
use qassign::metrics::Evaluator;
use qassign::noisemap::{generate, NoisemapSpec, WeightRange};
use qassign::rng::seeded_rng;
use qassign::stats::{
    bootstrap_mean_ci, bootstrap_std, conditional_percentile_prob, kendall_tau_b, PairedSample,
};

use crate::args::{AnnealArgs, GenArgs, ReportArgs, RerunArgs, SweepArgs};
use crate::error::CliError;
use crate::experiment::{build_circuit, noise_model, run_sweep, SweepRow};
use crate::manifest::RunManifest;

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// gen-noisemap
// ---------------------------------------------------------------------------

pub fn cmd_gen_noisemap(args: &GenArgs) -> Result<(), CliError> {
    if args.rows < 2 || args.cols < 2 {
        return Err(CliError::BadArgument("grid must be at least 2x2".into()));
    }
    let check = |name: &str, lo: f64, hi: f64| -> Result<WeightRange, CliError> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(CliError::BadArgument(format!("bad {name} range [{lo}, {hi}]")));
        }
        Ok(WeightRange::new(lo, hi))
    };
    let spec = NoisemapSpec {
        rows: args.rows,
        cols: args.cols,
        eps: check("eps", args.eps_lo, args.eps_hi)?,
        eta: check("eta", args.eta_lo, args.eta_hi)?,
        p10: check("p10", args.p10_lo, args.p10_hi)?,
        p01: check("p01", args.p01_lo, args.p01_hi)?,
        planted_len: args.planted_len,
        planted_factor: args.planted_factor,
    };
    let (graph, planted) = generate(&spec, args.seed);
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    graph.save_layout(&args.out)?;

    let mut manifest = RunManifest::new("gen-noisemap", args);
    manifest.record_output(&args.out)?;
    let manifest_name = format!(
        "{}.manifest.json",
        args.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    );
    let dir = args.out.parent().map(Path::to_path_buf).unwrap_or_default();
    manifest.write(&dir, &manifest_name)?;

    println!(
        "{}",
        json!({
            "layout": args.out.display().to_string(),
            "qubits": graph.vertex_count(),
            "edges": graph.edge_count(),
            "planted": planted.map(|p| p.to_compact_string()),
        })
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let g = NoiseGraph::load_layout(&args.layout)?.scaled_weights(args.weight_scale);
    let result = run_sweep(args, &g)?;
    ensure_dir(&args.out)?;

    let csv_path = args.out.join("sweep.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    w.write_record([
        "path",
        "f",
        "f_le",
        "f0",
        "f_extrap",
        "f_le_stderr",
        "f_le_rand_mean",
        "f_le_rand_std",
        "shots",
        "rejected",
    ])?;
    for row in &result.rows {
        let r = &row.record;
        w.write_record([
            r.assignment.to_compact_string(),
            r.f.to_string(),
            r.f_le.to_string(),
            r.f0.to_string(),
            fmt_opt(row.f_extrap),
            fmt_opt(row.f_le_stderr),
            fmt_opt(r.f_le_rand_mean),
            fmt_opt(r.f_le_rand_std),
            r.shots.to_string(),
            row.rejected.to_string(),
        ])?;
    }
    w.flush()?;

    let mut manifest = RunManifest::new("sweep", args);
    manifest.record_output(&csv_path)?;
    manifest.write(&args.out, "manifest.json")?;

    println!(
        "{}",
        json!({
            "sweep": csv_path.display().to_string(),
            "assignments": result.rows.len(),
            "rejected": result.rows.iter().filter(|r| r.rejected).count(),
        })
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// anneal
// ---------------------------------------------------------------------------

pub fn cmd_anneal(args: &AnnealArgs) -> Result<(), CliError> {
    let g = NoiseGraph::load_layout(&args.layout)?;
    let circuit = build_circuit(&args.circuit)?;
    let nm = noise_model(args.noise);
    let pop = Population::enumerate(&g, args.circuit.n)?;
    if pop.is_empty() {
        return Err(CliError::InsufficientData("no assignments on this layout".into()));
    }

    // keep only assignments whose readout passes the rejection threshold
    let mut admissible: Vec<usize> = Vec::new();
    for (i, a) in pop.paths().iter().enumerate() {
        let cm = qassign::readout::ConfusionMatrix::from_graph(&g, a)?;
        if !qassign::readout::reject(&cm, args.reject_threshold).rejected {
            admissible.push(i);
        }
    }
    if admissible.len() < 2 {
        return Err(CliError::InsufficientData(
            "fewer than two assignments survive readout rejection".into(),
        ));
    }
    // restricted population preserving enumeration order
    let filtered: Vec<Assignment> =
        admissible.iter().map(|&i| pop.paths()[i].clone()).collect();
    let pop = Population::from_paths(&g, filtered)?;

    let ev = Evaluator::new(&circuit);
    let table = NeighborTable::build(&pop, args.k);
    let schedule = if args.log_schedule {
        Schedule::Logarithmic { t0: args.t0 }
    } else {
        Schedule::Exponential { t0: args.t0, alpha: args.alpha }
    };
    schedule.validate()?;

    // offline: one shared cost table; online: per-trial memoized evaluation
    let offline_costs: Option<Vec<f64>> = if args.online {
        None
    } else {
        let mut costs = Vec::with_capacity(pop.len());
        for a in pop.paths() {
            costs.push(1.0 - ev.loschmidt_exact(a, &g, &nm)?);
        }
        Some(costs)
    };

    ensure_dir(&args.out)?;
    let trials_path = args.out.join("trials.csv");
    let baseline_path = args.out.join("baseline.csv");
    let mut trials_csv = csv::Writer::from_path(&trials_path)?;
    trials_csv.write_record(["trial", "n_s", "best_cost", "best_f_le", "best_path"])?;
    let mut baseline_csv = csv::Writer::from_path(&baseline_path)?;
    baseline_csv.write_record(["trial", "n_s", "best_f_le"])?;

    let mut improvements = Vec::with_capacity(args.trials);
    let mut best_costs = Vec::with_capacity(args.trials);
    let mut trace_paths = Vec::new();
    let mut online_evals = 0usize;
    for trial in 0..args.trials {
        let mut rng = seeded_rng(args.seed, "anneal-trial", trial as u64);
        let init = rng.gen_range(0..pop.len());
        let mut oracle = match &offline_costs {
            Some(costs) => CostOracle::from_table(costs),
            None => {
                let g = &g;
                let ev = &ev;
                let nm = nm.clone();
                CostOracle::from_fn(move |a: &Assignment| {
                    1.0 - ev
                        .loschmidt_exact(a, g, &nm)
                        .expect("online cost evaluation")
                })
            }
        };
        let trace = anneal(&pop, &table, &mut oracle, schedule, args.steps, init, &mut rng)?;
        online_evals += trace.n_s;

        let best_f_le = 1.0 - trace.best_cost;
        trials_csv.write_record([
            trial.to_string(),
            trace.n_s.to_string(),
            trace.best_cost.to_string(),
            best_f_le.to_string(),
            pop.paths()[trace.best].to_compact_string(),
        ])?;

        // matched random baseline requires the full cost table
        if let Some(costs) = &offline_costs {
            let mut brng = seeded_rng(args.seed, "anneal-baseline", trial as u64);
            let base_cost = random_baseline(costs, trace.n_s, 1, &mut brng)?[0];
            baseline_csv.write_record([
                trial.to_string(),
                trace.n_s.to_string(),
                (1.0 - base_cost).to_string(),
            ])?;
            improvements.push(base_cost - trace.best_cost);
        }
        best_costs.push(trace.best_cost);

        if trial < args.traces {
            let trace_path = args.out.join(format!("trace_{trial:04}.csv"));
            let mut tw = csv::Writer::from_path(&trace_path)?;
            tw.write_record(["step", "temperature", "cost", "accepted", "n_s"])?;
            for s in &trace.steps {
                tw.write_record([
                    s.step.to_string(),
                    s.temperature.to_string(),
                    s.proposal_cost.to_string(),
                    s.accepted.to_string(),
                    s.n_s.to_string(),
                ])?;
            }
            tw.flush()?;
            trace_paths.push(trace_path);
        }
    }
    trials_csv.flush()?;
    baseline_csv.flush()?;

    let mean_best_f_le =
        best_costs.iter().map(|c| 1.0 - c).sum::<f64>() / best_costs.len().max(1) as f64;
    let summary = if improvements.is_empty() {
        json!({
            "mode": "online",
            "trials": args.trials,
            "mean_best_f_le": mean_best_f_le,
            "total_unique_evaluations": online_evals,
        })
    } else {
        let mean: f64 = improvements.iter().sum::<f64>() / improvements.len() as f64;
        let mut crng = seeded_rng(args.seed, "anneal-ci", 0);
        let (lo, hi) = bootstrap_mean_ci(&improvements, 10_000, 0.95, &mut crng);
        let optimum = offline_costs
            .as_ref()
            .unwrap()
            .iter()
            .cloned()
            .fold(f64::MAX, f64::min);
        let found = best_costs.iter().filter(|&&c| c <= optimum + 1e-12).count();
        json!({
            "mode": "offline",
            "trials": args.trials,
            "population": pop.len(),
            "mean_best_f_le": mean_best_f_le,
            "best_f_le": 1.0 - optimum,
            "fraction_optimal": found as f64 / args.trials.max(1) as f64,
            "mean_improvement_over_random": mean,
            "improvement_ci95": [lo, hi],
        })
    };
    let summary_path = args.out.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(&summary_path, text)?;

    let mut manifest = RunManifest::new("anneal", args);
    manifest.record_output(&trials_path)?;
    manifest.record_output(&baseline_path)?;
    manifest.record_output(&summary_path)?;
    for p in &trace_paths {
        manifest.record_output(p)?;
    }
    manifest.write(&args.out, "manifest.json")?;

    println!("{summary}");
    Ok(())
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct SweepTable {
    rows: Vec<SweepRow>,
}

fn read_sweep(path: &Path) -> Result<SweepTable, CliError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    let parse_opt = |s: &str| -> Option<f64> {
        if s.is_empty() {
            None
        } else {
            s.parse().ok()
        }
    };
    for record in reader.records() {
        let r = record?;
        let missing = |what: &str| CliError::InsufficientData(format!("sweep row missing {what}"));
        rows.push(SweepRow {
            record: qassign::metrics::MetricsRecord {
                assignment: Assignment::from_compact_string(r.get(0).unwrap_or_default())?,
                f: r.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| missing("fidelity"))?,
                f_le: r.get(2).and_then(|s| s.parse().ok()).ok_or_else(|| missing("f_le"))?,
                f0: r.get(3).and_then(|s| s.parse().ok()).ok_or_else(|| missing("f0"))?,
                f_le_rand_mean: parse_opt(r.get(6).unwrap_or_default()),
                f_le_rand_std: parse_opt(r.get(7).unwrap_or_default()),
                shots: r.get(8).and_then(|s| s.parse().ok()).unwrap_or(0),
            },
            f_extrap: parse_opt(r.get(4).unwrap_or_default()),
            f_le_stderr: parse_opt(r.get(5).unwrap_or_default()),
            rejected: r.get(9).map(|s| s == "true").unwrap_or(false),
        });
    }
    Ok(SweepTable { rows })
}

pub fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let table = read_sweep(&args.sweep)?;
    let kept: Vec<&SweepRow> = table.rows.iter().filter(|r| !r.rejected).collect();
    if kept.len() < 2 {
        return Err(CliError::InsufficientData(format!(
            "{} unrejected rows; need at least 2",
            kept.len()
        )));
    }
    let f: Vec<f64> = kept.iter().map(|r| r.record.f).collect();

    let mut metrics: Vec<(&str, Vec<f64>)> = vec![
        ("f_le", kept.iter().map(|r| r.record.f_le).collect()),
        ("f0", kept.iter().map(|r| r.record.f0).collect()),
    ];
    if kept.iter().all(|r| r.f_extrap.is_some()) {
        metrics.push(("f_extrap", kept.iter().map(|r| r.f_extrap.unwrap()).collect()));
    }
    if kept.iter().all(|r| r.record.f_le_rand_mean.is_some()) {
        metrics.push((
            "f_le_rand_mean",
            kept.iter().map(|r| r.record.f_le_rand_mean.unwrap()).collect(),
        ));
    }

    ensure_dir(&args.out)?;
    let tau_path = args.out.join("tau.csv");
    let mut tau_csv = csv::Writer::from_path(&tau_path)?;
    tau_csv.write_record(["metric", "tau_b", "bootstrap_std", "rows"])?;
    let mut tau_summary = Vec::new();
    for (name, xs) in &metrics {
        let sample = PairedSample::new(xs.clone(), f.clone())?;
        let tau = kendall_tau_b(&sample)?;
        let mut rng = seeded_rng(args.seed, "report-bootstrap", 0);
        let std = bootstrap_std(|s| kendall_tau_b(s).ok(), &sample, 1000, &mut rng);
        tau_csv.write_record([
            name.to_string(),
            tau.to_string(),
            std.to_string(),
            sample.len().to_string(),
        ])?;
        tau_summary.push(json!({ "metric": name, "tau_b": tau, "bootstrap_std": std }));
    }
    tau_csv.flush()?;

    let cond_path = args.out.join("conditional.csv");
    let mut cond_csv = csv::Writer::from_path(&cond_path)?;
    cond_csv.write_record(["metric", "k", "p"])?;
    let mut cond_summary = Vec::new();
    for (name, xs) in &metrics {
        let sample = PairedSample::new(xs.clone(), f.clone())?;
        for &k in &args.ks {
            let p = match conditional_percentile_prob(&sample, k) {
                Ok(p) => p,
                Err(qassign::stats::StatsError::EmptyCondition) => continue,
                Err(e) => return Err(e.into()),
            };
            cond_csv.write_record([name.to_string(), k.to_string(), p.to_string()])?;
            cond_summary.push(json!({ "metric": name, "k": k, "p": p }));
        }
    }
    cond_csv.flush()?;

    // locality needs the population structure behind the sweep
    let g = NoiseGraph::load_layout(&args.layout)?;
    let paths: Vec<Assignment> =
        table.rows.iter().map(|r| r.record.assignment.clone()).collect();
    let n = paths.first().map(Assignment::len).unwrap_or(0);
    let pop = Population::enumerate(&g, n)?;
    let loc_path = args.out.join("locality.csv");
    let mut loc_csv = csv::Writer::from_path(&loc_path)?;
    loc_csv.write_record(["k", "mean_abs_delta_f_le"])?;
    let mut loc_summary = Vec::new();
    if pop.len() == table.rows.len()
        && pop.paths().iter().zip(paths.iter()).all(|(a, b)| a == b)
    {
        let values: Vec<f64> = table.rows.iter().map(|r| r.record.f_le).collect();
        let loc = locality(&pop, &values, &args.locality_ks);
        for (&k, &v) in args.locality_ks.iter().zip(loc.iter()) {
            loc_csv.write_record([k.to_string(), v.to_string()])?;
            loc_summary.push(json!({ "k": k, "mean_abs_delta_f_le": v }));
        }
    } else {
        return Err(CliError::InsufficientData(
            "sweep rows do not match the layout's assignment enumeration".into(),
        ));
    }
    loc_csv.flush()?;

    let report = json!({
        "rows": table.rows.len(),
        "rejected": table.rows.len() - kept.len(),
        "tau": tau_summary,
        "conditional": cond_summary,
        "locality": loc_summary,
    });
    let report_path = args.out.join("report.json");
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    std::fs::write(&report_path, text)?;

    let mut manifest = RunManifest::new("report", args);
    for p in [&tau_path, &cond_path, &loc_path, &report_path] {
        manifest.record_output(p)?;
    }
    manifest.write(&args.out, "manifest.json")?;

    println!("{report}");
    Ok(())
}

// ---------------------------------------------------------------------------
// rerun
// ---------------------------------------------------------------------------

pub fn cmd_rerun(args: &RerunArgs) -> Result<(), CliError> {
    let manifest = RunManifest::load(&args.manifest)?;
    match manifest.command.as_str() {
        "gen-noisemap" => cmd_gen_noisemap(&serde_json::from_value(manifest.config)?),
        "sweep" => cmd_sweep(&serde_json::from_value(manifest.config)?),
        "anneal" => cmd_anneal(&serde_json::from_value(manifest.config)?),
        "report" => cmd_report(&serde_json::from_value(manifest.config)?),
        other => Err(CliError::BadArgument(format!("unknown command in manifest: {other}"))),
    }
}
