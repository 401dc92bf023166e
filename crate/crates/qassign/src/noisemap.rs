//! Synthetic device noisemaps: rectangular grids with random weight draws and
//! optional planted-optimum paths.

use rand::Rng;

use crate::graph::{Assignment, NoiseGraph, Population};
use crate::rng::seeded_rng;

/// Inclusive-exclusive uniform range for a weight draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightRange {
    pub lo: f64,
    pub hi: f64,
}

impl WeightRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(0.0 <= lo && lo <= hi && hi <= 1.0, "invalid weight range [{lo}, {hi})");
        Self { lo, hi }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..self.hi)
        }
    }
}

/// Recipe for a random grid noisemap.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisemapSpec {
    pub rows: usize,
    pub cols: usize,
    pub eps: WeightRange,
    pub eta: WeightRange,
    pub p10: WeightRange,
    pub p01: WeightRange,
    /// When set, the weights along one randomly chosen simple path of this
    /// length are multiplied by `planted_factor`, planting a known optimum.
    pub planted_len: Option<usize>,
    pub planted_factor: f64,
}

impl NoisemapSpec {
    /// The simulated-device default: a 5x5 grid with weak random weights.
    pub fn grid5x5() -> Self {
        Self {
            rows: 5,
            cols: 5,
            eps: WeightRange::new(1e-3, 4e-3),
            eta: WeightRange::new(5e-3, 2e-2),
            p10: WeightRange::new(0.01, 0.05),
            p01: WeightRange::new(0.01, 0.08),
            planted_len: None,
            planted_factor: 0.15,
        }
    }
}

/// Deterministically generate a noisemap from a seed. Returns the graph and,
/// in planted mode, the chosen path.
pub fn generate(spec: &NoisemapSpec, seed: u64) -> (NoiseGraph, Option<Assignment>) {
    assert!(spec.rows >= 2 && spec.cols >= 2, "grid must be at least 2x2");
    let mut rng = seeded_rng(seed, "noisemap", 0);
    let mut g = NoiseGraph::new();
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let id = (r * spec.cols + c) as u32;
            let eps = spec.eps.sample(&mut rng);
            let p10 = spec.p10.sample(&mut rng);
            let p01 = spec.p01.sample(&mut rng);
            g.add_qubit(id, Some((r as i32, c as i32)), eps, (p10, p01)).unwrap();
        }
    }
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let id = (r * spec.cols + c) as u32;
            if c + 1 < spec.cols {
                g.add_edge(id, id + 1, spec.eta.sample(&mut rng)).unwrap();
            }
            if r + 1 < spec.rows {
                g.add_edge(id, id + spec.cols as u32, spec.eta.sample(&mut rng)).unwrap();
            }
        }
    }
    let planted = spec.planted_len.map(|len| {
        let pick = choose_planted_site(&g, len, &mut rng);
        g = funnel_toward(&g, &pick);
        // uniform low weights along the path: the planted assignment and its
        // reversal become exact co-optima of the sweep
        g = g.with_path_weights_set(
            pick.path(),
            spec.eps.lo * spec.planted_factor,
            spec.eta.lo * spec.planted_factor,
        );
        pick
    });
    (g, planted)
}

/// Move-set bound the planted basin is shaped for.
const PLANTED_NEIGHBORHOOD_K: usize = 2;

/// Plant along a path whose assignment neighborhood is smallest (the device
/// boundary), where local search concentrates fastest. Ties are broken by the
/// seeded draw.
fn choose_planted_site<R: Rng>(g: &NoiseGraph, len: usize, rng: &mut R) -> Assignment {
    let pop = Population::enumerate(g, len).expect("planted population");
    assert!(!pop.is_empty(), "no path of length {len} to plant");
    let sizes: Vec<usize> = (0..pop.len())
        .map(|i| pop.neighbor_indices(i, PLANTED_NEIGHBORHOOD_K).len())
        .collect();
    let min = *sizes.iter().min().unwrap();
    let candidates: Vec<usize> = (0..pop.len()).filter(|&i| sizes[i] == min).collect();
    pop.paths()[candidates[rng.gen_range(0..candidates.len())]].clone()
}

/// Grade the background weights by grid distance from the planted path so the
/// cost landscape funnels search toward it, mirroring an engineered-optimum
/// device map.
const FUNNEL_SLOPE: f64 = 1.0;
const FUNNEL_CAP: f64 = 4.0;

fn funnel_toward(g: &NoiseGraph, path: &Assignment) -> NoiseGraph {
    let dist = |v: u32| -> f64 {
        let (r, c) = g.coord(v).expect("grid vertices carry coordinates");
        path.path()
            .iter()
            .map(|&p| {
                let (pr, pc) = g.coord(p).unwrap();
                ((r - pr).abs() + (c - pc).abs()) as f64
            })
            .fold(f64::MAX, f64::min)
    };
    let grade = |d: f64| (1.0 + FUNNEL_SLOPE * d).min(FUNNEL_CAP);
    let mut out = g.clone();
    for v in g.vertices().collect::<Vec<_>>() {
        let scaled = (g.eps(v).unwrap() * grade(dist(v))).clamp(0.0, 1.0);
        out.set_eps(v, scaled).unwrap();
    }
    for (a, b) in g.edges().collect::<Vec<_>>() {
        let scaled = (g.eta(a, b).unwrap() * grade(dist(a).min(dist(b)))).clamp(0.0, 1.0);
        out.set_eta(a, b, scaled).unwrap();
    }
    out
}
