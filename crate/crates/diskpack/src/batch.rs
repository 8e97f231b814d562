//! Independent seeded simulator runs, executed on a bounded number of threads and
//! summarised as a frequency table of distinct jammed patterns.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use diskpack_core::analysis::{contact_graph, find_rattlers, Catalogue, SIMULATED_BOND_THRESHOLD, SIMULATED_MATCH_TOL};
use diskpack_core::construct::MAX_ENUMERATE_K;
use diskpack_core::formulas::HexIndex;
use diskpack_core::sim::{RunStats, SimConfig, Simulation};
use diskpack_core::{congruent, fingerprint::fingerprint, Packing};
use serde::Serialize;

/// Relative D/d agreement required before two runs are compared for congruence.
const SAME_RATIO: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub packing: Packing,
    pub stats: RunStats,
    pub wall_seconds: f64,
    /// Index into [`BatchReport::patterns`].
    pub pattern: usize,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub seed: u64,
    pub outcome: Result<RunOutput, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternRow {
    pub count: usize,
    /// Seed of the first run that produced the pattern.
    pub first_seed: u64,
    pub density: f64,
    pub ratio: f64,
    pub rattlers: usize,
    /// Canonical spec of the matching curved hexagonal class.
    pub curved_hex: Option<String>,
    pub digest: u64,
}

#[derive(Debug, Clone)]
pub struct BatchReport {
    pub n: usize,
    pub runs: Vec<RunRecord>,
    /// Distinct patterns, densest first.
    pub patterns: Vec<PatternRow>,
}

impl BatchReport {
    /// Densest successful run.
    pub fn best(&self) -> Option<(u64, &RunOutput)> {
        self.successes().max_by(|a, b| {
            a.1.packing.density().total_cmp(&b.1.packing.density()).then(b.0.cmp(&a.0))
        })
    }

    pub fn successes(&self) -> impl Iterator<Item = (u64, &RunOutput)> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().ok().map(|o| (r.seed, o)))
    }

    pub fn failures(&self) -> impl Iterator<Item = (u64, &str)> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (r.seed, e.as_str())))
    }
}

/// `count` consecutive seeds starting at `first`.
pub fn seed_list(first: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| first.wrapping_add(i)).collect()
}

/// Runs one simulation per seed. Output depends only on the template and the seeds
/// (wall-clock times aside), whatever the degree of parallelism.
pub fn run_batch(template: &SimConfig, seeds: &[u64], parallelism: usize) -> BatchReport {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<(Packing, RunStats, f64), String>>>> = Mutex::new(vec![None; seeds.len()]);
    let workers = parallelism.clamp(1, seeds.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= seeds.len() {
                    break;
                }
                let config = SimConfig { seed: seeds[i], ..template.clone() };
                let start = Instant::now();
                let outcome = Simulation::new(&config)
                    .and_then(|mut sim| {
                        let stats = sim.run()?;
                        Ok((sim.snapshot(), stats))
                    })
                    .map(|(p, s)| (p, s, start.elapsed().as_secs_f64()))
                    .map_err(|e| e.to_string());
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(outcome);
            });
        }
    });

    let catalogue = HexIndex::from_count(template.n as u64)
        .filter(|h| h.k() <= MAX_ENUMERATE_K)
        .and_then(|h| Catalogue::new(h.k()).ok());
    let mut groups: Vec<(Packing, PatternRow)> = Vec::new();
    let mut runs = Vec::with_capacity(seeds.len());
    for (seed, slot) in seeds.iter().zip(slots.into_inner().expect("workers finished")) {
        let outcome = slot.expect("every seed was run").map(|(packing, stats, wall_seconds)| {
            let pattern = classify(&mut groups, &packing, *seed, catalogue.as_ref());
            RunOutput { packing, stats, wall_seconds, pattern }
        });
        runs.push(RunRecord { seed: *seed, outcome });
    }

    // densest first; earlier discovery breaks ties
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| groups[b].1.density.total_cmp(&groups[a].1.density).then(a.cmp(&b)));
    let mut rank = vec![0; groups.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    for run in runs.iter_mut() {
        if let Ok(out) = run.outcome.as_mut() {
            out.pattern = rank[out.pattern];
        }
    }
    let patterns = order.into_iter().map(|g| groups[g].1.clone()).collect();
    BatchReport { n: template.n, runs, patterns }
}

/// The jammed part of a simulated packing (rattlers wander from run to run).
fn jammed_part(p: &Packing) -> (Packing, usize) {
    let rattlers = find_rattlers(&contact_graph(p, SIMULATED_BOND_THRESHOLD));
    if rattlers.len() == p.len() {
        return (p.clone(), rattlers.len());
    }
    let centers = (0..p.len()).filter(|i| !rattlers.contains(i)).map(|i| p.centers[i]).collect();
    (Packing { centers, ..p.clone() }, rattlers.len())
}

fn classify(groups: &mut Vec<(Packing, PatternRow)>, p: &Packing, seed: u64, catalogue: Option<&Catalogue>) -> usize {
    let (core, rattlers) = jammed_part(p);
    let ratio = p.ratio();
    let same = groups.iter().position(|(rep, row)| {
        ((row.ratio - ratio) / ratio).abs() < SAME_RATIO && congruent(rep, &core, SIMULATED_MATCH_TOL)
    });
    match same {
        Some(g) => {
            let row = &mut groups[g].1;
            row.count += 1;
            row.density = row.density.max(p.density());
            g
        }
        None => {
            let row = PatternRow {
                count: 1,
                first_seed: seed,
                density: p.density(),
                ratio,
                rattlers,
                curved_hex: catalogue.and_then(|c| c.find(p, SIMULATED_MATCH_TOL)).map(|s| s.to_string()),
                digest: fingerprint(&core, 1e-6).digest(),
            };
            groups.push((core, row));
            groups.len() - 1
        }
    }
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    seed: u64,
    status: &'a str,
    collisions: u64,
    events: u64,
    stale_events: u64,
    converged: bool,
    ratio: f64,
    density: f64,
    pattern: Option<usize>,
    wall_seconds: f64,
}

/// Per-run statistics as CSV.
pub fn runs_csv(report: &BatchReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for run in &report.runs {
        let row = match &run.outcome {
            Ok(o) => CsvRow {
                seed: run.seed,
                status: "ok",
                collisions: o.stats.collisions,
                events: o.stats.events,
                stale_events: o.stats.stale_events,
                converged: o.stats.converged,
                ratio: o.stats.final_ratio,
                density: o.stats.final_density,
                pattern: Some(o.pattern + 1),
                wall_seconds: o.wall_seconds,
            },
            Err(e) => CsvRow {
                seed: run.seed,
                status: e,
                collisions: 0,
                events: 0,
                stale_events: 0,
                converged: false,
                ratio: f64::NAN,
                density: f64::NAN,
                pattern: None,
                wall_seconds: 0.0,
            },
        };
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Frequency table as aligned text, one line per pattern.
pub fn frequency_table(report: &BatchReport) -> String {
    use crate::io::sig14;
    let total = report.runs.len();
    let mut out = format!("{:>4} {:>6} {:>18} {:>18} {:>8}  class\n", "#", "count", "density", "D/d", "rattlers");
    for (i, row) in report.patterns.iter().enumerate() {
        out.push_str(&format!(
            "{:>4} {:>6} {:>18} {:>18} {:>8}  {}\n",
            i + 1,
            row.count,
            sig14(row.density),
            sig14(row.ratio),
            row.rattlers,
            row.curved_hex.as_deref().unwrap_or("-"),
        ));
    }
    let failed = report.failures().count();
    out.push_str(&format!("{} runs, {} patterns, {} failed\n", total, report.patterns.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallelism_does_not_change_results() {
        let template = SimConfig { max_collisions: 20_000, ..SimConfig::new(10, 0) };
        let seeds = seed_list(3, 4);
        let a = run_batch(&template, &seeds, 1);
        let b = run_batch(&template, &seeds, 3);
        assert_eq!(a.patterns, b.patterns);
        for (x, y) in a.runs.iter().zip(&b.runs) {
            let (x, y) = (x.outcome.as_ref().unwrap(), y.outcome.as_ref().unwrap());
            assert_eq!(x.packing, y.packing);
            assert_eq!(x.stats, y.stats);
        }
        assert!(runs_csv(&a).unwrap().lines().count() == 5);
    }

    #[test]
    fn failures_are_recorded() {
        let template = SimConfig { convergence_window: 0, ..SimConfig::new(7, 0) };
        let report = run_batch(&template, &[1, 2], 2);
        assert_eq!(report.failures().count(), 2);
        assert!(report.best().is_none());
        assert!(frequency_table(&report).contains("2 failed"));
    }
}
