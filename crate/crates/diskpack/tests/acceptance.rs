//! Acceptance gate: every criterion at its stated tolerance, one PASS/FAIL line each.
//!
//! Lines are written straight to stderr so they show up with or without `--nocapture`.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use diskpack::batch::{run_batch, seed_list, BatchReport};
use diskpack::io::{from_json, to_json};
use diskpack_core::analysis::{
    classify_regular, contact_graph, find_rattlers, match_curved_hex, rigidity_test, CONSTRUCTED_BOND_THRESHOLD,
    SIMULATED_MATCH_TOL,
};
use diskpack_core::construct::{build_packing_from_path, enumerate_all, enumerate_outward_in, PathSpec};
use diskpack_core::fingerprint::{fingerprint, DEFAULT_QUANTUM};
use diskpack_core::formulas::{curved_hex_density, curved_hex_ratio, LIMIT_DENSITY};
use diskpack_core::geom::PI;
use diskpack_core::sim::{Contact, ReferenceSimulation, SimConfig, Simulation};
use diskpack_core::{congruent, Packing, Point};
use rand::{Rng, SeedableRng};

struct Verdict {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn report(v: &Verdict) {
    let line = format!(
        "[{}] criterion {} ({}): {} [{:.1}s]\n",
        if v.pass { "PASS" } else { "FAIL" },
        v.id,
        v.name,
        v.detail,
        v.elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn criterion(id: u32, name: &'static str, body: impl FnOnce() -> (bool, String)) -> Verdict {
    let start = Instant::now();
    let (pass, detail) = body();
    let v = Verdict { id, name, pass, detail, elapsed: start.elapsed() };
    report(&v);
    v
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn formula_fidelity() -> (bool, String) {
    let table = [
        (6, 0.81622935362082, 12.473713245670),
        (7, 0.81710701192903, 14.381489999655),
        (8, 0.81776562948873, 16.289788298679),
    ];
    let start = Instant::now();
    let values: Vec<(f64, f64)> = table.iter().map(|&(k, _, _)| (curved_hex_density(k), curved_hex_ratio(k))).collect();
    let took = start.elapsed();
    let worst = table
        .iter()
        .zip(&values)
        .map(|(&(_, d, r), &(dc, rc))| rel(dc, d).max(rel(rc, r)))
        .fold(0.0, f64::max);
    (
        worst < 1e-12 && took < Duration::from_millis(1),
        format!("worst relative error {worst:.2e} (< 1e-12), {:.1} us", took.as_secs_f64() * 1e6),
    )
}

fn limit_behaviour() -> (bool, String) {
    let start = Instant::now();
    let below = (1..=10_000u32).all(|k| curved_hex_density(k) < LIMIT_DENSITY);
    let gap = (curved_hex_density(10_000) - LIMIT_DENSITY).abs();
    let took = start.elapsed();
    (
        below && gap < 1e-7 && took < Duration::from_secs(1),
        format!("below the limit for k<=1e4: {below}; |density(1e4) - pi^2/12| = {gap:.4e} (needs < 1e-7)"),
    )
}

fn enumeration_counts() -> (bool, String) {
    let want_classes = [1usize, 1, 1, 3, 12];
    let want_regular = [1usize, 1, 1, 2, 4];
    let mut got_classes = Vec::new();
    let mut got_regular = Vec::new();
    let mut methods_agree = true;
    for k in 1..=5u32 {
        let classes = enumerate_all(k).map(|c| c).unwrap_or_default();
        got_classes.push(classes.len());
        got_regular.push(
            classes
                .iter()
                .filter(|(_, p)| classify_regular(p, &contact_graph(p, CONSTRUCTED_BOND_THRESHOLD)).is_some())
                .count(),
        );
        let by_path: BTreeSet<_> = classes.iter().map(|(_, p)| fingerprint(p, DEFAULT_QUANTUM)).collect();
        let by_layers: BTreeSet<_> = enumerate_outward_in(k).map(|m| m.into_keys().collect()).unwrap_or_default();
        methods_agree &= by_path == by_layers;
    }
    (
        got_classes == want_classes && got_regular == want_regular && methods_agree,
        format!("classes {got_classes:?}, regular {got_regular:?}, methods agree: {methods_agree}"),
    )
}

fn construction_validity() -> (bool, String) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for k in 1..=8u32 {
        let classes = match enumerate_all(k) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("k={k}: {e}"));
                continue;
            }
        };
        for (spec, p) in classes {
            checked += 1;
            let g = contact_graph(&p, CONSTRUCTED_BOND_THRESHOLD);
            let ok = p.validate(1e-9).is_empty()
                && (p.ratio() - curved_hex_ratio(k)).abs() < 1e-9
                && congruent(&p, &p.rotated(PI / 3.0), 1e-9)
                && find_rattlers(&g).is_empty()
                && rigidity_test(&p, &g).rigid;
            if !ok {
                failures.push(spec.to_string());
            }
        }
    }
    (failures.is_empty(), format!("{checked} packings for k<=8, failures: {failures:?}"))
}

fn within(p: &Packing, ratio: f64) -> bool {
    (p.ratio() - ratio).abs() < 1e-9
}

fn max_wall(report: &BatchReport) -> f64 {
    report.successes().map(|(_, o)| o.wall_seconds).fold(0.0, f64::max)
}

fn simulator_ground_truth(n19: &BatchReport) -> (bool, String) {
    let n7 = run_batch(&SimConfig::new(7, 0), &seed_list(0, 10), parallelism());
    let hits7 = n7.successes().filter(|(_, o)| within(&o.packing, 3.0)).count();
    let target = curved_hex_ratio(2);
    let hits19 = n19
        .successes()
        .take(20)
        .filter(|(_, o)| within(&o.packing, target) && match_curved_hex(&o.packing, SIMULATED_MATCH_TOL).is_some())
        .count();
    let slowest = max_wall(&n7).max(max_wall(n19));
    (
        hits7 >= 8 && hits19 >= 5 && slowest < 60.0,
        format!("n=7: {hits7}/10 at D/d=3; n=19: {hits19}/20 matched the curved-hex class; slowest run {slowest:.1}s"),
    )
}

fn transition_at_six() -> (bool, String) {
    // budget: 20 runs, each capped at 2e7 collisions
    let template = SimConfig { max_collisions: 20_000_000, ..SimConfig::new(127, 0) };
    let report = run_batch(&template, &seed_list(0, 20), parallelism());
    let bar = 0.81622935362082;
    let better: Vec<u64> = report.successes().filter(|(_, o)| o.packing.density() > bar).map(|(s, _)| s).collect();
    let best = report.best().map_or(f64::NAN, |(_, o)| o.packing.density());
    (
        !better.is_empty(),
        format!("{} of 20 runs denser than {bar} (seeds {better:?}); best density {best:.14}", better.len()),
    )
}

fn tightness_k2(n19: &BatchReport) -> (bool, String) {
    let n18 = run_batch(&SimConfig::new(18, 0), &seed_list(0, 30), parallelism());
    let best = |r: &BatchReport| r.successes().map(|(_, o)| o.packing.ratio()).fold(f64::INFINITY, f64::min);
    let (r18, r19) = (best(&n18), best(n19));
    ((r18 - r19).abs() < 1e-6, format!("best D/d n=18 {r18:.14}, n=19 {r19:.14}, difference {:.2e}", (r18 - r19).abs()))
}

fn property_suites() -> (bool, String) {
    let mut notes = Vec::new();

    // no overlap at every committed event
    let config = SimConfig { check_invariants: true, ..SimConfig::new(19, 77) };
    let mut sim = Simulation::new(&config).unwrap();
    let mut worst_gap = f64::INFINITY;
    let mut overlap_ok = true;
    for _ in 0..100_000 {
        if sim.step().is_err() {
            overlap_ok = false;
            break;
        }
        worst_gap = worst_gap.min(sim.min_gap());
    }
    overlap_ok &= worst_gap >= -1e-12;
    notes.push(format!("min gap {worst_gap:.1e}"));

    // zero growth conserves energy and wall speeds
    let config = SimConfig {
        growth_to_speed_ratio: 0.0,
        initial_fraction: 0.3,
        rebase_interval: u64::MAX,
        ..SimConfig::new(19, 78)
    };
    let mut sim = Simulation::new(&config).unwrap();
    let energy = |s: &Simulation| s.disks().iter().map(|d| d.vel.norm_sq()).sum::<f64>();
    let mut worst_drift: f64 = 0.0;
    for _ in 0..20_000 {
        let before = energy(&sim);
        let speeds: Vec<f64> = sim.disks().iter().map(|d| d.vel.norm()).collect();
        let ev = sim.step().unwrap();
        worst_drift = worst_drift.max(rel(energy(&sim), before));
        if let Contact::Wall(i) = ev.contact {
            worst_drift = worst_drift.max(rel(sim.disks()[i].vel.norm(), speeds[i]));
        }
    }
    let energy_ok = worst_drift < 1e-12;
    notes.push(format!("energy drift {worst_drift:.1e}"));

    // fast engine against the naive reference
    let config = SimConfig::new(5, 79);
    let mut fast = Simulation::new(&config).unwrap();
    let mut slow = ReferenceSimulation::new(&config).unwrap();
    let mut same_events = true;
    for _ in 0..100_000 {
        let (a, b) = (fast.step().unwrap(), slow.step().unwrap());
        same_events &= a.contact == b.contact && (a.time - b.time).abs() < 1e-9;
    }
    let drift = fast.positions().iter().zip(slow.positions()).map(|(p, q)| p.distance(q)).fold(0.0, f64::max);
    let engines_ok = same_events && drift < 1e-9;
    notes.push(format!("engine divergence {drift:.1e}"));

    // fingerprints under random rotations and reflections
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(80);
    let base = build_packing_from_path(&PathSpec::new(5, vec![2, 4, 1, 3], Default::default()).unwrap()).unwrap();
    let f0 = fingerprint(&base, DEFAULT_QUANTUM);
    let fingerprint_ok = (0..200).all(|_| {
        let mut q = base.rotated(rng.gen_range(-10.0..10.0));
        if rng.gen_bool(0.5) {
            q = q.reflected().rotated(rng.gen_range(-10.0..10.0));
        }
        fingerprint(&q, DEFAULT_QUANTUM) == f0
    });

    // interchange round trip
    let round_trip_ok = (0..200).all(|_| {
        let n = rng.gen_range(0..50);
        let centers = (0..n)
            .map(|_| Point::new(f64::from_bits(rng.gen::<u64>() >> 2), -rng.gen::<f64>() * 1e-300))
            .collect();
        let p = Packing::new(rng.gen_range(1.0..1e9), rng.gen_range(1e-9..0.5), centers).unwrap();
        let q = from_json(&to_json(&p)).unwrap();
        q.container_radius.to_bits() == p.container_radius.to_bits()
            && q.disk_radius.to_bits() == p.disk_radius.to_bits()
            && p.centers.iter().zip(&q.centers).all(|(a, b)| a.x.to_bits() == b.x.to_bits() && a.y.to_bits() == b.y.to_bits())
    });

    let pass = overlap_ok && energy_ok && engines_ok && fingerprint_ok && round_trip_ok;
    (
        pass,
        format!(
            "no-overlap {overlap_ok}, energy {energy_ok}, engines {engines_ok}, fingerprint {fingerprint_ok}, round-trip {round_trip_ok} ({})",
            notes.join(", ")
        ),
    )
}

#[test]
fn acceptance() {
    let mut verdicts = vec![
        criterion(1, "formula fidelity", formula_fidelity),
        criterion(2, "limit behaviour", limit_behaviour),
        criterion(3, "enumeration counts", enumeration_counts),
        criterion(4, "construction validity", construction_validity),
    ];
    let n19 = run_batch(&SimConfig::new(19, 0), &seed_list(0, 30), parallelism());
    verdicts.push(criterion(5, "simulator ground truth", || simulator_ground_truth(&n19)));
    verdicts.push(criterion(6, "transition at k=6", transition_at_six));
    verdicts.push(criterion(7, "tightness k=2", || tightness_k2(&n19)));
    verdicts.push(criterion(8, "property suites", property_suites));

    let _ = std::io::stderr().write_all(b"---- acceptance summary ----\n");
    for v in &verdicts {
        report(v);
    }
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
