//! Table-style experiments built on batches, and reproducible recipe manifests.

use std::collections::BTreeMap;

use diskpack_core::analysis::tightness_ratio;
use diskpack_core::formulas::{curved_hex_density, curved_hex_ratio, hex_number};
use diskpack_core::sim::SimConfig;
use serde::{Deserialize, Serialize};

use crate::batch::{run_batch, seed_list, BatchReport};

/// A curved hexagonal row next to the best simulated packing of the same size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub k: u32,
    pub n: usize,
    pub hex_density: f64,
    pub hex_ratio: f64,
    pub best_density: Option<f64>,
    pub best_ratio: Option<f64>,
    /// Runs that beat the curved hexagonal density.
    pub better: usize,
    pub runs: usize,
}

pub fn table1_row(k: u32, template: &SimConfig, first_seed: u64, runs: usize, parallelism: usize) -> anyhow::Result<Table1Row> {
    let n = hex_number(k)? as usize;
    let report = run_batch(&SimConfig { n, ..template.clone() }, &seed_list(first_seed, runs), parallelism);
    let hex_density = curved_hex_density(k);
    let best = report.best().map(|(_, o)| o.packing.clone());
    Ok(Table1Row {
        k,
        n,
        hex_density,
        hex_ratio: curved_hex_ratio(k),
        best_density: best.as_ref().map(|p| p.density()),
        best_ratio: best.as_ref().map(|p| p.ratio()),
        better: report.successes().filter(|(_, o)| o.packing.density() > hex_density).count(),
        runs,
    })
}

/// Best D/d at h(k)-1, h(k), h(k)+1 disks and the resulting tightness ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRow {
    pub k: u32,
    pub ratios: [f64; 3],
    pub tightness: Option<f64>,
    /// The h(k) batch missed the curved hexagonal D/d, so the ratio is not trustworthy.
    pub unconverged: bool,
    pub runs: usize,
}

/// Best-of-batch D/d for `n` disks.
pub fn best_ratio(report: &BatchReport) -> Option<f64> {
    report.best().map(|(_, o)| o.packing.ratio())
}

pub fn tightness_row(k: u32, template: &SimConfig, first_seed: u64, runs: usize, parallelism: usize) -> anyhow::Result<TightnessRow> {
    let h = hex_number(k)? as usize;
    let mut best = Vec::new();
    for n in [h - 1, h, h + 1] {
        let report = run_batch(&SimConfig { n, ..template.clone() }, &seed_list(first_seed, runs), parallelism);
        let (_, out) = report.best().ok_or_else(|| anyhow::anyhow!("every run with {n} disks failed"))?;
        best.push(out.packing.clone());
    }
    let ratios = [best[0].ratio(), best[1].ratio(), best[2].ratio()];
    Ok(TightnessRow {
        k,
        ratios,
        tightness: tightness_ratio(&best[0], &best[1], &best[2]).ok(),
        unconverged: (ratios[1] - curved_hex_ratio(k)).abs() > 1e-9,
        runs,
    })
}

/// A named sequence of command lines with the seeds and outputs they use.
///
/// In every argument, `{seed}` expands to the first seed and `{out}` to the recipe's
/// output directory. Tolerance overrides are passed as `--tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecipe {
    pub name: String,
    pub commands: Vec<Vec<String>>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl ExperimentRecipe {
    /// Argument vectors ready for the command-line parser.
    pub fn expand(&self, out_dir: &str) -> Vec<Vec<String>> {
        let seed = self.seeds.first().copied().unwrap_or(0).to_string();
        self.commands
            .iter()
            .map(|cmd| {
                let mut args: Vec<String> = std::iter::once("diskpack".to_string())
                    .chain(cmd.iter().map(|a| a.replace("{seed}", &seed).replace("{out}", out_dir)))
                    .collect();
                if let Some(tol) = self.tolerances.get("convergence_rel_tol") {
                    args.extend(["--tol".to_string(), tol.to_string()]);
                }
                args
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipe_expansion() {
        let recipe: ExperimentRecipe = serde_json::from_str(
            r#"{"name": "t", "commands": [["pack", "7", "--seed", "{seed}", "--out", "{out}/p"]], "seeds": [5],
                "tolerances": {"convergence_rel_tol": 1e-14}}"#,
        )
        .unwrap();
        let args = recipe.expand("res");
        assert_eq!(args[0], ["diskpack", "pack", "7", "--seed", "5", "--out", "res/p", "--tol", "0.00000000000001"]);
    }

    #[test]
    fn formula_columns() {
        let template = SimConfig { max_collisions: 1000, ..SimConfig::default() };
        let row = table1_row(1, &template, 0, 1, 1).unwrap();
        assert_eq!(row.n, 7);
        assert!((row.hex_ratio - 3.0).abs() < 1e-15);
        assert_eq!(row.better, 0);
    }
}
