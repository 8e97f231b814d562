//! Command-line interface. `main` only parses arguments and calls [`execute`].

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use diskpack_core::analysis::{analyze, contact_graph, classify_regular, AnalysisOptions, CONSTRUCTED_BOND_THRESHOLD};
use diskpack_core::construct::{build_packing_from_path, enumerate_all, SpecString};
use diskpack_core::sim::SimConfig;
use diskpack_core::Packing;

use crate::batch::{frequency_table, run_batch, runs_csv, seed_list};
use crate::experiments::{table1_row, tightness_row, ExperimentRecipe};
use crate::io::{read_packing, sig14, write_packing, write_text};
use crate::svg::{render, RenderStyle};

#[derive(Debug, Parser)]
#[command(name = "diskpack", version, about = "Dense packings of equal disks in a circle")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// First seed; batches use consecutive seeds from here.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for batches (defaults to the available cores).
    #[arg(long, global = true, env = "DISKPACK_PARALLELISM")]
    pub parallelism: Option<usize>,
    /// Relative D/d change below which a run counts as converged.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file or directory.
    #[arg(long, global = true, env = "DISKPACK_OUT_DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct SimArgs {
    /// Radius growth rate over the mean disk speed.
    #[arg(long, default_value_t = 1e-3)]
    pub growth: f64,
    /// Collisions per convergence check.
    #[arg(long, default_value_t = 1_000_000)]
    pub window: u64,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_collisions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Thresholds {
    /// Bond threshold 1e-9 for constructed packings.
    Constructed,
    /// Bond threshold 1e-13 for converged simulator output.
    Simulated,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one curved hexagonal packing, e.g. "k=5;order=1,2,3,4" or "k=5;flips=3".
    Construct { spec: String },
    /// List every curved hexagonal class with k layers.
    Enumerate { k: u32 },
    /// Run a batch of simulations for n disks.
    Pack {
        n: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Contact, rattler, rigidity and regularity report for a packing file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Thresholds::Constructed)]
        thresholds: Thresholds,
    },
    /// Draw a packing file as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        no_bonds: bool,
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long, value_enum, default_value_t = Thresholds::Constructed)]
        thresholds: Thresholds,
    },
    /// Curved hexagonal formulas next to the best simulated packings.
    Table1 {
        #[arg(long, value_delimiter = ',', default_values_t = [6, 7, 8])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        runs: usize,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Best D/d for h(k)-1, h(k), h(k)+1 disks and the tightness ratio.
    Tightness {
        k: u32,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Run every command of a recipe manifest.
    Recipe { file: PathBuf },
}

impl Thresholds {
    fn options(self) -> AnalysisOptions {
        match self {
            Thresholds::Constructed => AnalysisOptions::CONSTRUCTED,
            Thresholds::Simulated => AnalysisOptions::SIMULATED,
        }
    }
}

impl GlobalArgs {
    fn parallelism(&self) -> usize {
        self.parallelism
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    fn sim_template(&self, sim: &SimArgs) -> SimConfig {
        let mut c = SimConfig {
            growth_to_speed_ratio: sim.growth,
            convergence_window: sim.window,
            max_collisions: sim.max_collisions,
            ..SimConfig::default()
        };
        if let Some(tol) = self.tol {
            c.convergence_rel_tol = tol;
        }
        c
    }

    /// `--out` as a file when it has an extension, otherwise as a directory holding
    /// `default_name`.
    fn file(&self, default_name: &str) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        Some(if out.extension().is_some() { out.clone() } else { out.join(default_name) })
    }

    fn dir(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

pub fn execute(cli: &Cli, w: &mut dyn Write) -> anyhow::Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Construct { spec } => {
            let spec: SpecString = spec.parse()?;
            let path = spec.to_path();
            let p = build_packing_from_path(&path)?;
            let regular = classify_regular(&p, &contact_graph(&p, CONSTRUCTED_BOND_THRESHOLD)).is_some();
            writeln!(w, "spec     {path}")?;
            writeln!(w, "n        {}", p.len())?;
            writeln!(w, "density  {}", sig14(p.density()))?;
            writeln!(w, "D/d      {}", sig14(p.ratio()))?;
            writeln!(w, "pattern  {}", if regular { "regular" } else { "irregular" })?;
            if let Some(file) = g.file(&format!("curved-hex-k{}.json", path.k)) {
                write_packing(&file, &p)?;
                writeln!(w, "wrote    {}", file.display())?;
            }
        }
        Command::Enumerate { k } => {
            let classes = enumerate_all(*k)?;
            writeln!(w, "{} classes with k={k}", classes.len())?;
            for (i, (spec, p)) in classes.iter().enumerate() {
                let regular = classify_regular(p, &contact_graph(p, CONSTRUCTED_BOND_THRESHOLD)).is_some();
                writeln!(w, "{:>5}  {spec}  {}", i + 1, if regular { "regular" } else { "irregular" })?;
                if let Some(dir) = g.dir() {
                    write_packing(&dir.join(format!("k{k}-class{:04}.json", i + 1)), p)?;
                }
            }
        }
        Command::Pack { n, runs, sim } => {
            if *n < 2 {
                bail!("pack needs at least 2 disks");
            }
            if *runs == 0 {
                bail!("runs must be at least 1");
            }
            let template = SimConfig { n: *n, ..g.sim_template(sim) };
            let report = run_batch(&template, &seed_list(g.seed, *runs), g.parallelism());
            write!(w, "{}", frequency_table(&report))?;
            let (seed, best) = report.best().context("every run failed")?;
            writeln!(w, "best     seed {seed}: density {} D/d {}", sig14(best.packing.density()), sig14(best.packing.ratio()))?;
            for (seed, err) in report.failures() {
                writeln!(w, "failed   seed {seed}: {err}")?;
            }
            if let Some(dir) = g.dir() {
                write_packing(&dir.join("best.json"), &best.packing)?;
                write_text(&dir.join("runs.csv"), &runs_csv(&report)?)?;
                write_text(&dir.join("patterns.json"), &serde_json::to_string_pretty(&report.patterns)?)?;
                writeln!(w, "wrote    {}", dir.display())?;
            }
        }
        Command::Analyze { file, thresholds } => {
            let p = read_packing(file)?;
            let report = analyze(&p, thresholds.options());
            let text = serde_json::to_string_pretty(&report)?;
            match g.file("analysis.json") {
                Some(path) => write_text(&path, &text)?,
                None => writeln!(w, "{text}")?,
            }
        }
        Command::Render { file, no_bonds, labels, size, thresholds } => {
            let p: Packing = read_packing(file)?;
            let style = RenderStyle {
                bonds: !no_bonds,
                bond_threshold: thresholds.options().bond_threshold,
                size: *size,
                labels: *labels,
            };
            let svg = render(&p, &style);
            let stem = file.file_stem().map_or("packing".into(), |s| s.to_string_lossy().into_owned());
            match g.file(&format!("{stem}.svg")) {
                Some(path) => write_text(&path, &svg)?,
                None => write!(w, "{svg}")?,
            }
        }
        Command::Table1 { k, runs, sim } => {
            writeln!(
                w,
                "{:>3} {:>5} {:>18} {:>18} {:>18} {:>18} {:>7}",
                "k", "n", "hex density", "hex D/d", "best density", "best D/d", "better"
            )?;
            let mut rows = Vec::new();
            for &k in k {
                let row = table1_row(k, &g.sim_template(sim), g.seed, *runs, g.parallelism())?;
                let opt = |x: Option<f64>| x.map_or("-".to_string(), sig14);
                writeln!(
                    w,
                    "{:>3} {:>5} {:>18} {:>18} {:>18} {:>18} {:>3}/{:<3}",
                    row.k,
                    row.n,
                    sig14(row.hex_density),
                    sig14(row.hex_ratio),
                    opt(row.best_density),
                    opt(row.best_ratio),
                    row.better,
                    row.runs
                )?;
                rows.push(row);
            }
            if let Some(path) = g.file("table1.json") {
                write_text(&path, &serde_json::to_string_pretty(&rows)?)?;
            }
        }
        Command::Tightness { k, runs, sim } => {
            let row = tightness_row(*k, &g.sim_template(sim), g.seed, *runs, g.parallelism())?;
            writeln!(
                w,
                "k={} D/d(h-1) {} D/d(h) {} D/d(h+1) {} ratio {}{}",
                row.k,
                sig14(row.ratios[0]),
                sig14(row.ratios[1]),
                sig14(row.ratios[2]),
                row.tightness.map_or("-".to_string(), |t| format!("{t:.4}")),
                if row.unconverged { " (unconverged)" } else { "" }
            )?;
            if let Some(path) = g.file(&format!("tightness-k{k}.json")) {
                write_text(&path, &serde_json::to_string_pretty(&row)?)?;
            }
        }
        Command::Recipe { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let recipe: ExperimentRecipe = serde_json::from_str(&text).context("malformed recipe")?;
            let out_dir = g.dir().map_or_else(|| recipe.name.clone(), |d| d.display().to_string());
            for args in recipe.expand(&out_dir) {
                writeln!(w, "# {}", args[1..].join(" "))?;
                let cli = Cli::try_parse_from(&args)?;
                if matches!(cli.command, Command::Recipe { .. }) {
                    bail!("recipes cannot nest");
                }
                execute(&cli, w)?;
            }
        }
    }
    Ok(())
}
