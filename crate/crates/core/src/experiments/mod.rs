//! Benchmark harness over generated instances and an exhaustive oracle for
//! tiny ones.
//!
//! A benchmark cell is one `(algorithm, S, budget, energy, N)` combination
//! run over a list of seeds. Every solution is validated before its
//! lifetime is recorded; a single infeasible solution aborts the run.

mod oracle;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use oracle::{exhaustive_oracle, tiny_instance, OracleCaps, OracleError, OracleResult};

use crate::construction::Engine;
use crate::exec::Exec;
use crate::model::{build_instance, BudgetLevel, EnergyLevel, GeneratorConfig, ModelError, Solution};
use crate::search::{search, Method, SearchConfig, SearchError};
use crate::validate::validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ch,
    Dh,
    Ls,
    Ts,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Ch, Algorithm::Dh, Algorithm::Ls, Algorithm::Ts];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ch => "CH",
            Algorithm::Dh => "DH",
            Algorithm::Ls => "LS",
            Algorithm::Ts => "TS",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ch" => Ok(Algorithm::Ch),
            "dh" => Ok(Algorithm::Dh),
            "ls" => Ok(Algorithm::Ls),
            "ts" => Ok(Algorithm::Ts),
            other => Err(format!("unknown algorithm '{other}' (expected ch, dh, ls or ts)")),
        }
    }
}

/// Random sink nodes for construction runs, shared by CH and DH on a seed.
pub fn random_sinks(nodes: usize, sinks: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000));
    let mut chosen = rand::seq::index::sample(&mut rng, nodes, sinks).into_vec();
    chosen.sort_unstable();
    chosen
}

/// Settings shared by every cell of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub horizon: usize,
    /// Overrides the search presets' iteration limit.
    pub iter_limit: Option<usize>,
    pub time_limit: Option<Duration>,
    pub exec: Exec,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            horizon: crate::model::DEFAULT_HORIZON,
            iter_limit: None,
            time_limit: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub sink_counts: Vec<usize>,
    pub budgets: Vec<BudgetLevel>,
    pub energies: Vec<EnergyLevel>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Writes measured seconds to the CSV; off gives byte-identical reports.
    pub record_time: bool,
    pub settings: RunSettings,
}

pub const DEFAULT_SIZES: [usize; 4] = [16, 25, 36, 49];
pub const LARGE_SIZE: usize = 225;

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Ch, Algorithm::Dh],
            sink_counts: vec![2, 3],
            budgets: BudgetLevel::ALL.to_vec(),
            energies: EnergyLevel::ALL.to_vec(),
            sizes: DEFAULT_SIZES.to_vec(),
            seeds: (0..10).collect(),
            record_time: true,
            settings: RunSettings::default(),
        }
    }
}

impl BenchConfig {
    /// Adds the 225-node grid.
    pub fn with_large(mut self) -> Self {
        if !self.sizes.contains(&LARGE_SIZE) {
            self.sizes.push(LARGE_SIZE);
        }
        self
    }

    /// Cell parameters in canonical report order.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for &algorithm in &self.algorithms {
            for &sinks in &self.sink_counts {
                for &budget in &self.budgets {
                    for &energy in &self.energies {
                        for &nodes in &self.sizes {
                            out.push(CellKey {
                                algorithm,
                                sinks,
                                budget,
                                energy,
                                nodes,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub algorithm: Algorithm,
    pub sinks: usize,
    pub budget: BudgetLevel,
    pub energy: EnergyLevel,
    pub nodes: usize,
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} S={} B={} E={} N={}",
            self.algorithm, self.sinks, self.budget, self.energy, self.nodes
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub lifetime: usize,
    pub cpu_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkCell {
    pub key: CellKey,
    pub runs: Vec<SeedRun>,
}

impl BenchmarkCell {
    pub fn replications(&self) -> usize {
        self.runs.len()
    }

    pub fn mean_lifetime(&self) -> f64 {
        self.runs.iter().map(|r| r.lifetime as f64).sum::<f64>() / self.runs.len().max(1) as f64
    }

    pub fn mean_cpu(&self) -> f64 {
        self.runs.iter().map(|r| r.cpu_seconds).sum::<f64>() / self.runs.len().max(1) as f64
    }

    pub fn lifetimes(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.lifetime).collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{cell} seed {seed}: infeasible solution ({violations} violation(s)); first: {first}")]
    Infeasible {
        cell: CellKey,
        seed: u64,
        violations: usize,
        first: String,
    },
    #[error("{cell} seed {seed}: {source}")]
    Instance {
        cell: CellKey,
        seed: u64,
        source: ModelError,
    },
    #[error("{cell} seed {seed}: {source}")]
    Search {
        cell: CellKey,
        seed: u64,
        source: SearchError,
    },
}

/// One validated run of `key` on `seed`.
pub fn run_one(key: CellKey, seed: u64, settings: &RunSettings) -> Result<(Solution, f64), BenchError> {
    let config = GeneratorConfig {
        nodes: key.nodes,
        sink_count: key.sinks,
        budget_level: key.budget,
        energy_level: key.energy,
        horizon: settings.horizon,
        ..GeneratorConfig::default()
    };
    let inst = build_instance(&config, seed).map_err(|source| BenchError::Instance { cell: key, seed, source })?;
    let started = Instant::now();
    let solution = match key.algorithm {
        Algorithm::Ch | Algorithm::Dh => {
            let engine = if key.algorithm == Algorithm::Ch {
                Engine::Ch
            } else {
                Engine::Dh
            };
            engine.run(&inst, &random_sinks(key.nodes, key.sinks, seed)).solution
        }
        Algorithm::Ls | Algorithm::Ts => {
            let method = if key.algorithm == Algorithm::Ls {
                Method::Local
            } else {
                Method::Tabu
            };
            let mut cfg = SearchConfig::for_method(method, seed).with_exec(settings.exec);
            if let Some(limit) = settings.iter_limit {
                cfg.iter_limit = limit;
            }
            if let Some(limit) = settings.time_limit {
                cfg.time_limit = limit;
            }
            search(&inst, &cfg, method)
                .map_err(|source| BenchError::Search { cell: key, seed, source })?
                .solution
        }
    };
    let seconds = started.elapsed().as_secs_f64();
    let report = validate(&inst, &solution);
    if !report.feasible {
        return Err(BenchError::Infeasible {
            cell: key,
            seed,
            violations: report.violations.len(),
            first: report.violations[0].to_string(),
        });
    }
    Ok((solution, seconds))
}

/// Runs every cell over every seed. Runs are independent and evaluated
/// with `settings.exec`; cells come back in canonical order.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<BenchmarkCell>, BenchError> {
    let jobs: Vec<(CellKey, u64)> = config
        .cells()
        .into_iter()
        .flat_map(|key| config.seeds.iter().map(move |&seed| (key, seed)))
        .collect();
    let results = config
        .settings
        .exec
        .map(&jobs, |&(key, seed)| run_one(key, seed, &config.settings));
    let mut cells: Vec<BenchmarkCell> = Vec::new();
    for (&(key, seed), result) in jobs.iter().zip(results) {
        let (solution, seconds) = result?;
        let run = SeedRun {
            seed,
            lifetime: solution.lifetime,
            cpu_seconds: seconds,
        };
        match cells.last_mut() {
            Some(cell) if cell.key == key => cell.runs.push(run),
            _ => cells.push(BenchmarkCell { key, runs: vec![run] }),
        }
    }
    Ok(cells)
}

pub const CSV_HEADER: &str = "algorithm,S,budget_level,energy_level,N,seed,L,cpu_seconds";

/// Long-format report: one row per seed, then a `mean` row per cell.
/// Without `record_time` the seconds column holds `NA`.
pub fn write_csv(cells: &[BenchmarkCell], record_time: bool) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let secs = |x: f64| {
        if record_time {
            format!("{x:.3}")
        } else {
            "NA".to_string()
        }
    };
    for cell in cells {
        let k = cell.key;
        let prefix = format!("{},{},{},{},{}", k.algorithm, k.sinks, k.budget, k.energy, k.nodes);
        for r in &cell.runs {
            let _ = writeln!(out, "{prefix},{},{},{}", r.seed, r.lifetime, secs(r.cpu_seconds));
        }
        let _ = writeln!(out, "{prefix},mean,{:.2},{}", cell.mean_lifetime(), secs(cell.mean_cpu()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algorithms: Vec<Algorithm>) -> BenchConfig {
        BenchConfig {
            algorithms,
            sink_counts: vec![2],
            budgets: vec![BudgetLevel::Low],
            energies: vec![EnergyLevel::Low],
            sizes: vec![16],
            seeds: vec![0, 1],
            record_time: false,
            settings: RunSettings {
                horizon: 60,
                iter_limit: Some(2),
                ..RunSettings::default()
            },
        }
    }

    #[test]
    fn default_grid_size() {
        let cfg = BenchConfig {
            sizes: vec![16, 25, 36],
            ..BenchConfig::default()
        };
        // 2 algorithms x 2 sink counts x 3 budgets x 3 energies x 3 sizes
        assert_eq!(cfg.cells().len(), 108);
        assert!(!BenchConfig::default().sizes.contains(&LARGE_SIZE));
        assert!(BenchConfig::default().with_large().sizes.contains(&LARGE_SIZE));
    }

    #[test]
    fn empty_algorithm_list_gives_header_only() {
        let cells = run_benchmark(&small(vec![])).unwrap();
        assert!(cells.is_empty());
        assert_eq!(write_csv(&cells, false), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_rows_and_means() {
        let cells = run_benchmark(&small(vec![Algorithm::Ch, Algorithm::Dh])).unwrap();
        assert_eq!(cells.len(), 2);
        let csv = write_csv(&cells, false);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[1].starts_with("CH,2,low,low,16,0,"));
        assert!(lines[3].starts_with("CH,2,low,low,16,mean,"));
        assert!(lines.iter().skip(1).all(|l| l.ends_with(",NA")));
        let ls = cells[0].lifetimes();
        let mean = (ls[0] + ls[1]) as f64 / 2.0;
        assert!(lines[3].contains(&format!(",{mean:.2},")));
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small(vec![Algorithm::Dh, Algorithm::Ls]);
        let a = write_csv(&run_benchmark(&cfg).unwrap(), false);
        let mut seq = cfg.clone();
        seq.settings.exec = Exec::Sequential;
        let b = write_csv(&run_benchmark(&seq).unwrap(), false);
        assert_eq!(a, b);
    }

    #[test]
    fn random_sinks_are_shared_and_distinct() {
        let a = random_sinks(16, 3, 4);
        assert_eq!(a, random_sinks(16, 3, 4));
        assert_eq!(a.len(), 3);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("xx".parse::<Algorithm>().is_err());
    }
}
