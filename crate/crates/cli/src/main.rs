//! `wsnlife`: generate instances, run the heuristics, validate solutions,
//! export the MILP, benchmark and run the exhaustive oracle.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use wsn_core::construction::{Engine, JsonLines};
use wsn_core::experiments::{
    exhaustive_oracle, random_sinks, run_benchmark, tiny_instance, write_csv, Algorithm, BenchConfig, OracleCaps,
    RunSettings, DEFAULT_SIZES, LARGE_SIZE,
};
use wsn_core::milp::{self, ExportOptions};
use wsn_core::model::{
    build_instance, instance_from_json, instance_to_json, solution_from_json, solution_to_json, BudgetLevel,
    EnergyLevel, GeneratorConfig,
};
use wsn_core::search::{self, Method, SearchConfig};
use wsn_core::validate::validate;
use wsn_core::{Exec, Instance};

#[derive(Parser)]
#[command(name = "wsnlife", version, about = "Lifetime maximization for heterogeneous sensor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random grid instance as JSON.
    Generate(GenerateArgs),
    /// Solve an instance with CH, DH, LS or TS.
    Solve(SolveArgs),
    /// Check a solution; exits 0 iff it is feasible.
    Validate(ValidateArgs),
    /// Write the mixed-integer model in LP format.
    ExportMilp(ExportArgs),
    /// Run a benchmark grid and write a CSV report.
    Bench(BenchArgs),
    /// Exhaustive optimum for a tiny instance.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Node count (a perfect square).
    #[arg(long, default_value_t = 16)]
    nodes: usize,
    #[arg(long, default_value_t = 2)]
    sinks: usize,
    #[arg(long, default_value = "low")]
    budget: BudgetLevel,
    #[arg(long, default_value = "low")]
    energy: EnergyLevel,
    #[arg(long, default_value_t = wsn_core::model::DEFAULT_HORIZON)]
    horizon: usize,
    #[arg(long, default_value_t = wsn_core::model::DEFAULT_ALPHA)]
    alpha: u32,
    /// Coverage requirement f for every node.
    #[arg(long, default_value_t = wsn_core::model::DEFAULT_COVERAGE)]
    coverage: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = ["ch", "dh", "ls", "ts"])]
    algo: String,
    /// Sink nodes (1-based, comma separated) for CH and DH; random when omitted.
    #[arg(long, value_delimiter = ',')]
    sinks: Vec<usize>,
    /// Construction heuristic inside LS and TS.
    #[arg(long, default_value = "dh")]
    engine: Engine,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    iter_limit: Option<usize>,
    /// Evaluate search candidates one at a time.
    #[arg(long)]
    sequential: bool,
    /// Decision trace of the construction run as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Search log as CSV.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Solution JSON document.
    #[arg(long, conflicts_with = "values", required_unless_present = "values")]
    solution: Option<PathBuf>,
    /// `name value` listing in the exported model's naming.
    #[arg(long)]
    values: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Also substitute the solution into every exported row.
    #[arg(long)]
    rows: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Pin sinks to these 1-based nodes.
    #[arg(long, value_delimiter = ',')]
    fix_sinks: Vec<usize>,
    #[arg(long, default_value_t = milp::DEFAULT_ROW_CAP)]
    row_cap: usize,
    /// Leave out the alpha outflow cut.
    #[arg(long)]
    no_alpha_cut: bool,
    /// Also write this solution as a value listing next to the model.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Output directory (file name is canonical) or `.lp` path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "ch,dh")]
    algos: Vec<String>,
    #[arg(long = "sinks", value_delimiter = ',', default_value = "2,3")]
    sink_counts: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "low,medium,high")]
    budgets: Vec<BudgetLevel>,
    #[arg(long, value_delimiter = ',', default_value = "low,medium,high")]
    energies: Vec<EnergyLevel>,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Include the 225-node grid.
    #[arg(long)]
    large: bool,
    /// Number of seeds, starting at --seed.
    #[arg(long, default_value_t = 10)]
    replications: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = wsn_core::model::DEFAULT_HORIZON)]
    horizon: usize,
    #[arg(long)]
    iter_limit: Option<usize>,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write NA instead of seconds so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, conflicts_with = "tiny", required_unless_present = "tiny")]
    instance: Option<PathBuf>,
    /// Use the built-in tiny generator with this seed.
    #[arg(long)]
    tiny: Option<u64>,
    #[arg(long, default_value_t = OracleCaps::default().node_budget)]
    node_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    instance_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn zero_based(nodes: &[usize], n: usize) -> Result<Vec<usize>> {
    nodes
        .iter()
        .map(|&j| {
            if j == 0 || j > n {
                bail!("node {j} outside 1..={n}");
            }
            Ok(j - 1)
        })
        .collect()
}

fn seconds(x: Option<f64>) -> Result<Option<Duration>> {
    x.map(|s| Duration::try_from_secs_f64(s).context("bad --time-limit")).transpose()
}

fn generate(a: GenerateArgs) -> Result<ExitCode> {
    let cfg = GeneratorConfig {
        nodes: a.nodes,
        sink_count: a.sinks,
        budget_level: a.budget,
        energy_level: a.energy,
        horizon: a.horizon,
        alpha: a.alpha,
        coverage: a.coverage,
    };
    let inst = build_instance(&cfg, a.seed)?;
    emit(a.out.as_deref(), &instance_to_json(&inst))?;
    Ok(ExitCode::SUCCESS)
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let inst = read_instance(&a.instance)?;
    let exec = if a.sequential { Exec::Sequential } else { Exec::default() };
    let algo: Algorithm = a.algo.parse().map_err(anyhow::Error::msg)?;
    let solution = match algo {
        Algorithm::Ch | Algorithm::Dh => {
            let sinks = if a.sinks.is_empty() {
                random_sinks(inst.nodes(), inst.sink_count(), a.seed)
            } else {
                zero_based(&a.sinks, inst.nodes())?
            };
            let engine = if algo == Algorithm::Ch { Engine::Ch } else { Engine::Dh };
            let outcome = match &a.trace {
                Some(path) => {
                    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    let mut sink = JsonLines::new(BufWriter::new(file));
                    let outcome = engine.run_traced(&inst, &sinks, &mut sink);
                    sink.into_inner().flush()?;
                    outcome
                }
                None => engine.run(&inst, &sinks),
            };
            if let Some(stop) = outcome.stop {
                eprintln!("stopped: {}", stop.as_str());
            }
            outcome.solution
        }
        Algorithm::Ls | Algorithm::Ts => {
            let method = if algo == Algorithm::Ls { Method::Local } else { Method::Tabu };
            let mut cfg = SearchConfig::for_method(method, a.seed).with_exec(exec);
            cfg.engine = a.engine;
            if let Some(limit) = a.iter_limit {
                cfg.iter_limit = limit;
            }
            if let Some(limit) = seconds(a.time_limit)? {
                cfg.time_limit = limit;
            }
            let outcome = search::search(&inst, &cfg, method)?;
            if let Some(path) = &a.log {
                let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                search::write_log_csv(&outcome.log, BufWriter::new(file))?;
            }
            eprintln!(
                "sinks {} after {} iteration(s), {} evaluation(s), stop: {:?}",
                outcome.sinks.label(),
                outcome.iterations,
                outcome.evaluations,
                outcome.stop
            );
            outcome.solution
        }
    };
    let report = validate(&inst, &solution);
    if !report.feasible {
        bail!("{algo} produced an infeasible solution:\n{report}");
    }
    eprintln!("{algo}: L = {}", solution.lifetime);
    emit(a.out.as_deref(), &solution_to_json(&solution))?;
    Ok(ExitCode::SUCCESS)
}

fn validate_cmd(a: ValidateArgs) -> Result<ExitCode> {
    let inst = read_instance(&a.instance)?;
    let solution = match (&a.solution, &a.values) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            solution_from_json(&text)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            milp::import_solution(&text, &inst)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let report = validate(&inst, &solution);
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
        if report.feasible {
            println!(" (L = {})", solution.lifetime);
        }
    }
    if a.rows {
        let opts = ExportOptions {
            alpha_cut: false,
            ..ExportOptions::default()
        };
        let model = milp::export_model(&inst, &opts)?;
        let bad = milp::check_solution(&model, &inst, &solution);
        println!("row substitution: {} violated row(s)", bad.len());
        for v in bad.iter().take(20) {
            println!("  {} by {:.6}", v.name, v.amount);
        }
        if bad.is_empty() != report.feasible {
            bail!("validator and row substitution disagree");
        }
    }
    Ok(if report.feasible { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn export(a: ExportArgs) -> Result<ExitCode> {
    let inst = read_instance(&a.instance)?;
    let fixed = if a.fix_sinks.is_empty() {
        None
    } else {
        Some(zero_based(&a.fix_sinks, inst.nodes())?)
    };
    let opts = ExportOptions {
        fixed_sinks: fixed,
        alpha_cut: !a.no_alpha_cut,
        row_cap: a.row_cap,
    };
    let model = milp::export_model(&inst, &opts)?;
    let path = match a.out {
        Some(p) if p.extension().is_some_and(|e| e == "lp") => p,
        Some(dir) => dir.join(milp::file_name(&inst)),
        None => PathBuf::from(milp::file_name(&inst)),
    };
    fs::write(&path, model.to_lp()).with_context(|| format!("writing {}", path.display()))?;
    eprintln!(
        "wrote {} ({} variables, {} rows)",
        path.display(),
        model.registry.len(),
        model.row_count()
    );
    if let Some(sol_path) = &a.solution {
        let text = fs::read_to_string(sol_path).with_context(|| format!("reading {}", sol_path.display()))?;
        let solution = solution_from_json(&text)?;
        let values = milp::assign(&model.registry, &inst, &solution);
        let out = path.with_extension("values");
        fs::write(&out, milp::write_values(&model.registry, &values))?;
        eprintln!("wrote {}", out.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(a: BenchArgs) -> Result<ExitCode> {
    let algorithms = a
        .algos
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Algorithm>().map_err(anyhow::Error::msg))
        .collect::<Result<Vec<_>>>()?;
    let mut sizes = if a.sizes.is_empty() { DEFAULT_SIZES.to_vec() } else { a.sizes };
    if a.large && !sizes.contains(&LARGE_SIZE) {
        sizes.push(LARGE_SIZE);
    }
    let config = BenchConfig {
        algorithms,
        sink_counts: a.sink_counts,
        budgets: a.budgets,
        energies: a.energies,
        sizes,
        seeds: (a.seed..a.seed + a.replications).collect(),
        record_time: !a.no_timing,
        settings: RunSettings {
            horizon: a.horizon,
            iter_limit: a.iter_limit,
            time_limit: seconds(a.time_limit)?,
            exec: if a.sequential { Exec::Sequential } else { Exec::default() },
        },
    };
    let cells = run_benchmark(&config)?;
    emit(a.out.as_deref(), &write_csv(&cells, config.record_time))?;
    Ok(ExitCode::SUCCESS)
}

fn oracle(a: OracleArgs) -> Result<ExitCode> {
    let inst = match (&a.instance, a.tiny) {
        (Some(path), _) => read_instance(path)?,
        (None, Some(seed)) => tiny_instance(seed),
        (None, None) => unreachable!("clap requires one source"),
    };
    let caps = OracleCaps {
        node_budget: a.node_budget,
        ..OracleCaps::default()
    };
    let result = exhaustive_oracle(&inst, &caps)?;
    let report = validate(&inst, &result.solution);
    eprintln!(
        "optimal L = {} ({} routing solves, witness {})",
        result.lifetime,
        result.explored,
        if report.feasible { "feasible" } else { "infeasible" }
    );
    println!("{}", result.lifetime);
    if let Some(path) = &a.out {
        fs::write(path, solution_to_json(&result.solution))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Validate(a) => validate_cmd(a),
        Command::ExportMilp(a) => export(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
