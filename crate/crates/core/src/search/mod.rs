//! Sink-location search. Local search (LS) and tabu search (TS) relocate
//! `s` sinks at a time and keep a move whenever the construction heuristic
//! reports a strictly longer lifetime for the new placement.

mod sampling;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use sampling::{neighborhood_size, sink_sampling_distribution, swap, trial_count};

use crate::construction::Engine;
use crate::exec::Exec;
use crate::model::{Instance, Solution};

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("sink sampling needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("sink costs must be finite, non-negative and not all zero")]
    BadCosts,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("scan percentage for s = {s} is {value}, expected (0, 100]")]
    BadPercent { s: usize, value: f64 },
    #[error("no scan percentage configured for s = {0}")]
    MissingPercent(usize),
    #[error("{sinks} sinks do not fit on {nodes} nodes")]
    TooManySinks { sinks: usize, nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Local,
    Tabu,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Local => "LS",
            Method::Tabu => "TS",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub iter_limit: usize,
    /// Consecutive non-improving iterations before stopping.
    pub no_improve_limit: usize,
    pub tabu_tenure: usize,
    /// `P_s` in percent, entry `s - 1` for swap size `s`.
    pub scan_percent: Vec<f64>,
    pub time_limit: Duration,
    pub engine: Engine,
    pub seed: u64,
    /// How trial batches are evaluated; never changes the result.
    pub exec: Exec,
}

impl SearchConfig {
    pub fn local_search(seed: u64) -> Self {
        Self {
            iter_limit: 100,
            no_improve_limit: 20,
            tabu_tenure: 10,
            scan_percent: vec![20.0, 40.0, 40.0],
            time_limit: Duration::from_secs(3600),
            engine: Engine::Dh,
            seed,
            exec: Exec::default(),
        }
    }

    pub fn tabu_search(seed: u64) -> Self {
        Self {
            scan_percent: vec![100.0, 20.0, 10.0],
            ..Self::local_search(seed)
        }
    }

    pub fn for_method(method: Method, seed: u64) -> Self {
        match method {
            Method::Local => Self::local_search(seed),
            Method::Tabu => Self::tabu_search(seed),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn check(&self, sinks: usize) -> Result<(), SearchError> {
        if self.iter_limit == 0 {
            return Err(SearchError::NonPositive("iteration limit"));
        }
        if self.no_improve_limit == 0 {
            return Err(SearchError::NonPositive("non-improving iteration limit"));
        }
        if self.tabu_tenure == 0 {
            return Err(SearchError::NonPositive("tabu tenure"));
        }
        for s in 1..=sinks {
            let value = *self.scan_percent.get(s - 1).ok_or(SearchError::MissingPercent(s))?;
            if !(value > 0.0 && value <= 100.0) {
                return Err(SearchError::BadPercent { s, value });
            }
        }
        Ok(())
    }
}

/// A set of sink nodes, sorted, with its deployment cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinkVector {
    pub chosen: Vec<usize>,
    pub cost: f64,
}

impl SinkVector {
    pub fn new(instance: &Instance, mut chosen: Vec<usize>) -> Self {
        chosen.sort_unstable();
        chosen.dedup();
        let cost = chosen.iter().map(|&j| instance.sink_cost(j)).sum();
        Self { chosen, cost }
    }

    /// The `S` cheapest sink nodes, ties by node index.
    pub fn cheapest(instance: &Instance) -> Self {
        let mut nodes: Vec<usize> = (0..instance.nodes()).collect();
        nodes.sort_by(|&a, &b| instance.sink_cost(a).total_cmp(&instance.sink_cost(b)).then(a.cmp(&b)));
        nodes.truncate(instance.sink_count());
        Self::new(instance, nodes)
    }

    /// 1-based, `;`-separated node list as written to logs.
    pub fn label(&self) -> String {
        self.chosen
            .iter()
            .map(|j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// One evaluated placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub iteration: usize,
    pub s: usize,
    pub candidate: String,
    pub lifetime: usize,
    pub accepted: bool,
}

pub const LOG_HEADER: &str = "iteration,s,candidate,L,accepted";

pub fn write_log_csv<W: Write>(rows: &[LogRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{LOG_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.iteration, r.s, r.candidate, r.lifetime, r.accepted)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStop {
    IterLimit,
    NoImprovement,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub solution: Solution,
    pub sinks: SinkVector,
    pub iterations: usize,
    /// Construction runs performed (cache hits excluded).
    pub evaluations: usize,
    pub log: Vec<LogRow>,
    pub stop: SearchStop,
    /// Largest tabu list length seen; zero for local search.
    pub max_tabu_len: usize,
}

impl SearchOutcome {
    pub fn lifetime(&self) -> usize {
        self.solution.lifetime
    }
}

struct Evaluator<'a> {
    instance: &'a Instance,
    engine: Engine,
    exec: Exec,
    cache: HashMap<Vec<usize>, usize>,
    runs: usize,
}

impl Evaluator<'_> {
    fn solve(&self, sinks: &[usize]) -> Solution {
        self.engine.run(self.instance, sinks).solution
    }

    /// Lifetimes of `batch`, in order, filling the cache.
    fn lifetimes(&mut self, batch: &[Vec<usize>]) -> Vec<usize> {
        let mut fresh: Vec<Vec<usize>> = Vec::new();
        for c in batch {
            if !self.cache.contains_key(c) && !fresh.contains(c) {
                fresh.push(c.clone());
            }
        }
        let found = self.exec.map(&fresh, |c| self.solve(c).lifetime);
        self.runs += fresh.len();
        for (c, l) in fresh.into_iter().zip(found) {
            self.cache.insert(c, l);
        }
        batch.iter().map(|c| self.cache[c]).collect()
    }
}

/// Gives up on drawing a non-tabu vector after this many tries.
const TABU_REDRAWS: usize = 64;

pub fn local_search(instance: &Instance, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run(instance, config, Method::Local)
}

pub fn tabu_search(instance: &Instance, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run(instance, config, Method::Tabu)
}

pub fn search(instance: &Instance, config: &SearchConfig, method: Method) -> Result<SearchOutcome, SearchError> {
    run(instance, config, method)
}

fn run(instance: &Instance, config: &SearchConfig, method: Method) -> Result<SearchOutcome, SearchError> {
    let sinks = instance.sink_count();
    let nodes = instance.nodes();
    if sinks > nodes {
        return Err(SearchError::TooManySinks { sinks, nodes });
    }
    config.check(sinks)?;
    let started = Instant::now();
    let mut eval = Evaluator {
        instance,
        engine: config.engine,
        exec: config.exec,
        cache: HashMap::new(),
        runs: 0,
    };

    let mut incumbent = SinkVector::cheapest(instance);
    let mut best = eval.lifetimes(std::slice::from_ref(&incumbent.chosen))[0];
    let mut log = vec![LogRow {
        iteration: 0,
        s: 0,
        candidate: incumbent.label(),
        lifetime: best,
        accepted: true,
    }];
    let mut tabu: VecDeque<Vec<usize>> = VecDeque::new();
    let mut max_tabu_len = 0;
    let remember = |tabu: &mut VecDeque<Vec<usize>>, v: &[usize], max: &mut usize| {
        if tabu.len() == config.tabu_tenure {
            tabu.pop_front();
        }
        tabu.push_back(v.to_vec());
        *max = (*max).max(tabu.len());
    };
    if method == Method::Tabu {
        remember(&mut tabu, &incumbent.chosen, &mut max_tabu_len);
    }

    // nothing to move: with S = 0 or S = N every placement is the same
    let movable = sinks > 0 && sinks < nodes && nodes >= 2;
    let p = if movable {
        let costs: Vec<f64> = (0..nodes).map(|j| instance.sink_cost(j)).collect();
        sink_sampling_distribution(&costs)?
    } else {
        Vec::new()
    };

    let mut iterations = 0;
    let mut stale = 0;
    let mut stop = SearchStop::IterLimit;
    'outer: while movable && iterations < config.iter_limit && stale < config.no_improve_limit {
        let iteration = iterations + 1;
        let mut improved = false;
        for s in 1..=sinks.min(nodes - sinks) {
            let trials = trial_count(neighborhood_size(nodes, sinks, s), config.scan_percent[s - 1]);
            let mut next = 0;
            while next < trials {
                if started.elapsed() >= config.time_limit {
                    stop = SearchStop::TimeLimit;
                    if improved {
                        stale = 0;
                    }
                    iterations = iteration;
                    break 'outer;
                }
                // speculate on a batch drawn from the current incumbent; a
                // sequential run would draw exactly these until it accepts
                let width = if eval.exec.is_parallel() {
                    rayon_width().min(trials - next)
                } else {
                    1
                };
                let batch: Vec<(usize, Option<Vec<usize>>)> = (next..next + width)
                    .map(|trial| {
                        let mut rng = sampling::trial_rng(config.seed, iteration, s, trial);
                        let mut candidate = swap(&mut rng, &incumbent.chosen, s, &p);
                        if method == Method::Tabu {
                            let mut tries = 1;
                            while tabu.contains(&candidate) {
                                if tries == TABU_REDRAWS {
                                    return (trial, None);
                                }
                                candidate = swap(&mut rng, &incumbent.chosen, s, &p);
                                tries += 1;
                            }
                        }
                        (trial, Some(candidate))
                    })
                    .collect();
                let wanted: Vec<Vec<usize>> = batch.iter().filter_map(|(_, c)| c.clone()).collect();
                let mut lifetimes = eval.lifetimes(&wanted).into_iter();
                for (trial, candidate) in batch {
                    next = trial + 1;
                    let Some(candidate) = candidate else { continue };
                    let lifetime = lifetimes.next().expect("one lifetime per candidate");
                    let accepted = lifetime > best;
                    let vector = SinkVector::new(instance, candidate);
                    log.push(LogRow {
                        iteration,
                        s,
                        candidate: vector.label(),
                        lifetime,
                        accepted,
                    });
                    if accepted {
                        best = lifetime;
                        if method == Method::Tabu {
                            remember(&mut tabu, &vector.chosen, &mut max_tabu_len);
                        }
                        incumbent = vector;
                        improved = true;
                        // later speculative draws used the old incumbent
                        break;
                    }
                }
            }
        }
        iterations = iteration;
        if improved {
            stale = 0;
        } else {
            stale += 1;
        }
    }
    if movable && stop != SearchStop::TimeLimit && stale >= config.no_improve_limit {
        stop = SearchStop::NoImprovement;
    }

    let solution = eval.solve(&incumbent.chosen);
    debug_assert_eq!(solution.lifetime, best);
    Ok(SearchOutcome {
        solution,
        sinks: incumbent,
        iterations,
        evaluations: eval.runs,
        log,
        stop,
        max_tabu_len,
    })
}

#[cfg(feature = "parallel")]
fn rayon_width() -> usize {
    rayon::current_num_threads().max(1)
}

#[cfg(not(feature = "parallel"))]
fn rayon_width() -> usize {
    1
}
