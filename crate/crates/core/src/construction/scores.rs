use crate::model::Instance;

/// Snapshot a score computation reads: all slices are indexed by sensor
/// index except where noted.
#[derive(Debug, Clone, Copy)]
pub struct ScoreInput<'a> {
    pub active: &'a [bool],
    pub deployed: &'a [bool],
    pub remaining: &'a [f64],
    /// Whether each active sensor has a sink label; `None` skips the
    /// reachability part of underconnectivity.
    pub labeled: Option<&'a [bool]>,
}

/// Greedy scores for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyScores {
    /// `U_i`, indexed by node.
    pub undercoverage: Vec<u32>,
    /// `UC_il`; unlabeled active sensors count at least 1.
    pub underconnectivity: Vec<u32>,
    pub cep: Vec<f64>,
    pub ccr: Vec<f64>,
    pub coep: Vec<f64>,
    pub cocr: Vec<f64>,
}

fn per_cost(value: f64, cost: f64) -> f64 {
    value / cost.max(1e-9)
}

pub fn undercoverage(inst: &Instance, active: &[bool]) -> Vec<u32> {
    (0..inst.nodes())
        .map(|i| {
            let have = inst.covered_by(i).iter().filter(|&&s| active[s]).count() as u32;
            inst.coverage_req(i).saturating_sub(have)
        })
        .collect()
}

pub fn underconnectivity(inst: &Instance, active: &[bool], labeled: Option<&[bool]>) -> Vec<u32> {
    (0..inst.sensor_count())
        .map(|s| {
            if !active[s] {
                return 0;
            }
            let degree = inst.sends_to(s).iter().filter(|&&q| active[q]).count() as u32;
            let uc = inst.alpha().saturating_sub(degree);
            match labeled {
                Some(l) if !l[s] => uc.max(1),
                _ => uc,
            }
        })
        .collect()
}

/// Underconnected sensors that `s` could repair: `s` reaches them and they reach `s`.
pub fn mutual_links(inst: &Instance, s: usize, uc: &[u32]) -> usize {
    inst.sends_to(s)
        .iter()
        .filter(|&&q| uc[q] > 0 && inst.can_send(q, s))
        .count()
}

impl GreedyScores {
    pub fn compute(inst: &Instance, input: ScoreInput<'_>) -> Self {
        let ns = inst.sensor_count();
        let u = undercoverage(inst, input.active);
        let uc = underconnectivity(inst, input.active, input.labeled);
        let mut cep = vec![0.0; ns];
        let mut ccr = vec![0.0; ns];
        let mut coep = vec![0.0; ns];
        let mut cocr = vec![0.0; ns];
        for s in 0..ns {
            if input.active[s] {
                continue;
            }
            let deficient = inst.covers(s).iter().filter(|&&i| u[i] > 0).count() as f64;
            let links = mutual_links(inst, s, &uc) as f64;
            let cost = inst.sensor_cost(s);
            if input.deployed[s] {
                cep[s] = per_cost(deficient * input.remaining[s], cost);
                coep[s] = per_cost(links * input.remaining[s], cost);
            } else {
                let full = inst.sensor_kind(s).battery_or_inf();
                ccr[s] = per_cost(deficient * full, cost);
                cocr[s] = per_cost(links * full, cost);
            }
        }
        Self {
            undercoverage: u,
            underconnectivity: uc,
            cep,
            ccr,
            coep,
            cocr,
        }
    }
}

/// Highest positive score among `eligible` sensors; ties go to the lower
/// cost, then the lower node, then the lower kind.
pub fn best(inst: &Instance, scores: &[f64], eligible: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
    let mut pick: Option<(usize, f64)> = None;
    for (s, &v) in scores.iter().enumerate() {
        if v <= 0.0 || !eligible(s) {
            continue;
        }
        let better = match pick {
            None => true,
            Some((b, bv)) => v > bv || (v == bv && inst.sensor_cost(s) < inst.sensor_cost(b)),
        };
        if better {
            pick = Some((s, v));
        }
    }
    pick
}
