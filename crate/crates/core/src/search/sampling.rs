use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SearchError;

/// Node attraction for relocated sinks: `p(j)` falls as `c_j0` rises.
pub fn sink_sampling_distribution(costs: &[f64]) -> Result<Vec<f64>, SearchError> {
    let n = costs.len();
    if n < 2 {
        return Err(SearchError::TooFewNodes(n));
    }
    let total: f64 = costs.iter().sum();
    if !(total > 0.0) || costs.iter().any(|c| *c < 0.0 || !c.is_finite()) {
        return Err(SearchError::BadCosts);
    }
    let denom = (n - 1) as f64 * total;
    Ok(costs.iter().map(|c| (total - c) / denom).collect())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by i + 1
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `NS_s`: ways to move `s` of `sinks` sinks onto the `nodes - sinks` free nodes.
pub fn neighborhood_size(nodes: usize, sinks: usize, s: usize) -> u128 {
    if sinks > nodes || s > sinks {
        return 0;
    }
    binomial(nodes - sinks, s) * binomial(sinks, s)
}

/// Trials for one swap size: `ceil(NS_s * P_s / 100)`, at least one.
pub fn trial_count(neighborhood: u128, percent: f64) -> usize {
    let raw = (neighborhood as f64 * percent / 100.0).ceil();
    if raw < 1.0 {
        1
    } else if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        raw as usize
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one trial, so a trial's move does not depend on
/// how many draws earlier trials used.
pub(crate) fn trial_rng(seed: u64, iteration: usize, s: usize, trial: usize) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for part in [iteration as u64, s as u64, trial as u64] {
        h = splitmix(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Draws one index from `weights` restricted to `allowed`.
fn draw_restricted(rng: &mut impl Rng, weights: &[f64], allowed: &[bool]) -> Option<usize> {
    let total: f64 = (0..weights.len()).filter(|&j| allowed[j]).map(|j| weights[j]).sum();
    if !(total > 0.0) {
        let free: Vec<usize> = (0..weights.len()).filter(|&j| allowed[j]).collect();
        return (!free.is_empty()).then(|| free[rng.random_range(0..free.len())]);
    }
    let mut target = rng.random::<f64>() * total;
    let mut last = None;
    for j in 0..weights.len() {
        if !allowed[j] {
            continue;
        }
        last = Some(j);
        if target < weights[j] {
            return Some(j);
        }
        target -= weights[j];
    }
    last
}

/// Moves `s` sinks of `current` (sorted) to unoccupied nodes. Departing
/// sinks are uniform; arrivals follow `p` renormalized over free nodes.
pub fn swap(rng: &mut impl Rng, current: &[usize], s: usize, p: &[f64]) -> Vec<usize> {
    let n = p.len();
    let mut free = vec![true; n];
    for &j in current {
        free[j] = false;
    }
    let leaving = rand::seq::index::sample(rng, current.len(), s);
    let mut next: Vec<usize> = current.to_vec();
    for pos in leaving.iter() {
        let j = draw_restricted(rng, p, &free).expect("enough free nodes for the swap");
        free[j] = false;
        next[pos] = j;
    }
    next.sort_unstable();
    next
}
