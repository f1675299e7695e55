//! Successive shortest paths with Dijkstra and node potentials.
//!
//! Capacities are integral, costs are non-negative reals. Because every
//! augmenting path is a shortest path in the residual graph, the flow after
//! each augmentation is min-cost for its value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: f64,
}

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    original_cap: Vec<i64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reduced costs within this distance of zero are treated as zero.
const COST_EPS: f64 = 1e-12;

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
            original_cap: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from -> to` and returns its id. Costs must be non-negative.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: f64) -> usize {
        assert!(cost >= 0.0 && cost.is_finite(), "arc cost must be finite and non-negative");
        assert!(cap >= 0, "arc capacity must be non-negative");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        self.original_cap.push(cap);
        id
    }

    /// Flow currently routed on arc `id`.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.arcs[id ^ 1].cap
    }

    /// `(from, to, capacity, cost, flow)` for every forward arc, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64, f64, i64)> + '_ {
        (0..self.arcs.len()).step_by(2).map(move |id| {
            let fwd = &self.arcs[id];
            let back = &self.arcs[id + 1];
            (back.to, fwd.to, self.original_cap[id / 2], fwd.cost, back.cap)
        })
    }

    /// Sends up to `limit` units from `s` to `t` at minimum cost and returns
    /// `(flow, cost)`.
    pub fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, f64) {
        let n = self.adj.len();
        let mut potential = vec![0.0f64; n];
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut flow = 0i64;
        let mut cost = 0.0f64;
        while flow < limit {
            dist.iter_mut().for_each(|d| *d = f64::INFINITY);
            prev.iter_mut().for_each(|p| *p = usize::MAX);
            dist[s] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(Entry { dist: 0.0, node: s });
            while let Some(Entry { dist: d, node: u }) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &id in &self.adj[u] {
                    let arc = &self.arcs[id];
                    if arc.cap <= 0 {
                        continue;
                    }
                    let mut reduced = arc.cost + potential[u] - potential[arc.to];
                    if reduced < 0.0 {
                        debug_assert!(reduced > -1e-6, "negative reduced cost {reduced}");
                        reduced = 0.0;
                    }
                    let nd = d + reduced;
                    if nd + COST_EPS < dist[arc.to] {
                        dist[arc.to] = nd;
                        prev[arc.to] = id;
                        heap.push(Entry { dist: nd, node: arc.to });
                    }
                }
            }
            if !dist[t].is_finite() {
                break;
            }
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let id = prev[v];
                push = push.min(self.arcs[id].cap);
                v = self.arcs[id ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let id = prev[v];
                self.arcs[id].cap -= push;
                self.arcs[id ^ 1].cap += push;
                cost += push as f64 * self.arcs[id].cost;
                v = self.arcs[id ^ 1].to;
            }
            flow += push;
        }
        (flow, cost)
    }
}
