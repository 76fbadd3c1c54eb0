//! Metric instances, threshold graphs, and hop distances.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Absolute tolerance used when validating float metrics.
pub const EPS_METRIC: f64 = 1e-9;

/// Complete asymmetric cost matrix satisfying the triangle inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricInstance {
    pub n: usize,
    /// Row-major n*n costs; `cost[u*n + v]` is the cost of arc u -> v.
    cost: Vec<f64>,
    pub name: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricError {
    NotSquare,
    NonzeroDiagonal(usize),
    NegativeCost(usize, usize),
    TriangleViolation(usize, usize, usize),
}

impl core::fmt::Display for MetricError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MetricError::NotSquare => write!(f, "cost matrix is not square"),
            MetricError::NonzeroDiagonal(v) => write!(f, "nonzero diagonal at vertex {v}"),
            MetricError::NegativeCost(u, v) => write!(f, "negative cost on arc {u}->{v}"),
            MetricError::TriangleViolation(u, v, w) => {
                write!(f, "triangle inequality violated on ({u},{v},{w})")
            }
        }
    }
}

/// How to handle triangle-inequality violations at construction time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Error out on the first violated triple.
    Reject,
    /// Replace costs by their all-pairs-shortest-path closure.
    Closure,
}

impl MetricInstance {
    /// Builds an instance from a row-major cost matrix without triangle validation.
    /// Diagonal and sign checks still apply.
    pub fn from_matrix_unchecked(
        name: &str,
        n: usize,
        cost: Vec<f64>,
        seed: Option<u64>,
    ) -> Result<Self, MetricError> {
        if cost.len() != n * n {
            return Err(MetricError::NotSquare);
        }
        for v in 0..n {
            if cost[v * n + v] != 0.0 {
                return Err(MetricError::NonzeroDiagonal(v));
            }
        }
        for u in 0..n {
            for v in 0..n {
                if cost[u * n + v] < 0.0 {
                    return Err(MetricError::NegativeCost(u, v));
                }
            }
        }
        Ok(MetricInstance {
            n,
            cost,
            name: String::from(name),
            seed,
        })
    }

    #[inline]
    pub fn cost(&self, u: usize, v: usize) -> f64 {
        self.cost[u * self.n + v]
    }

    pub fn costs(&self) -> &[f64] {
        &self.cost
    }

    /// All distinct off-diagonal cost values, ascending.
    pub fn distinct_costs(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u != v {
                    vals.push(self.cost(u, v));
                }
            }
        }
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    pub fn max_cost(&self) -> f64 {
        self.distinct_costs().last().copied().unwrap_or(0.0)
    }
}

/// Checks (or restores, in closure mode) the triangle inequality.
pub fn validate_metric(
    inst: MetricInstance,
    mode: ValidationMode,
) -> Result<MetricInstance, MetricError> {
    match mode {
        ValidationMode::Reject => {
            let n = inst.n;
            for u in 0..n {
                for v in 0..n {
                    if u == v {
                        continue;
                    }
                    for w in 0..n {
                        if w == u || w == v {
                            continue;
                        }
                        if inst.cost(u, w) > inst.cost(u, v) + inst.cost(v, w) + EPS_METRIC {
                            return Err(MetricError::TriangleViolation(u, v, w));
                        }
                    }
                }
            }
            Ok(inst)
        }
        ValidationMode::Closure => {
            let n = inst.n;
            let mut d = inst.cost.clone();
            // Floyd-Warshall over nonnegative costs.
            for k in 0..n {
                for u in 0..n {
                    for v in 0..n {
                        let via = d[u * n + k] + d[k * n + v];
                        if via < d[u * n + v] {
                            d[u * n + v] = via;
                        }
                    }
                }
            }
            MetricInstance::from_matrix_unchecked(&inst.name, n, d, inst.seed)
        }
    }
}

/// Arcs of cost at most `tau`, with adjacency lists for traversal.
#[derive(Debug, Clone)]
pub struct ThresholdGraph {
    pub n: usize,
    pub tau: f64,
    /// Ordered pairs (u, v) with cost(u, v) <= tau, lexicographic.
    pub arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl ThresholdGraph {
    pub fn from_arcs(n: usize, tau: f64, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        ThresholdGraph {
            n,
            tau,
            arcs,
            out_adj,
            in_adj,
        }
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }
}

/// Path in a threshold graph together with its hop count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopPath {
    pub vertices: Vec<usize>,
}

impl HopPath {
    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

/// Subgraph of arcs with cost at most `tau`.
pub fn threshold_graph(inst: &MetricInstance, tau: f64) -> ThresholdGraph {
    let n = inst.n;
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && inst.cost(u, v) <= tau {
                arcs.push((u, v));
            }
        }
    }
    ThresholdGraph::from_arcs(n, tau, arcs)
}

/// BFS hop distance from `u` to `v`; `None` when unreachable.
pub fn hop_distance(g: &ThresholdGraph, u: usize, v: usize) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    let mut dist = vec![usize::MAX; g.n];
    dist[u] = 0;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(u);
    while let Some(cur) = queue.pop_front() {
        for &next in g.out_neighbors(cur) {
            if dist[next] == usize::MAX {
                dist[next] = dist[cur] + 1;
                if next == v {
                    return Some(dist[next]);
                }
                queue.push_back(next);
            }
        }
    }
    None
}

/// BFS shortest path witness from `u` to `v` in hops.
pub fn hop_path(g: &ThresholdGraph, u: usize, v: usize) -> Option<HopPath> {
    if u == v {
        return Some(HopPath {
            vertices: vec![u],
        });
    }
    let mut prev = vec![usize::MAX; g.n];
    prev[u] = u;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(u);
    'bfs: while let Some(cur) = queue.pop_front() {
        for &next in g.out_neighbors(cur) {
            if prev[next] == usize::MAX {
                prev[next] = cur;
                if next == v {
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
    }
    if prev[v] == usize::MAX {
        return None;
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != u {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some(HopPath { vertices: path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn uniform_metric(n: usize) -> MetricInstance {
        let mut cost = vec![1.0; n * n];
        for v in 0..n {
            cost[v * n + v] = 0.0;
        }
        MetricInstance::from_matrix_unchecked("uniform", n, cost, None).unwrap()
    }

    #[test]
    fn uniform_metric_accepted() {
        let inst = uniform_metric(3);
        assert!(validate_metric(inst, ValidationMode::Reject).is_ok());
    }

    #[test]
    fn triangle_violation_detected() {
        let cost = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        let inst = MetricInstance::from_matrix_unchecked("bad", 3, cost, None).unwrap();
        match validate_metric(inst, ValidationMode::Reject) {
            Err(MetricError::TriangleViolation(0, 1, 2)) => {}
            other => panic!("expected TriangleViolation(0,1,2), got {other:?}"),
        }
    }

    #[test]
    fn closure_repairs_violation() {
        let cost = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0];
        let inst = MetricInstance::from_matrix_unchecked("bad", 3, cost, None).unwrap();
        let closed = validate_metric(inst, ValidationMode::Closure).unwrap();
        assert_eq!(closed.cost(0, 2), 2.0);
        assert!(validate_metric(closed, ValidationMode::Reject).is_ok());
    }

    #[test]
    fn threshold_graph_extremes() {
        let inst = uniform_metric(4);
        assert!(threshold_graph(&inst, 0.0).arcs.is_empty());
        let full = threshold_graph(&inst, 1.0);
        assert_eq!(full.arcs.len(), 12);
    }

    #[test]
    fn hop_distance_on_cycle() {
        let n = 6;
        let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = ThresholdGraph::from_arcs(n, 1.0, arcs);
        assert_eq!(hop_distance(&g, 0, n - 1), Some(n - 1));
        assert_eq!(hop_distance(&g, 0, 0), Some(0));
        let p = hop_path(&g, 0, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3]);
        assert_eq!(p.hops(), 3);
    }

    #[test]
    fn hop_distance_unreachable() {
        let g = ThresholdGraph::from_arcs(3, 1.0, vec![(0, 1)]);
        assert_eq!(hop_distance(&g, 1, 0), None);
        assert_eq!(hop_distance(&g, 0, 2), None);
    }
}
