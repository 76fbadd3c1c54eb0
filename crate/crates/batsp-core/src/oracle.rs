//! Exact desk-scale references: bottleneck tour optimum by subset DP and
//! Hamiltonicity of power graphs by pruned backtracking.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{MetricInstance, ThresholdGraph};

/// Default cap on the DP instance size.
pub const DEFAULT_ORACLE_CAP: usize = 18;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    pub opt_bottleneck: f64,
    /// Optimal tour starting at vertex 0.
    pub opt_tour: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeLimit {
    pub n: usize,
    pub cap: usize,
}

impl core::fmt::Display for SizeLimit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "instance size {} exceeds oracle cap {}", self.n, self.cap)
    }
}

/// Minimax subset DP rooted at vertex 0:
/// `f(S, v) = min_{u in S \ {v}} max(f(S \ {v}, u), cost(u, v))`.
pub fn exact_bottleneck(inst: &MetricInstance, cap: usize) -> Result<ExactResult, SizeLimit> {
    let n = inst.n;
    if n > cap {
        return Err(SizeLimit { n, cap });
    }
    if n == 1 {
        return Ok(ExactResult {
            opt_bottleneck: 0.0,
            opt_tour: vec![0],
        });
    }
    let full = 1usize << n;
    let mut f = vec![f64::INFINITY; full * n];
    let mut parent = vec![usize::MAX; full * n];
    f[(1 << 0) * n] = 0.0;
    for mask in 1..full {
        if mask & 1 == 0 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 || f[mask * n + v].is_infinite() {
                continue;
            }
            let base = f[mask * n + v];
            for w in 0..n {
                if mask & (1 << w) != 0 {
                    continue;
                }
                let next = mask | (1 << w);
                let cand = base.max(inst.cost(v, w));
                if cand < f[next * n + w] {
                    f[next * n + w] = cand;
                    parent[next * n + w] = v;
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut best_v = usize::MAX;
    for v in 1..n {
        let cand = f[(full - 1) * n + v].max(inst.cost(v, 0));
        if cand < best {
            best = cand;
            best_v = v;
        }
    }
    let mut tour = Vec::with_capacity(n);
    let mut mask = full - 1;
    let mut v = best_v;
    while v != usize::MAX {
        tour.push(v);
        let p = parent[mask * n + v];
        mask &= !(1 << v);
        v = p;
    }
    tour.reverse();
    debug_assert_eq!(tour[0], 0);
    Ok(ExactResult {
        opt_bottleneck: best,
        opt_tour: tour,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerHamiltonian {
    Yes(Vec<usize>),
    No,
    /// Search budget exhausted before a verdict.
    Unknown,
}

/// Arcs of the p-th power: (u, v) present iff a path of at most p arcs leads
/// from u to v.
pub fn power_graph(g: &ThresholdGraph, p: usize) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut out = vec![Vec::new(); n];
    for u in 0..n {
        // BFS truncated at depth p.
        let mut dist = vec![usize::MAX; n];
        dist[u] = 0;
        let mut queue = alloc::collections::VecDeque::new();
        queue.push_back(u);
        while let Some(v) = queue.pop_front() {
            if dist[v] == p {
                continue;
            }
            for &w in g.out_neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        out[u] = (0..n).filter(|&v| v != u && dist[v] != usize::MAX).collect();
    }
    out
}

/// Every vertex still to be visited needs a distinct feasible successor; a
/// failed matching soundly prunes the branch (this is what turns the
/// pigeonhole certificate into an immediate refusal).
fn successor_matching(adj: &[Vec<usize>], sources: &[usize], allowed: &[bool]) -> bool {
    let n = adj.len();
    let mut matched = vec![usize::MAX; n]; // target vertex -> source
    fn try_assign(
        s: usize,
        adj: &[Vec<usize>],
        allowed: &[bool],
        matched: &mut [usize],
        seen: &mut [bool],
    ) -> bool {
        for &t in &adj[s] {
            if allowed[t] && !seen[t] {
                seen[t] = true;
                if matched[t] == usize::MAX
                    || try_assign(matched[t], adj, allowed, matched, seen)
                {
                    matched[t] = s;
                    return true;
                }
            }
        }
        false
    }
    for &s in sources {
        let mut seen = vec![false; n];
        if !try_assign(s, adj, allowed, &mut matched, &mut seen) {
            return false;
        }
    }
    true
}

/// Backtracking Hamiltonicity of `g^p` with a node budget.
pub fn power_hamiltonian(g: &ThresholdGraph, p: usize, budget: usize) -> PowerHamiltonian {
    assert!(p >= 1);
    let n = g.n;
    if n == 1 {
        return PowerHamiltonian::Yes(vec![0]);
    }
    let adj = power_graph(g, p);
    // Strong connectivity of the power graph is necessary.
    for (u, a) in adj.iter().enumerate() {
        if a.is_empty() && n > 1 {
            let _ = u;
            return PowerHamiltonian::No;
        }
    }
    let mut budget_left = budget;
    let mut path = vec![0usize];
    let mut visited = vec![false; n];
    visited[0] = true;

    enum Outcome {
        Found,
        Exhausted,
        OutOfBudget,
    }

    fn dfs(
        v: usize,
        adj: &[Vec<usize>],
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        budget_left: &mut usize,
    ) -> Outcome {
        let n = adj.len();
        if *budget_left == 0 {
            return Outcome::OutOfBudget;
        }
        *budget_left -= 1;
        if path.len() == n {
            if adj[v].contains(&0) {
                return Outcome::Found;
            }
            return Outcome::Exhausted;
        }
        // Hall prune over successors: sources are the head and all unvisited
        // vertices; targets are unvisited vertices plus the start.
        let mut allowed = visited.iter().map(|&b| !b).collect::<Vec<bool>>();
        allowed[0] = true;
        let mut sources: Vec<usize> = (0..n).filter(|&u| !visited[u]).collect();
        sources.push(v);
        if !successor_matching(adj, &sources, &allowed) {
            return Outcome::Exhausted;
        }
        for &w in &adj[v] {
            if !visited[w] {
                visited[w] = true;
                path.push(w);
                match dfs(w, adj, visited, path, budget_left) {
                    Outcome::Exhausted => {}
                    other => return other,
                }
                path.pop();
                visited[w] = false;
            }
        }
        Outcome::Exhausted
    }

    match dfs(0, &adj, &mut visited, &mut path, &mut budget_left) {
        Outcome::Found => PowerHamiltonian::Yes(path),
        Outcome::Exhausted => PowerHamiltonian::No,
        Outcome::OutOfBudget => PowerHamiltonian::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{threshold_graph, MetricInstance, ThresholdGraph};

    fn uniform(n: usize) -> MetricInstance {
        let mut cost = vec![1.0; n * n];
        for v in 0..n {
            cost[v * n + v] = 0.0;
        }
        MetricInstance::from_matrix_unchecked("u", n, cost, None).unwrap()
    }

    #[test]
    fn uniform_optimum_is_one() {
        let r = exact_bottleneck(&uniform(6), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(r.opt_bottleneck, 1.0);
        let mut sorted = r.opt_tour.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn asymmetric_cycle_metric_optimum() {
        // Cost 1 along the directed cycle, shortest-path closure elsewhere.
        let n = 6;
        let mut cost = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    cost[u * n + v] = ((v + n - u) % n) as f64;
                }
            }
        }
        let inst = MetricInstance::from_matrix_unchecked("cyc", n, cost, None).unwrap();
        let r = exact_bottleneck(&inst, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(r.opt_bottleneck, 1.0);
    }

    #[test]
    fn size_cap_enforced() {
        assert!(exact_bottleneck(&uniform(6), 5).is_err());
    }

    #[test]
    fn directed_cycle_power_one_hamiltonian() {
        let arcs: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = ThresholdGraph::from_arcs(5, 1.0, arcs);
        match power_hamiltonian(&g, 1, 10_000) {
            PowerHamiltonian::Yes(tour) => assert_eq!(tour.len(), 5),
            other => panic!("expected Hamiltonian, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_cycles_power_not_hamiltonian() {
        let mut arcs = Vec::new();
        for base in [0, 3] {
            for i in 0..3 {
                arcs.push((base + i, base + (i + 1) % 3));
            }
        }
        let g = ThresholdGraph::from_arcs(6, 1.0, arcs);
        assert_eq!(power_hamiltonian(&g, 2, 10_000), PowerHamiltonian::No);
    }

    #[test]
    fn budget_exhaustion_reports_unknown() {
        let inst = uniform(8);
        let g = threshold_graph(&inst, 1.0);
        assert_eq!(power_hamiltonian(&g, 1, 1), PowerHamiltonian::Unknown);
    }

    #[test]
    fn dp_matches_brute_force_small() {
        // Factorial scan oracle on a fixed asymmetric instance.
        let n = 6;
        let mut cost = vec![0.0; n * n];
        let mut state = 12345u64;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    cost[u * n + v] = ((state >> 33) % 50 + 1) as f64;
                }
            }
        }
        let inst = MetricInstance::from_matrix_unchecked("r", n, cost, None).unwrap();
        let inst = crate::instance::validate_metric(inst, crate::instance::ValidationMode::Closure)
            .unwrap();
        let dp = exact_bottleneck(&inst, DEFAULT_ORACLE_CAP).unwrap();

        // Brute force over all permutations fixing vertex 0.
        let mut perm: Vec<usize> = (1..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &inst, &mut best);
        assert_eq!(dp.opt_bottleneck, best);

        fn permute(perm: &mut Vec<usize>, i: usize, inst: &MetricInstance, best: &mut f64) {
            if i == perm.len() {
                let mut b = inst.cost(0, perm[0]);
                for w in perm.windows(2) {
                    b = b.max(inst.cost(w[0], w[1]));
                }
                b = b.max(inst.cost(*perm.last().unwrap(), 0));
                if b < *best {
                    *best = b;
                }
                return;
            }
            for j in i..perm.len() {
                perm.swap(i, j);
                permute(perm, i + 1, inst, best);
                perm.swap(i, j);
            }
        }
    }
}
