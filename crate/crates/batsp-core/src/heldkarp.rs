//! Feasibility of the Held-Karp relaxation on a threshold graph, via phase-1
//! simplex with max-flow cut separation, plus the symmetric degree-2 system.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{MetricInstance, ThresholdGraph};
use crate::maxflow::DinicF64;
use crate::simplex::{phase1, Row, RowKind, SimplexOutcome};

pub const EPS_LP: f64 = 1e-7;
pub const EPS_SEP: f64 = 1e-6;
pub const EPS_ZERO: f64 = 1e-8;

/// Fractional solution of the relaxation on a threshold graph.
#[derive(Debug, Clone)]
pub struct HeldKarpSolution {
    pub n: usize,
    /// Arcs of the threshold graph, lexicographic; `x[i]` belongs to `arcs[i]`.
    pub arcs: Vec<(usize, usize)>,
    pub x: Vec<f64>,
    pub is_extreme: bool,
    /// Cut sets found tight (value ~ 1) during row generation.
    pub tight_cuts: Vec<Vec<usize>>,
}

impl HeldKarpSolution {
    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.arcs.binary_search(&(u, v)).ok()
    }

    pub fn x_of(&self, u: usize, v: usize) -> f64 {
        self.arc_index(u, v).map_or(0.0, |i| self.x[i])
    }

    /// Indices of arcs with value above `EPS_ZERO`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.arcs.len())
            .filter(|&i| self.x[i] > EPS_ZERO)
            .collect()
    }

    pub fn out_value(&self, v: usize) -> f64 {
        self.arcs
            .iter()
            .zip(&self.x)
            .filter(|((u, _), _)| *u == v)
            .map(|(_, x)| x)
            .sum()
    }

    pub fn in_value(&self, v: usize) -> f64 {
        self.arcs
            .iter()
            .zip(&self.x)
            .filter(|((_, w), _)| *w == v)
            .map(|(_, x)| x)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationResult {
    pub violated: bool,
    pub cut_set: Vec<usize>,
    pub cut_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HkInfeasible {
    /// A vertex set with no outgoing arcs in the threshold graph.
    ZeroOutCut(Vec<usize>),
    /// The linear system itself has no solution; phase-1 residual reported.
    LinearSystem { phase1_value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum HkError {
    Infeasible(HkInfeasible),
    /// Row generation exceeded its round cap; numerical trouble, not a
    /// feasibility verdict.
    IterationLimit,
}

impl core::fmt::Display for HkError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            HkError::Infeasible(HkInfeasible::ZeroOutCut(s)) => {
                write!(f, "infeasible: vertex set {s:?} has no outgoing arcs")
            }
            HkError::Infeasible(HkInfeasible::LinearSystem { phase1_value }) => {
                write!(f, "infeasible: phase-1 residual {phase1_value}")
            }
            HkError::IterationLimit => write!(f, "row generation iteration limit exceeded"),
        }
    }
}

/// Global minimum directed cut of the arc vector `x` on `g`, as the minimum
/// over both flow directions between a fixed root and every other vertex.
pub fn separate_cut(g: &ThresholdGraph, x: &[f64]) -> SeparationResult {
    debug_assert_eq!(x.len(), g.arcs.len());
    let n = g.n;
    let root = 0;
    let mut best_value = f64::INFINITY;
    let mut best_set: Vec<usize> = Vec::new();
    for v in 1..n {
        for (s, t) in [(root, v), (v, root)] {
            let mut flow = DinicF64::new(n, 1e-12);
            for (i, &(a, b)) in g.arcs.iter().enumerate() {
                if x[i] > 0.0 {
                    flow.add_edge(a, b, x[i]);
                }
            }
            let value = flow.max_flow(s, t, best_value);
            if value < best_value {
                let side = flow.min_cut_side(s);
                // A limit-truncated run leaves t residually reachable; its
                // side is not a cut, and the true value is >= best_value.
                if !side[t] {
                    best_value = value;
                    best_set = (0..n).filter(|&u| side[u]).collect();
                }
            }
        }
    }
    SeparationResult {
        violated: best_value < 1.0 - EPS_SEP,
        cut_set: best_set,
        cut_value: best_value,
    }
}

fn reachable_from(g: &ThresholdGraph, start: usize, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let next = if forward {
            g.out_neighbors(v)
        } else {
            g.in_neighbors(v)
        };
        for &u in next {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Structural infeasibility: a set with empty out-cut, found from strong
/// connectivity of the threshold graph.
fn zero_out_cut(g: &ThresholdGraph) -> Option<Vec<usize>> {
    let fwd = reachable_from(g, 0, true);
    if fwd.iter().any(|r| !r) {
        // No arc leaves the reachable set.
        return Some((0..g.n).filter(|&v| fwd[v]).collect());
    }
    let bwd = reachable_from(g, 0, false);
    if bwd.iter().any(|r| !r) {
        // Vertices that cannot reach the root have no arc into the rest.
        return Some((0..g.n).filter(|&v| !bwd[v]).collect());
    }
    None
}

fn degree_rows(g: &ThresholdGraph) -> Vec<Row> {
    let n = g.n;
    let mut out_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut in_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in g.arcs.iter().enumerate() {
        out_rows[u].push((i, 1.0));
        in_rows[v].push((i, 1.0));
    }
    out_rows
        .into_iter()
        .chain(in_rows)
        .map(|coeffs| Row {
            coeffs,
            rhs: 1.0,
            kind: RowKind::Eq,
        })
        .collect()
}

fn cut_row(g: &ThresholdGraph, cut: &[usize], rhs: f64) -> Row {
    let mut in_cut = vec![false; g.n];
    for &v in cut {
        in_cut[v] = true;
    }
    let coeffs = g
        .arcs
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| in_cut[u] && !in_cut[v])
        .map(|(i, _)| (i, 1.0))
        .collect();
    Row {
        coeffs,
        rhs,
        kind: RowKind::Ge,
    }
}

/// Row generation for Eq. (1)-style feasibility on `g`.
pub fn solve_feasibility(g: &ThresholdGraph) -> Result<HeldKarpSolution, HkError> {
    let n = g.n;
    assert!(n >= 2, "relaxation needs at least two vertices");
    if let Some(s) = zero_out_cut(g) {
        return Err(HkError::Infeasible(HkInfeasible::ZeroOutCut(s)));
    }
    let num_vars = g.arcs.len();
    let mut rows = degree_rows(g);
    let mut cuts: Vec<Vec<usize>> = Vec::new();
    let round_cap = 50 * n;
    let lp_iters = 2000 + 40 * (num_vars + rows.len() + round_cap);
    for _ in 0..round_cap {
        let x = match phase1(num_vars, &rows, lp_iters, n as f64 * EPS_LP) {
            SimplexOutcome::Feasible(x) => x,
            SimplexOutcome::Infeasible(v) => {
                return Err(HkError::Infeasible(HkInfeasible::LinearSystem {
                    phase1_value: v,
                }))
            }
            SimplexOutcome::IterationLimit => return Err(HkError::IterationLimit),
        };
        let sep = separate_cut(g, &x);
        if !sep.violated {
            let tight_cuts = cuts
                .iter()
                .filter(|c| {
                    let mut in_cut = vec![false; n];
                    for &v in c.iter() {
                        in_cut[v] = true;
                    }
                    let value: f64 = g
                        .arcs
                        .iter()
                        .zip(&x)
                        .filter(|(&(u, v), _)| in_cut[u] && !in_cut[v])
                        .map(|(_, xv)| xv)
                        .sum();
                    (value - 1.0).abs() <= EPS_LP * n as f64
                })
                .cloned()
                .chain((sep.cut_value <= 1.0 + EPS_SEP).then(|| sep.cut_set.clone()))
                .collect();
            return Ok(HeldKarpSolution {
                n,
                arcs: g.arcs.clone(),
                x,
                is_extreme: true,
                tight_cuts,
            });
        }
        rows.push(cut_row(g, &sep.cut_set, 1.0));
        cuts.push(sep.cut_set);
    }
    Err(HkError::IterationLimit)
}

/// Binary-search result for the least feasible threshold.
#[derive(Debug, Clone)]
pub struct TauSearch {
    pub tau_star: f64,
    pub solution: HeldKarpSolution,
    /// Thresholds probed during the search, with their feasibility verdicts.
    pub trace: Vec<(f64, bool)>,
}

/// Minimum tau whose threshold graph has a feasible relaxation.
pub fn find_tau_star(inst: &MetricInstance) -> Result<TauSearch, HkError> {
    assert!(inst.n >= 2);
    let costs = inst.distinct_costs();
    assert!(!costs.is_empty());
    let mut trace = Vec::new();
    // The complete digraph at the maximum cost is always feasible for n >= 2.
    let mut lo = 0usize;
    let mut hi = costs.len() - 1;
    let mut best: Option<HeldKarpSolution> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let g = crate::instance::threshold_graph(inst, costs[mid]);
        match solve_feasibility(&g) {
            Ok(sol) => {
                trace.push((costs[mid], true));
                best = Some(sol);
                hi = mid;
            }
            Err(HkError::Infeasible(_)) => {
                trace.push((costs[mid], false));
                lo = mid + 1;
            }
            Err(e) => return Err(e),
        }
    }
    let tau_star = costs[lo];
    let solution = match best {
        Some(sol) if trace.last().map(|&(t, ok)| ok && t == tau_star) == Some(true) => sol,
        _ => {
            let g = crate::instance::threshold_graph(inst, tau_star);
            let sol = solve_feasibility(&g)?;
            trace.push((tau_star, true));
            sol
        }
    };
    Ok(TauSearch {
        tau_star,
        solution,
        trace,
    })
}

/// Simple undirected graph on vertices 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub n: usize,
    /// Edges with u < v, lexicographic, no duplicates.
    pub edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        UndirectedGraph { n, edges }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

/// Solution of the symmetric degree-2 cut system.
#[derive(Debug, Clone)]
pub struct SymmetricHkSolution {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub z: Vec<f64>,
}

impl SymmetricHkSolution {
    pub fn z_of(&self, u: usize, v: usize) -> f64 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search(&key)
            .map_or(0.0, |i| self.z[i])
    }
}

fn symmetric_min_cut(g: &UndirectedGraph, z: &[f64]) -> (f64, Vec<usize>) {
    let n = g.n;
    let mut best_value = f64::INFINITY;
    let mut best_set = Vec::new();
    for v in 1..n {
        let mut flow = DinicF64::new(n, 1e-12);
        for (i, &(a, b)) in g.edges.iter().enumerate() {
            if z[i] > 0.0 {
                flow.add_edge(a, b, z[i]);
                flow.add_edge(b, a, z[i]);
            }
        }
        let value = flow.max_flow(0, v, best_value);
        if value < best_value {
            let side = flow.min_cut_side(0);
            // See separate_cut: a limit-truncated run does not yield a cut.
            if !side[v] {
                best_value = value;
                best_set = (0..n).filter(|&u| side[u]).collect();
            }
        }
    }
    (best_value, best_set)
}

/// Row generation for the undirected system: degree 2 everywhere, every cut
/// at least 2.
pub fn solve_symmetric_hk(g: &UndirectedGraph) -> Result<SymmetricHkSolution, HkError> {
    let n = g.n;
    assert!(n >= 2);
    let num_vars = g.edges.len();
    let mut deg_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        deg_rows[u].push((i, 1.0));
        deg_rows[v].push((i, 1.0));
    }
    let mut rows: Vec<Row> = deg_rows
        .into_iter()
        .map(|coeffs| Row {
            coeffs,
            rhs: 2.0,
            kind: RowKind::Eq,
        })
        .collect();
    let round_cap = 50 * n;
    let lp_iters = 2000 + 40 * (num_vars + rows.len() + round_cap);
    for _ in 0..round_cap {
        let z = match phase1(num_vars, &rows, lp_iters, n as f64 * EPS_LP) {
            SimplexOutcome::Feasible(z) => z,
            SimplexOutcome::Infeasible(v) => {
                return Err(HkError::Infeasible(HkInfeasible::LinearSystem {
                    phase1_value: v,
                }))
            }
            SimplexOutcome::IterationLimit => return Err(HkError::IterationLimit),
        };
        let (value, cut) = symmetric_min_cut(g, &z);
        if value >= 2.0 - EPS_SEP {
            return Ok(SymmetricHkSolution {
                n,
                edges: g.edges.clone(),
                z,
            });
        }
        if cut.is_empty() || cut.len() == n {
            // Disconnected support with no crossing edges at all.
            return Err(HkError::Infeasible(HkInfeasible::ZeroOutCut(cut)));
        }
        let mut in_cut = vec![false; n];
        for &v in &cut {
            in_cut[v] = true;
        }
        let coeffs = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| in_cut[u] != in_cut[v])
            .map(|(i, _)| (i, 1.0))
            .collect::<Vec<_>>();
        if coeffs.is_empty() {
            return Err(HkError::Infeasible(HkInfeasible::ZeroOutCut(cut)));
        }
        rows.push(Row {
            coeffs,
            rhs: 2.0,
            kind: RowKind::Ge,
        });
    }
    Err(HkError::IterationLimit)
}
