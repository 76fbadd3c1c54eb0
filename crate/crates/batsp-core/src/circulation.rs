//! Vertex-capacitated circulation: bounds from the relaxation solution and
//! the oriented tree, node splitting, integral solving, and assembly of the
//! degree-bounded Eulerian multigraph.

use alloc::vec;
use alloc::vec::Vec;

use crate::heldkarp::{HeldKarpSolution, EPS_ZERO};
use crate::maxflow::DinicI64;

/// Split-node circulation instance with integer bounds.
#[derive(Debug, Clone)]
pub struct CirculationInstance {
    pub n: usize,
    pub beta: f64,
    /// Original arcs carrying positive upper bound, lexicographic.
    pub arcs: Vec<(usize, usize)>,
    pub lower: Vec<i64>,
    /// Per-arc fractional bound before rounding.
    pub upper_frac: Vec<f64>,
    pub upper: Vec<i64>,
    /// Rounded vertex capacity `ceil(sum of fractional uppers out of v)`.
    pub vertex_cap: Vec<i64>,
    /// The fractional sum itself, kept for the 4*beta bound check.
    pub vertex_cap_frac: Vec<f64>,
}

impl CirculationInstance {
    /// Bound on visits per vertex implied by the construction.
    pub fn visit_bound(&self) -> i64 {
        libm::ceil(4.0 * self.beta) as i64
    }
}

/// Bounds: tree arcs get `[1, ceil(1 + 2*beta*x)]`, other support arcs
/// `[0, ceil(2*beta*x)]`; vertex capacity is the fractional out-sum rounded
/// once, not the sum of rounded arc uppers.
pub fn build_instance(
    x_star: &HeldKarpSolution,
    t_arrow: &[(usize, usize)],
    beta: f64,
) -> CirculationInstance {
    let n = x_star.n;
    let mut in_tree = alloc::collections::BTreeSet::new();
    for &a in t_arrow {
        in_tree.insert(a);
    }
    let mut arcs = Vec::new();
    let mut lower = Vec::new();
    let mut upper_frac = Vec::new();
    for (&(u, v), &x) in x_star.arcs.iter().zip(&x_star.x) {
        let tree = in_tree.contains(&(u, v));
        if !tree && x <= EPS_ZERO {
            continue;
        }
        let uf = if tree { 1.0 + 2.0 * beta * x } else { 2.0 * beta * x };
        arcs.push((u, v));
        lower.push(if tree { 1 } else { 0 });
        upper_frac.push(uf);
    }
    let upper: Vec<i64> = upper_frac.iter().map(|&u| libm::ceil(u) as i64).collect();
    let mut vertex_cap_frac = vec![0.0f64; n];
    for (&(u, _), &uf) in arcs.iter().zip(&upper_frac) {
        vertex_cap_frac[u] += uf;
    }
    let vertex_cap = vertex_cap_frac
        .iter()
        .map(|&s| libm::ceil(s) as i64)
        .collect();
    CirculationInstance {
        n,
        beta,
        arcs,
        lower,
        upper_frac,
        upper,
        vertex_cap,
        vertex_cap_frac,
    }
}

/// Integral flow per original arc of a `CirculationInstance`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralCirculation {
    pub flow: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibleCirculation {
    /// Original vertices on the deficient side of the reduction cut.
    pub deficient: Vec<usize>,
}

impl core::fmt::Display for InfeasibleCirculation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "circulation infeasible; deficient nodes {:?}", self.deficient)
    }
}

/// Standard lower-bound reduction: subtract lowers, route imbalances through
/// a super source/sink, and check saturation.
pub fn solve_integral(
    inst: &CirculationInstance,
) -> Result<IntegralCirculation, InfeasibleCirculation> {
    let n = inst.n;
    // Node layout: v_in = 2v, v_out = 2v + 1, then super source and sink.
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut flow = DinicI64::new(2 * n + 2, 0);
    let mut excess = vec![0i64; 2 * n];
    let mut handles = Vec::with_capacity(inst.arcs.len());
    for (i, &(u, v)) in inst.arcs.iter().enumerate() {
        let l = inst.lower[i];
        let cap = inst.upper[i] - l;
        handles.push((flow.add_edge(2 * u + 1, 2 * v, cap), cap));
        excess[2 * v] += l;
        excess[2 * u + 1] -= l;
    }
    for v in 0..n {
        // Split arc v_in -> v_out carries the vertex capacity; lower 0.
        flow.add_edge(2 * v, 2 * v + 1, inst.vertex_cap[v]);
    }
    let mut need = 0i64;
    for (node, &e) in excess.iter().enumerate() {
        if e > 0 {
            flow.add_edge(s, node, e);
            need += e;
        } else if e < 0 {
            flow.add_edge(node, t, -e);
        }
    }
    let pushed = flow.max_flow(s, t, i64::MAX);
    if pushed < need {
        let side = flow.min_cut_side(s);
        let deficient = (0..n)
            .filter(|&v| side[2 * v] || side[2 * v + 1])
            .collect();
        return Err(InfeasibleCirculation { deficient });
    }
    let restored = handles
        .iter()
        .enumerate()
        .map(|(i, &(h, cap))| inst.lower[i] + flow.flow_on(h, cap))
        .collect();
    Ok(IntegralCirculation { flow: restored })
}

/// Eulerian multigraph obtained by contracting the split nodes back.
#[derive(Debug, Clone)]
pub struct EulerianMultigraph {
    pub n: usize,
    /// Arcs with positive multiplicity, lexicographic.
    pub arcs: Vec<(usize, usize)>,
    pub multiplicity: Vec<i64>,
    pub visit_bound: i64,
}

impl EulerianMultigraph {
    pub fn out_multiplicity(&self, v: usize) -> i64 {
        self.arcs
            .iter()
            .zip(&self.multiplicity)
            .filter(|(&(u, _), _)| u == v)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn in_multiplicity(&self, v: usize) -> i64 {
        self.arcs
            .iter()
            .zip(&self.multiplicity)
            .filter(|(&(_, w), _)| w == v)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn total_arcs(&self) -> i64 {
        self.multiplicity.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    Unbalanced(usize),
    Disconnected,
    Unvisited(usize),
}

impl core::fmt::Display for AssemblyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AssemblyError::Unbalanced(v) => write!(f, "vertex {v} is unbalanced"),
            AssemblyError::Disconnected => write!(f, "multigraph is disconnected"),
            AssemblyError::Unvisited(v) => write!(f, "vertex {v} has no incident flow"),
        }
    }
}

/// Drops zero-flow arcs and checks balance and connectivity.
pub fn assemble_multigraph(
    inst: &CirculationInstance,
    circ: &IntegralCirculation,
) -> Result<EulerianMultigraph, AssemblyError> {
    let n = inst.n;
    let mut arcs = Vec::new();
    let mut multiplicity = Vec::new();
    let mut out_deg = vec![0i64; n];
    let mut in_deg = vec![0i64; n];
    for (&(u, v), &f) in inst.arcs.iter().zip(&circ.flow) {
        if f > 0 {
            arcs.push((u, v));
            multiplicity.push(f);
            out_deg[u] += f;
            in_deg[v] += f;
        }
    }
    for v in 0..n {
        if out_deg[v] != in_deg[v] {
            return Err(AssemblyError::Unbalanced(v));
        }
        if out_deg[v] == 0 {
            return Err(AssemblyError::Unvisited(v));
        }
    }
    // Balanced with every vertex covered; connectivity of the arc set makes
    // it Eulerian.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &arcs {
        adj[u].push(v);
    }
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(AssemblyError::Disconnected);
    }
    Ok(EulerianMultigraph {
        n,
        arcs,
        multiplicity,
        visit_bound: inst.visit_bound(),
    })
}
