//! Builders and verifiers for explicit worst-case objects: extreme points of
//! the relaxation with linear-degree support, the layered power-graph
//! counterexample family, the 2-connectivity consequence of the symmetric
//! system, and seeded random metric generators.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::heldkarp::{HkError, UndirectedGraph};
use crate::instance::{MetricInstance, ThresholdGraph, ValidationMode};
use crate::maxflow::DinicI64;

pub type Rat = Ratio<i128>;

/// Extreme point on 2k+5 vertices whose support has a vertex with indegree
/// and outdegree k. Vertices: u_0..u_{k+1}, then v_0..v_{k+1}, then w last.
#[derive(Debug, Clone)]
pub struct ExtremePointCertificate {
    pub k: usize,
    pub n: usize,
    /// Support arcs, lexicographic, with exact rational values.
    pub arcs: Vec<(usize, usize)>,
    pub x: Vec<Rat>,
    /// The S_i = V \ {u_i..u_{k+1}} family and its v-side mirror.
    pub tight_sets: Vec<Vec<usize>>,
    pub rank_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvalidK(pub usize);

impl core::fmt::Display for InvalidK {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "extreme-point construction needs k >= 2, got {}", self.0)
    }
}

impl ExtremePointCertificate {
    pub fn vertex_u(&self, i: usize) -> usize {
        i
    }
    pub fn vertex_v(&self, i: usize) -> usize {
        self.k + 2 + i
    }
    pub fn vertex_w(&self) -> usize {
        2 * self.k + 4
    }

    pub fn x_of(&self, a: usize, b: usize) -> Rat {
        self.arcs
            .binary_search(&(a, b))
            .map_or_else(|_| Rat::zero(), |i| self.x[i])
    }

    pub fn out_sum(&self, v: usize) -> Rat {
        self.arcs
            .iter()
            .zip(&self.x)
            .filter(|(&(a, _), _)| a == v)
            .map(|(_, x)| *x)
            .sum()
    }

    pub fn in_sum(&self, v: usize) -> Rat {
        self.arcs
            .iter()
            .zip(&self.x)
            .filter(|(&(_, b), _)| b == v)
            .map(|(_, x)| *x)
            .sum()
    }

    /// Float view of the solution, usable by the pipeline modules.
    pub fn to_float_solution(&self) -> crate::heldkarp::HeldKarpSolution {
        crate::heldkarp::HeldKarpSolution {
            n: self.n,
            arcs: self.arcs.clone(),
            x: self
                .x
                .iter()
                .map(|r| *r.numer() as f64 / *r.denom() as f64)
                .collect(),
            is_extreme: self.rank_check,
            tight_cuts: self.tight_sets.clone(),
        }
    }
}

/// Arc values per the four construction cases: the unit arc closing the two
/// chains, the chain arcs at 1 - 1/k, the fans through w at 1/k, and the two
/// back arcs at 1/k.
pub fn build_extreme_point(k: usize) -> Result<ExtremePointCertificate, InvalidK> {
    if k < 2 {
        return Err(InvalidK(k));
    }
    let n = 2 * k + 5;
    let u = |i: usize| i;
    let v = |i: usize| k + 2 + i;
    let w = 2 * k + 4;
    let one = Rat::one();
    let inv_k = Rat::new(1, k as i128);
    let chain = one - inv_k;
    let mut entries: Vec<((usize, usize), Rat)> = Vec::new();
    entries.push(((v(k + 1), u(0)), one));
    for i in 0..=k {
        entries.push(((u(i), u(i + 1)), chain));
        entries.push(((v(i), v(i + 1)), chain));
    }
    for i in 1..=k {
        entries.push(((u(k + 1), u(i)), inv_k));
        entries.push(((u(i), w), inv_k));
        entries.push(((w, v(i)), inv_k));
        entries.push(((v(i), v(0)), inv_k));
    }
    entries.push(((u(0), u(k + 1)), inv_k));
    entries.push(((v(0), v(k + 1)), inv_k));
    entries.sort_unstable_by_key(|&(a, _)| a);
    let arcs: Vec<(usize, usize)> = entries.iter().map(|&(a, _)| a).collect();
    let x: Vec<Rat> = entries.iter().map(|&(_, r)| r).collect();
    let mut tight_sets = Vec::new();
    // The mirror symmetry maps u_i to v_{k+1-i} and reverses arcs, so the
    // v-side tight sets are the chain prefixes rather than complements.
    for i in 1..=k + 1 {
        let s: Vec<usize> = (0..n).filter(|&t| !(t >= u(i) && t <= u(k + 1))).collect();
        tight_sets.push(s);
        let m: Vec<usize> = (v(0)..=v(k + 1 - i)).collect();
        tight_sets.push(m);
    }
    Ok(ExtremePointCertificate {
        k,
        n,
        arcs,
        x,
        tight_sets,
        rank_check: false,
    })
}

#[derive(Debug, Clone)]
pub struct ExtremeVerdict {
    pub degree_ok: bool,
    /// Exact minimum over all 2^n - 2 cut values.
    pub min_cut: Rat,
    pub cuts_ok: bool,
    /// Rank of the tight system over the support arcs.
    pub rank: usize,
    pub support_size: usize,
    pub extreme: bool,
    pub failures: Vec<String>,
}

impl ExtremeVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rank of a rational matrix by Gaussian elimination; rows are consumed
/// incrementally and elimination stops once full column rank is reached.
struct RationalRank {
    /// Reduced pivot rows, each with its pivot column.
    basis: Vec<(usize, Vec<Rat>)>,
    cols: usize,
}

impl RationalRank {
    fn new(cols: usize) -> Self {
        RationalRank {
            basis: Vec::new(),
            cols,
        }
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn full(&self) -> bool {
        self.basis.len() == self.cols
    }

    /// Returns true when the row was independent of the current basis.
    fn add_row(&mut self, mut row: Vec<Rat>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        for (piv_col, piv_row) in &self.basis {
            if !row[*piv_col].is_zero() {
                let factor = row[*piv_col];
                for c in 0..self.cols {
                    row[c] = row[c] - factor * piv_row[c];
                }
            }
        }
        match (0..self.cols).find(|&c| !row[c].is_zero()) {
            None => false,
            Some(piv) => {
                let inv = row[piv];
                for c in 0..self.cols {
                    row[c] = row[c] / inv;
                }
                self.basis.push((piv, row));
                true
            }
        }
    }
}

/// Exhaustive feasibility plus the rational tight-system rank test. The cut
/// scan enumerates all 2^n - 2 sets (practical up to k = 6, n = 17).
pub fn verify_extreme_point(cert: &ExtremePointCertificate) -> ExtremeVerdict {
    let n = cert.n;
    let k = cert.k as i128;
    let mut failures = Vec::new();

    let one = Rat::one();
    let mut degree_ok = true;
    for v in 0..n {
        if cert.out_sum(v) != one || cert.in_sum(v) != one {
            degree_ok = false;
            failures.push(format!("degree equality fails at vertex {v}"));
        }
    }

    // All arc values are integer multiples of 1/k; scan cuts in scaled
    // integer arithmetic for speed (cut >= 1 iff scaled cut >= k).
    let scaled: Vec<i128> = cert.x.iter().map(|r| (*r * Rat::from_integer(k)).to_integer()).collect();
    let mut min_scaled = i128::MAX;
    let mut tight_cuts: Vec<u64> = Vec::new();
    let full = 1u64 << n;
    for mask in 1..full - 1 {
        let mut value = 0i128;
        for (i, &(a, b)) in cert.arcs.iter().enumerate() {
            if mask & (1 << a) != 0 && mask & (1 << b) == 0 {
                value += scaled[i];
            }
        }
        if value < min_scaled {
            min_scaled = value;
        }
        if value == k {
            tight_cuts.push(mask);
        }
    }
    let min_cut = Rat::new(min_scaled, k);
    let cuts_ok = min_cut >= one;
    if !cuts_ok {
        failures.push(format!("cut below 1: minimum {min_cut:?}"));
    }
    if min_cut != one {
        failures.push(format!("minimum cut is not exactly 1: {min_cut:?}"));
    }
    // The named S_i family must be among the tight cuts.
    for s in &cert.tight_sets {
        let mask = s.iter().fold(0u64, |m, &v| m | (1 << v));
        if !tight_cuts.contains(&mask) {
            failures.push(format!("expected tight set {s:?} not tight"));
        }
    }

    // Tight system: zero arcs are fixed, so columns are the support arcs;
    // rows are all degree equalities plus every tight cut.
    let cols = cert.arcs.len();
    let mut rank = RationalRank::new(cols);
    for v in 0..n {
        let mut out_row = vec![Rat::zero(); cols];
        let mut in_row = vec![Rat::zero(); cols];
        for (i, &(a, b)) in cert.arcs.iter().enumerate() {
            if a == v {
                out_row[i] = one;
            }
            if b == v {
                in_row[i] = one;
            }
        }
        rank.add_row(out_row);
        rank.add_row(in_row);
    }
    for &mask in &tight_cuts {
        if rank.full() {
            break;
        }
        let mut row = vec![Rat::zero(); cols];
        for (i, &(a, b)) in cert.arcs.iter().enumerate() {
            if mask & (1 << a) != 0 && mask & (1 << b) == 0 {
                row[i] = one;
            }
        }
        rank.add_row(row);
    }
    let extreme = rank.full();
    if !extreme {
        failures.push(format!(
            "tight system rank {} below support size {}",
            rank.rank(),
            cols
        ));
    }
    ExtremeVerdict {
        degree_ok,
        min_cut,
        cuts_ok,
        rank: rank.rank(),
        support_size: cols,
        extreme,
        failures,
    }
}

/// Layered digraph: |V_0| = p(2k+2)+1, |V_i| = 2k+2 for i >= 1, complete
/// bipartite arcs from each layer to the next (cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleGraph {
    pub k: usize,
    pub p: usize,
    /// Sizes of V_0..V_p; vertices are numbered layer by layer, V_0 first.
    pub layer_sizes: Vec<usize>,
    pub n: usize,
}

impl CounterexampleGraph {
    pub fn layer_start(&self, layer: usize) -> usize {
        self.layer_sizes[..layer].iter().sum()
    }

    /// Vertex id for 1-based index j within a layer.
    pub fn vertex(&self, layer: usize, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.layer_sizes[layer]);
        self.layer_start(layer) + j - 1
    }

    pub fn layer_of(&self, v: usize) -> usize {
        let mut acc = 0;
        for (i, &s) in self.layer_sizes.iter().enumerate() {
            acc += s;
            if v < acc {
                return i;
            }
        }
        unreachable!()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let layers = self.layer_sizes.len();
        let mut arcs = Vec::new();
        for i in 0..layers {
            let next = (i + 1) % layers;
            for a in 0..self.layer_sizes[i] {
                for b in 0..self.layer_sizes[next] {
                    arcs.push((self.layer_start(i) + a, self.layer_start(next) + b));
                }
            }
        }
        arcs
    }

    pub fn to_threshold_graph(&self) -> ThresholdGraph {
        ThresholdGraph::from_arcs(self.n, 1.0, self.arcs())
    }
}

pub fn build_counterexample(k: usize, p: usize) -> CounterexampleGraph {
    assert!(k >= 1 && p >= 1);
    let width = 2 * k + 2;
    let mut layer_sizes = vec![p * width + 1];
    layer_sizes.extend(core::iter::repeat(width).take(p));
    let n = layer_sizes.iter().sum();
    CounterexampleGraph {
        k,
        p,
        layer_sizes,
        n,
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleVerdict {
    /// |V_0| > |V \ V_0| (the pigeonhole certificate).
    pub counting_ok: bool,
    /// p-hop out-neighborhood of V_0 equals exactly V \ V_0.
    pub neighborhood_ok: bool,
    /// Explicit path construction and flow check on sampled pairs.
    pub disjoint_paths_ok: bool,
    pub failures: Vec<String>,
}

impl CounterexampleVerdict {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Count of internally vertex-disjoint paths from s to t, by max-flow with
/// unit capacities on split internal vertices.
pub fn disjoint_path_count(g: &ThresholdGraph, s: usize, t: usize, cap: i64) -> i64 {
    let n = g.n;
    let mut flow = DinicI64::new(2 * n, 0);
    for v in 0..n {
        let c = if v == s || v == t { i64::MAX / 4 } else { 1 };
        flow.add_edge(2 * v, 2 * v + 1, c);
    }
    for &(a, b) in &g.arcs {
        flow.add_edge(2 * a + 1, 2 * b, i64::MAX / 4);
    }
    flow.max_flow(2 * s + 1, 2 * t, cap)
}

/// Checks the counting certificate exhaustively and the disjoint-path
/// property on sampled pairs (all pairs for graphs up to 60 vertices).
pub fn verify_counterexample(g: &CounterexampleGraph) -> CounterexampleVerdict {
    let mut failures = Vec::new();
    let tg = g.to_threshold_graph();
    let v0 = g.layer_sizes[0];
    let rest: usize = g.layer_sizes[1..].iter().sum();
    let counting_ok = v0 > rest;
    if !counting_ok {
        failures.push(format!("|V_0| = {v0} not larger than |V \\ V_0| = {rest}"));
    }

    let adj = crate::oracle::power_graph(&tg, g.p);
    let mut reached = vec![false; g.n];
    for u in 0..v0 {
        for &v in &adj[u] {
            reached[v] = true;
        }
    }
    let neighborhood_ok = (0..g.n).all(|v| reached[v] == (v >= v0));
    if !neighborhood_ok {
        failures.push(String::from("p-hop out-neighborhood of V_0 is not V \\ V_0"));
    }

    let mut disjoint_paths_ok = true;
    let pairs = sample_pairs(g.n, 20);
    for (s, t) in pairs {
        if !check_explicit_paths(g, &tg, s, t, &mut failures) {
            disjoint_paths_ok = false;
        }
        for (a, b) in [(s, t), (t, s)] {
            let found = disjoint_path_count(&tg, a, b, g.k as i64);
            if found < g.k as i64 {
                disjoint_paths_ok = false;
                failures.push(format!(
                    "only {found} of {} disjoint paths from {a} to {b}",
                    g.k
                ));
            }
        }
    }
    CounterexampleVerdict {
        counting_ok,
        neighborhood_ok,
        disjoint_paths_ok,
        failures,
    }
}

fn sample_pairs(n: usize, want: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    if n <= 60 {
        // Deterministic spread over all pairs, capped at `want`.
        let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
            .collect();
        for i in (1..all.len()).rev() {
            let j = rng.gen_range(0..=i);
            all.swap(i, j);
        }
        pairs.extend(all.into_iter().take(want));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
        while pairs.len() < want {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            if s != t {
                pairs.push((s, t));
            }
        }
    }
    pairs
}

/// Builds the proof's explicit paths through disjoint index sets and checks
/// arc existence and internal disjointness.
fn check_explicit_paths(
    g: &CounterexampleGraph,
    tg: &ThresholdGraph,
    s: usize,
    t: usize,
    failures: &mut Vec<String>,
) -> bool {
    let layers = g.p + 1;
    let width = 2 * g.k + 2;
    let (i1, i2) = (g.layer_of(s), g.layer_of(t));
    let j1 = s - g.layer_start(i1) + 1;
    let j2 = t - g.layer_start(i2) + 1;
    // Index sets P and Q avoid j1 and j2 (only relevant within 1..=2k+2).
    let mut free: Vec<usize> = (1..=width).filter(|&j| j != j1 && j != j2).collect();
    if free.len() < 2 * g.k {
        failures.push(format!("not enough free indices between {s} and {t}"));
        return false;
    }
    free.truncate(2 * g.k);
    let (p_set, q_set) = free.split_at(g.k);

    let build = |from: usize, to: usize, jstar: usize| -> Vec<usize> {
        let (a, b) = (g.layer_of(from), g.layer_of(to));
        let inner = (b + layers - a + layers - 2) % layers + 1;
        let mut path = vec![from];
        for step in 1..=inner {
            let layer = (a + step) % layers;
            path.push(g.vertex(layer, jstar));
        }
        path.push(to);
        path
    };

    let mut paths: Vec<Vec<usize>> = Vec::new();
    for &jstar in p_set {
        paths.push(build(s, t, jstar));
    }
    for &jstar in q_set {
        paths.push(build(t, s, jstar));
    }
    let mut ok = true;
    let mut internal_seen = vec![false; g.n];
    for path in &paths {
        for w in path.windows(2) {
            if !tg.has_arc(w[0], w[1]) {
                failures.push(format!("constructed path uses missing arc {w:?}"));
                ok = false;
            }
        }
        for &v in &path[1..path.len() - 1] {
            if v == s || v == t || internal_seen[v] {
                failures.push(format!("paths between {s} and {t} share internal vertex {v}"));
                ok = false;
            }
            internal_seen[v] = true;
        }
    }
    ok
}

#[derive(Debug, Clone)]
pub struct TwoConnectivityVerdict {
    pub hk_feasible: bool,
    pub articulation_points: Vec<usize>,
    pub pair_checks_ok: bool,
    pub failures: Vec<String>,
}

impl TwoConnectivityVerdict {
    /// Vacuously true when the symmetric system is infeasible.
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn articulation_points(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.n;
    let adj = g.adjacency();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_art = vec![false; n];
    let mut timer = 0usize;
    // Iterative Tarjan lowlink with explicit stack.
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        let mut root_children = 0usize;
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx == 0 {
                disc[v] = timer;
                low[v] = timer;
                timer += 1;
            }
            if *idx < adj[v].len() {
                let to = adj[v][*idx];
                *idx += 1;
                if to == parent {
                    continue;
                }
                if disc[to] != usize::MAX {
                    low[v] = low[v].min(disc[to]);
                } else {
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((to, v, 0));
                }
            } else {
                stack.pop();
                if let Some(&mut (u, _, _)) = stack.last_mut() {
                    low[u] = low[u].min(low[v]);
                    if u != root && low[v] >= disc[u] {
                        is_art[u] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_art[root] = true;
        }
    }
    (0..n).filter(|&v| is_art[v]).collect()
}

/// If the symmetric system is feasible, asserts 2-connectivity by both an
/// articulation-point scan and 2 vertex-disjoint paths on sampled pairs.
pub fn check_two_connectivity(g: &UndirectedGraph) -> TwoConnectivityVerdict {
    let hk = crate::heldkarp::solve_symmetric_hk(g);
    let hk_feasible = match hk {
        Ok(_) => true,
        Err(HkError::Infeasible(_)) => false,
        Err(HkError::IterationLimit) => {
            return TwoConnectivityVerdict {
                hk_feasible: false,
                articulation_points: Vec::new(),
                pair_checks_ok: false,
                failures: vec![String::from("symmetric solver hit its iteration limit")],
            }
        }
    };
    if !hk_feasible {
        return TwoConnectivityVerdict {
            hk_feasible,
            articulation_points: Vec::new(),
            pair_checks_ok: true,
            failures: Vec::new(),
        };
    }
    let mut failures = Vec::new();
    let arts = articulation_points(g);
    if !arts.is_empty() {
        failures.push(format!("articulation points found: {arts:?}"));
    }
    // Doubled arcs give the directed view of the undirected graph.
    let tg = ThresholdGraph::from_arcs(
        g.n,
        1.0,
        g.edges
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
            .collect(),
    );
    let mut pair_checks_ok = true;
    for (s, t) in sample_pairs(g.n, 20) {
        let found = disjoint_path_count(&tg, s, t, 2);
        if found < 2 {
            pair_checks_ok = false;
            failures.push(format!("only {found} vertex-disjoint paths from {s} to {t}"));
        }
    }
    TwoConnectivityVerdict {
        hk_feasible,
        articulation_points: arts,
        pair_checks_ok,
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricStyle {
    /// Uniform integer costs in [1, 100], repaired by metric closure.
    Closure,
    /// Planar points with per-direction stretch in [1, 1.3], then re-closed.
    EuclideanIsh,
}

/// Seeded random asymmetric metric; closure guarantees the triangle
/// inequality by construction.
pub fn gen_random_metric(n: usize, seed: u64, style: MetricStyle) -> MetricInstance {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cost = vec![0.0f64; n * n];
    match style {
        MetricStyle::Closure => {
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        cost[u * n + v] = rng.gen_range(1..=100) as f64;
                    }
                }
            }
        }
        MetricStyle::EuclideanIsh => {
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        let dx = pts[u].0 - pts[v].0;
                        let dy = pts[u].1 - pts[v].1;
                        let dist = libm::sqrt(dx * dx + dy * dy);
                        cost[u * n + v] = dist * rng.gen_range(1.0..1.3);
                    }
                }
            }
        }
    }
    let name = match style {
        MetricStyle::Closure => format!("rand-closure-n{n}-s{seed}"),
        MetricStyle::EuclideanIsh => format!("rand-euclid-n{n}-s{seed}"),
    };
    let inst = MetricInstance::from_matrix_unchecked(&name, n, cost, Some(seed)).unwrap();
    crate::instance::validate_metric(inst, ValidationMode::Closure).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_metric;
    use crate::oracle::{power_hamiltonian, PowerHamiltonian};

    #[test]
    fn extreme_point_k4_values() {
        let cert = build_extreme_point(4).unwrap();
        assert_eq!(cert.n, 13);
        let u = |i| cert.vertex_u(i);
        let w = cert.vertex_w();
        assert_eq!(cert.x_of(u(1), u(2)), Rat::new(3, 4));
        assert_eq!(cert.x_of(u(1), w), Rat::new(1, 4));
        assert_eq!(cert.x_of(cert.vertex_v(5), u(0)), Rat::one());
    }

    #[test]
    fn extreme_point_w_degree() {
        let cert = build_extreme_point(2).unwrap();
        assert_eq!(cert.n, 9);
        let w = cert.vertex_w();
        let indeg = cert.arcs.iter().filter(|&&(_, b)| b == w).count();
        let outdeg = cert.arcs.iter().filter(|&&(a, _)| a == w).count();
        assert_eq!(indeg, 2);
        assert_eq!(outdeg, 2);
    }

    #[test]
    fn extreme_point_degrees_are_one() {
        for k in 2..=5 {
            let cert = build_extreme_point(k).unwrap();
            for v in 0..cert.n {
                assert_eq!(cert.out_sum(v), Rat::one(), "out sum at {v}, k={k}");
                assert_eq!(cert.in_sum(v), Rat::one(), "in sum at {v}, k={k}");
            }
        }
    }

    #[test]
    fn extreme_point_k2_verifies() {
        let cert = build_extreme_point(2).unwrap();
        let verdict = verify_extreme_point(&cert);
        assert!(verdict.pass(), "failures: {:?}", verdict.failures);
        assert_eq!(verdict.min_cut, Rat::one());
        assert!(verdict.extreme);
    }

    #[test]
    fn perturbed_certificate_fails() {
        let mut cert = build_extreme_point(2).unwrap();
        cert.x[0] += Rat::new(1, 100);
        let verdict = verify_extreme_point(&cert);
        assert!(!verdict.degree_ok);
    }

    #[test]
    fn invalid_k_rejected() {
        assert!(matches!(build_extreme_point(1), Err(InvalidK(1))));
    }

    #[test]
    fn counterexample_sizes() {
        let g = build_counterexample(1, 3);
        assert_eq!(g.layer_sizes, alloc::vec![13, 4, 4, 4]);
        assert_eq!(g.n, 25);
        let g = build_counterexample(2, 2);
        assert_eq!(g.layer_sizes, alloc::vec![13, 6, 6]);
        let g = build_counterexample(1, 1);
        assert_eq!(g.layer_sizes, alloc::vec![5, 4]);
    }

    #[test]
    fn counterexample_k1_p1_verifies_and_power_not_hamiltonian() {
        let g = build_counterexample(1, 1);
        let verdict = verify_counterexample(&g);
        assert!(verdict.pass(), "failures: {:?}", verdict.failures);
        let tg = g.to_threshold_graph();
        assert_eq!(power_hamiltonian(&tg, 1, 10_000_000), PowerHamiltonian::No);
    }

    #[test]
    fn counterexample_k1_p3_counting() {
        let g = build_counterexample(1, 3);
        let verdict = verify_counterexample(&g);
        assert!(verdict.counting_ok);
        assert!(verdict.neighborhood_ok);
        // Same-layer hop distance inside V_0 wraps through all layers.
        let tg = g.to_threshold_graph();
        assert_eq!(crate::instance::hop_distance(&tg, 0, 1), Some(4));
    }

    #[test]
    fn cycle_is_two_connected_path_is_vacuous() {
        let c6 = UndirectedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect());
        let v = check_two_connectivity(&c6);
        assert!(v.hk_feasible);
        assert!(v.pass(), "failures: {:?}", v.failures);
        let p4 = UndirectedGraph::new(4, alloc::vec![(0, 1), (1, 2), (2, 3)]);
        let v = check_two_connectivity(&p4);
        assert!(!v.hk_feasible);
        assert!(v.pass());
    }

    #[test]
    fn generated_metrics_are_metric_and_deterministic() {
        for style in [MetricStyle::Closure, MetricStyle::EuclideanIsh] {
            let a = gen_random_metric(8, 7, style);
            let b = gen_random_metric(8, 7, style);
            assert_eq!(a.costs(), b.costs());
            assert!(validate_metric(a, ValidationMode::Reject).is_ok());
        }
    }
}
