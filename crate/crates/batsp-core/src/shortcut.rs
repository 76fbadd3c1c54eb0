//! From Eulerian multigraph to Hamiltonian cycle: circuit extraction, piece
//! partition, transversal by bipartite matching, and bounded shortcutting.

use alloc::vec;
use alloc::vec::Vec;

use crate::circulation::EulerianMultigraph;
use crate::instance::{hop_distance, MetricInstance, ThresholdGraph};

/// Closed walk visiting every vertex, with the multiplicity bound it honors.
#[derive(Debug, Clone)]
pub struct SpanningCircuit {
    /// v_1, ..., v_m; the closing arc v_m -> v_1 is implicit.
    pub sequence: Vec<usize>,
    pub k: usize,
    pub n: usize,
}

impl SpanningCircuit {
    pub fn visit_count(&self, v: usize) -> usize {
        self.sequence.iter().filter(|&&u| u == v).count()
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortcutError {
    NotEulerian,
    /// Hall violator: pieces whose union holds too few distinct vertices.
    NoTransversal(Vec<usize>),
}

impl core::fmt::Display for ShortcutError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ShortcutError::NotEulerian => write!(f, "multigraph has no Eulerian circuit"),
            ShortcutError::NoTransversal(p) => {
                write!(f, "no transversal; deficient piece set {p:?}")
            }
        }
    }
}

/// Hierholzer traversal using every arc exactly its multiplicity.
pub fn euler_circuit(
    mg: &EulerianMultigraph,
    start: usize,
) -> Result<SpanningCircuit, ShortcutError> {
    let n = mg.n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Deterministic order: arcs are lexicographic, expanded by multiplicity.
    for (&(u, v), &m) in mg.arcs.iter().zip(&mg.multiplicity) {
        for _ in 0..m {
            adj[u].push(v);
        }
    }
    let total: usize = adj.iter().map(|a| a.len()).sum();
    let mut ptr = vec![0usize; n];
    let mut stack = vec![start];
    let mut walk = Vec::with_capacity(total + 1);
    while let Some(&v) = stack.last() {
        if ptr[v] < adj[v].len() {
            stack.push(adj[v][ptr[v]]);
            ptr[v] += 1;
        } else {
            walk.push(v);
            stack.pop();
        }
    }
    if walk.len() != total + 1 {
        return Err(ShortcutError::NotEulerian);
    }
    walk.reverse();
    walk.pop(); // closing copy of the start vertex
    Ok(SpanningCircuit {
        sequence: walk,
        k: mg.visit_bound as usize,
        n,
    })
}

/// Contiguous pieces of length k (last one may be shorter), as index ranges
/// into the circuit sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecePartition {
    pub pieces: Vec<core::ops::Range<usize>>,
    pub k: usize,
}

pub fn partition_pieces(c: &SpanningCircuit, k: usize) -> PiecePartition {
    assert!(k >= 1);
    let m = c.len();
    let mut pieces = Vec::with_capacity(m.div_ceil(k));
    let mut start = 0;
    while start < m {
        let end = core::cmp::min(start + k, m);
        pieces.push(start..end);
        start = end;
    }
    PiecePartition { pieces, k }
}

/// One chosen occurrence per piece: (position in circuit, vertex), vertices
/// pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    pub choice: Vec<(usize, usize)>,
}

/// Maximum bipartite matching of pieces against distinct vertices, by DFS
/// augmenting paths in piece index order.
pub fn find_transversal(
    c: &SpanningCircuit,
    p: &PiecePartition,
) -> Result<Transversal, ShortcutError> {
    let n = c.n;
    let l = p.pieces.len();
    // piece -> distinct vertices occurring in it
    let piece_verts: Vec<Vec<usize>> = p
        .pieces
        .iter()
        .map(|r| {
            let mut vs: Vec<usize> = c.sequence[r.clone()].to_vec();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    let mut vertex_match = vec![usize::MAX; n]; // vertex -> piece
    let mut piece_match = vec![usize::MAX; l];

    fn augment(
        piece: usize,
        piece_verts: &[Vec<usize>],
        vertex_match: &mut [usize],
        piece_match: &mut [usize],
        visited: &mut [bool],
    ) -> bool {
        for &v in &piece_verts[piece] {
            if !visited[v] {
                visited[v] = true;
                if vertex_match[v] == usize::MAX
                    || augment(vertex_match[v], piece_verts, vertex_match, piece_match, visited)
                {
                    vertex_match[v] = piece;
                    piece_match[piece] = v;
                    return true;
                }
            }
        }
        false
    }

    for piece in 0..l {
        let mut visited = vec![false; n];
        if !augment(
            piece,
            &piece_verts,
            &mut vertex_match,
            &mut piece_match,
            &mut visited,
        ) {
            // Hall violator: the failed piece plus every piece matched to a
            // vertex reached by the alternating search.
            let mut bad: Vec<usize> = (0..n)
                .filter(|&v| visited[v] && vertex_match[v] != usize::MAX)
                .map(|v| vertex_match[v])
                .collect();
            bad.push(piece);
            bad.sort_unstable();
            bad.dedup();
            return Err(ShortcutError::NoTransversal(bad));
        }
    }
    let choice = (0..l)
        .map(|piece| {
            let v = piece_match[piece];
            let r = &p.pieces[piece];
            let pos = (r.clone()).find(|&i| c.sequence[i] == v).unwrap();
            (pos, v)
        })
        .collect();
    Ok(Transversal { choice })
}

/// Hamiltonian cycle with its bottleneck cost and hop certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct TourResult {
    pub tour: Vec<usize>,
    pub bottleneck: f64,
    /// Hop distance in the threshold graph, per tour edge.
    pub hops: Vec<usize>,
    pub max_hops: usize,
    pub k_used: usize,
    pub tau_star: f64,
    /// The guarantee 2k - 1 for the k in effect.
    pub ratio_bound: usize,
}

/// Keeps every transversal occurrence plus the first occurrence of each
/// unchosen vertex; the kept occurrences in circuit order form the tour.
pub fn shortcut_tour(
    c: &SpanningCircuit,
    t: &Transversal,
    inst: &MetricInstance,
    g: &ThresholdGraph,
) -> TourResult {
    let n = c.n;
    let mut chosen_pos = vec![usize::MAX; n];
    for &(pos, v) in &t.choice {
        chosen_pos[v] = pos;
    }
    let mut kept = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for (pos, &v) in c.sequence.iter().enumerate() {
        if chosen_pos[v] != usize::MAX {
            if chosen_pos[v] == pos {
                kept.push(pos);
            }
        } else if !seen[v] {
            seen[v] = true;
            kept.push(pos);
        }
    }
    debug_assert_eq!(kept.len(), n);
    let tour: Vec<usize> = kept.iter().map(|&p| c.sequence[p]).collect();
    let mut bottleneck = 0.0f64;
    let mut hops = Vec::with_capacity(n);
    for i in 0..n {
        let u = tour[i];
        let v = tour[(i + 1) % n];
        let cost = inst.cost(u, v);
        if cost > bottleneck {
            bottleneck = cost;
        }
        hops.push(hop_distance(g, u, v).unwrap_or(usize::MAX));
    }
    let max_hops = hops.iter().copied().max().unwrap_or(0);
    TourResult {
        tour,
        bottleneck,
        hops,
        max_hops,
        k_used: c.k,
        tau_star: g.tau,
        ratio_bound: 2 * c.k - 1,
    }
}
