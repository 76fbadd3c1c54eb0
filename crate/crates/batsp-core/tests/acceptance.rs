//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them on success).

use std::time::Instant;

use batsp_core::circulation::{assemble_multigraph, build_instance, solve_integral};
use batsp_core::constructions::{
    build_counterexample, build_extreme_point, check_two_connectivity, gen_random_metric,
    verify_counterexample, verify_extreme_point, MetricStyle, Rat,
};
use batsp_core::heldkarp::{
    find_tau_star, solve_feasibility, HkError, UndirectedGraph, EPS_LP,
};
use batsp_core::instance::threshold_graph;
use batsp_core::oracle::{exact_bottleneck, power_hamiltonian, PowerHamiltonian};
use batsp_core::shortcut::{euler_circuit, find_transversal, partition_pieces, SpanningCircuit};
use batsp_core::solver::{solve_batsp, verify_solution, SolverConfig};
use batsp_core::thintree::{
    default_beta_target, derive_z, find_certified_thin_tree, orient_tree, sample_tree, thinness,
    ThinnessMode,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn conclude(criterion: usize, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion} ({name}): pass");
    } else {
        println!("criterion {criterion} ({name}): FAIL");
        panic!("criterion {criterion} failed: {failures:?}");
    }
}

#[test]
fn criterion_1_end_to_end_guarantee() {
    let mut failures = Vec::new();
    for run in 0..50u64 {
        let n = 6 + (run as usize % 7);
        let style = if run % 2 == 0 { MetricStyle::Closure } else { MetricStyle::EuclideanIsh };
        let inst = gen_random_metric(n, 1000 + run, style);
        let started = Instant::now();
        let r = match solve_batsp(&inst, &SolverConfig { rng_seed: run, ..Default::default() }) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("run {run}: pipeline error {e}"));
                continue;
            }
        };
        let elapsed = started.elapsed();
        if elapsed.as_secs_f64() > 10.0 {
            failures.push(format!("run {run}: {elapsed:?} exceeds 10 s"));
        }
        // bottleneck <= (2*ceil(4*beta) - 1) * tau_star, zero tolerance on
        // the inequality itself.
        let k = (4.0 * r.beta).ceil() as usize;
        let bound = (2 * k.max(1) - 1) as f64 * r.tau_star;
        if r.tour.bottleneck > bound {
            failures.push(format!("run {run}: bottleneck {} > bound {bound}", r.tour.bottleneck));
        }
        let opt = exact_bottleneck(&inst, 18).unwrap().opt_bottleneck;
        if r.tau_star > opt || opt > r.tour.bottleneck {
            failures.push(format!(
                "run {run}: sandwich fails: tau {} opt {opt} bottleneck {}",
                r.tau_star, r.tour.bottleneck
            ));
        }
        let check = verify_solution(&inst, &r);
        if !check.is_empty() {
            failures.push(format!("run {run}: {check:?}"));
        }
    }
    conclude(1, "end-to-end guarantee", failures);
}

#[test]
fn criterion_2_degree_bound() {
    let mut failures = Vec::new();
    for run in 0..20u64 {
        let n = 6 + (run as usize % 6);
        let inst = gen_random_metric(n, 2000 + run, MetricStyle::Closure);
        let tau = find_tau_star(&inst).unwrap();
        let z = derive_z(&tau.solution);
        let mut tree =
            find_certified_thin_tree(&z, default_beta_target(n), 64, run).unwrap();
        tree.orientation = orient_tree(&tree.edges, &tau.solution).unwrap();
        let ci = build_instance(&tau.solution, &tree.orientation, tree.beta);
        for v in 0..n {
            if ci.vertex_cap_frac[v] > 4.0 * tree.beta + 1e-9 {
                failures.push(format!(
                    "run {run}: vertex {v} fractional capacity {} above 4*beta = {}",
                    ci.vertex_cap_frac[v],
                    4.0 * tree.beta
                ));
            }
        }
        let circ = solve_integral(&ci).unwrap();
        let mg = assemble_multigraph(&ci, &circ).unwrap();
        let circuit = euler_circuit(&mg, 0).unwrap();
        let bound = (4.0 * tree.beta).ceil() as usize;
        for v in 0..n {
            let visits = circuit.visit_count(v);
            if visits > bound {
                failures.push(format!("run {run}: vertex {v} visited {visits} > {bound}"));
            }
        }
    }
    conclude(2, "degree bound", failures);
}

#[test]
fn criterion_3_hop_bound() {
    let mut failures = Vec::new();
    // Pipeline side: recompute hop distances on finished tours.
    for run in 0..10u64 {
        let n = 7 + (run as usize % 5);
        let inst = gen_random_metric(n, 3000 + run, MetricStyle::EuclideanIsh);
        let r = solve_batsp(&inst, &SolverConfig { rng_seed: run, ..Default::default() }).unwrap();
        let g = threshold_graph(&inst, r.tau_star);
        for i in 0..n {
            let (u, v) = (r.tour.tour[i], r.tour.tour[(i + 1) % n]);
            let hops = batsp_core::instance::hop_distance(&g, u, v).unwrap_or(usize::MAX);
            if hops > 2 * r.k - 1 {
                failures.push(format!("run {run}: edge ({u},{v}) hops {hops} > {}", 2 * r.k - 1));
            }
        }
    }
    // Synthetic side: 1,000 random circuits with max visit count <= k.
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1c1);
    for case in 0..1000 {
        let n = rng.gen_range(2..25);
        let k = rng.gen_range(1..=5usize);
        let mut sequence = Vec::new();
        for v in 0..n {
            let copies = rng.gen_range(1..=k);
            sequence.extend(std::iter::repeat(v).take(copies));
        }
        sequence.shuffle(&mut rng);
        let c = SpanningCircuit { sequence, k, n };
        let p = partition_pieces(&c, k);
        let t = match find_transversal(&c, &p) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("case {case}: transversal failed: {e}"));
                continue;
            }
        };
        // Kept positions per the shortcut rule; check cyclic gaps.
        let mut chosen_pos = vec![usize::MAX; n];
        for &(pos, v) in &t.choice {
            chosen_pos[v] = pos;
        }
        let mut kept = Vec::new();
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
        let m = c.len();
        for i in 0..kept.len() {
            let gap = if i + 1 < kept.len() {
                kept[i + 1] - kept[i]
            } else {
                m - kept[i] + kept[0]
            };
            if gap > 2 * k - 1 {
                failures.push(format!("case {case}: gap {gap} > {}", 2 * k - 1));
            }
        }
    }
    conclude(3, "hop bound", failures);
}

/// Second, structurally different thinness enumeration: recursive subset
/// walk instead of bitmask iteration.
fn independent_thinness(tree: &[(usize, usize)], z: &batsp_core::thintree::FractionalEdgeWeights) -> f64 {
    fn recurse(
        v: usize,
        n: usize,
        in_set: &mut Vec<bool>,
        tree: &[(usize, usize)],
        z: &batsp_core::thintree::FractionalEdgeWeights,
        best: &mut f64,
    ) {
        if v == n {
            if !in_set[1..].iter().any(|&b| b) {
                return;
            }
            let crossing = tree.iter().filter(|&&(a, b)| in_set[a] != in_set[b]).count();
            let mut value = 0.0;
            for (&(a, b), &w) in z.edges.iter().zip(&z.z) {
                if in_set[a] != in_set[b] {
                    value += w;
                }
            }
            let ratio = crossing as f64 / value;
            if ratio > *best {
                *best = ratio;
            }
            return;
        }
        recurse(v + 1, n, in_set, tree, z, best);
        in_set[v] = true;
        recurse(v + 1, n, in_set, tree, z, best);
        in_set[v] = false;
    }
    let n = z.n;
    let mut best = 0.0;
    // Vertex 0 stays outside, matching the certified enumeration.
    let mut in_set = vec![false; n];
    recurse(1, n, &mut in_set, tree, z, &mut best);
    best
}

#[test]
fn criterion_4_thinness_certification() {
    let mut failures = Vec::new();
    for run in 0..8u64 {
        let n = 6 + (run as usize % 8); // up to 13, well under 16
        let inst = gen_random_metric(n, 4000 + run, MetricStyle::Closure);
        let tau = find_tau_star(&inst).unwrap();
        let z = derive_z(&tau.solution);
        let tree = sample_tree(&z, run).unwrap();
        let report = thinness(&tree, &z, ThinnessMode::Exhaustive).unwrap();
        if !report.certified {
            failures.push(format!("run {run}: exhaustive mode not certified"));
        }
        let second = independent_thinness(&tree, &z);
        if (report.beta - second).abs() > 1e-12 {
            failures.push(format!(
                "run {run}: beta {} vs independent {second}",
                report.beta
            ));
        }
        // The witness cut must attain the ratio.
        let mut in_set = vec![false; n];
        for &v in &report.witness {
            in_set[v] = true;
        }
        let crossing = tree.iter().filter(|&&(a, b)| in_set[a] != in_set[b]).count();
        let witness_ratio = crossing as f64 / z.cut_value(&in_set);
        if (witness_ratio - report.beta).abs() > 1e-12 {
            failures.push(format!(
                "run {run}: witness ratio {witness_ratio} vs beta {}",
                report.beta
            ));
        }
    }
    conclude(4, "thinness certification", failures);
}

#[test]
fn criterion_5_held_karp_correctness() {
    let mut failures = Vec::new();
    for run in 0..25u64 {
        let n = 6 + (run as usize % 7);
        let inst = gen_random_metric(n, 5000 + run, MetricStyle::Closure);
        let tau = find_tau_star(&inst).unwrap();
        let x = &tau.solution;
        let g = threshold_graph(&inst, tau.tau_star);
        // Full enumeration: no directed cut below 1 beyond LP tolerance.
        let full = 1usize << n;
        let mut violated = 0usize;
        for mask in 1..full - 1 {
            let mut value = 0.0;
            for (&(a, b), &xv) in g.arcs.iter().zip(&x.x) {
                if mask & (1 << a) != 0 && mask & (1 << b) == 0 {
                    value += xv;
                }
            }
            if 1.0 - value > EPS_LP {
                violated += 1;
            }
        }
        if violated > 0 {
            failures.push(format!("run {run}: {violated} cuts below 1 - eps"));
        }
        // Minimality: the next lower distinct cost is infeasible.
        let costs = inst.distinct_costs();
        let idx = costs.iter().position(|&c| c == tau.tau_star).unwrap();
        if idx > 0 {
            let lower = threshold_graph(&inst, costs[idx - 1]);
            if !matches!(solve_feasibility(&lower), Err(HkError::Infeasible(_))) {
                failures.push(format!("run {run}: feasible below tau_star"));
            }
        }
    }
    conclude(5, "Held-Karp correctness", failures);
}

#[test]
fn criterion_6_extreme_point_reproduction() {
    let mut failures = Vec::new();
    let started = Instant::now();
    for k in 2..=5usize {
        let cert = build_extreme_point(k).unwrap();
        let verdict = verify_extreme_point(&cert);
        if !verdict.pass() {
            failures.push(format!("k={k}: {:?}", verdict.failures));
        }
        if verdict.min_cut != Rat::new(1, 1) || !verdict.extreme {
            failures.push(format!("k={k}: min_cut {:?} extreme {}", verdict.min_cut, verdict.extreme));
        }
    }
    let cert = build_extreme_point(4).unwrap();
    let u1 = cert.vertex_u(1);
    let u2 = cert.vertex_u(2);
    if cert.x_of(u1, u2) != Rat::new(3, 4) || cert.x_of(u1, cert.vertex_w()) != Rat::new(1, 4) {
        failures.push("k=4 arc values are not 3/4 and 1/4".to_string());
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 60.0 {
        failures.push(format!("verification took {elapsed:?}, over 60 s"));
    }
    conclude(6, "extreme-point reproduction", failures);
}

#[test]
fn criterion_7_power_graph_counterexample() {
    let mut failures = Vec::new();
    for (k, p) in [(1usize, 1usize), (1, 2), (1, 3), (2, 2)] {
        let g = build_counterexample(k, p);
        let verdict = verify_counterexample(&g);
        if !(verdict.counting_ok && verdict.neighborhood_ok && verdict.disjoint_paths_ok) {
            failures.push(format!("(k={k}, p={p}): {:?}", verdict.failures));
        }
    }
    for (k, p) in [(1usize, 1usize), (1, 2)] {
        let g = build_counterexample(k, p);
        let tg = g.to_threshold_graph();
        match power_hamiltonian(&tg, p, 50_000_000) {
            PowerHamiltonian::No => {}
            other => failures.push(format!("(k={k}, p={p}): expected non-Hamiltonian, got {other:?}")),
        }
    }
    conclude(7, "power-graph counterexample", failures);
}

/// Hamiltonian cycle plus random chords: 2-connected with a feasible
/// symmetric relaxation.
fn random_feasible_graph(n: usize, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    for _ in 0..rng.gen_range(0..n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    UndirectedGraph::new(n, edges)
}

/// Two disjoint cycles sharing exactly one vertex: the shared vertex cuts.
fn planted_cut_vertex_graph(half: usize) -> UndirectedGraph {
    let n = 2 * half + 1;
    let mut edges = Vec::new();
    for i in 0..=half {
        edges.push((i % (half + 1), (i + 1) % (half + 1)));
    }
    let second: Vec<usize> = std::iter::once(0).chain(half + 1..n).collect();
    for i in 0..second.len() {
        edges.push((second[i], second[(i + 1) % second.len()]));
    }
    UndirectedGraph::new(n, edges)
}

#[test]
fn criterion_8_two_connectivity() {
    let mut failures = Vec::new();
    for seed in 0..30u64 {
        let n = 6 + (seed as usize % 6);
        let g = random_feasible_graph(n, seed);
        let verdict = check_two_connectivity(&g);
        if !verdict.hk_feasible {
            failures.push(format!("seed {seed}: cycle-based graph not feasible"));
        }
        if !verdict.articulation_points.is_empty() || !verdict.pair_checks_ok {
            failures.push(format!("seed {seed}: {:?}", verdict.failures));
        }
    }
    for seed in 0..30u64 {
        let half = 3 + (seed as usize % 4);
        let g = planted_cut_vertex_graph(half);
        let verdict = check_two_connectivity(&g);
        if verdict.hk_feasible {
            failures.push(format!("seed {seed}: cut-vertex graph reported feasible"));
        }
    }
    conclude(8, "2-connectivity from the symmetric relaxation", failures);
}

#[test]
fn criterion_9_oracle_cross_validation() {
    let mut failures = Vec::new();
    for run in 0..25u64 {
        let n = 5 + (run as usize % 5); // 5..=9
        let inst = gen_random_metric(n, 9000 + run, MetricStyle::EuclideanIsh);
        let dp = exact_bottleneck(&inst, 18).unwrap().opt_bottleneck;
        // Factorial scan over all tours fixing vertex 0.
        let mut perm: Vec<usize> = (1..n).collect();
        let mut best = f64::INFINITY;
        loop {
            let mut b = inst.cost(0, perm[0]);
            for w in perm.windows(2) {
                b = b.max(inst.cost(w[0], w[1]));
            }
            b = b.max(inst.cost(*perm.last().unwrap(), 0));
            if b < best {
                best = b;
            }
            // Next lexicographic permutation.
            let mut i = perm.len() - 1;
            while i > 0 && perm[i - 1] >= perm[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = perm.len() - 1;
            while perm[j] <= perm[i - 1] {
                j -= 1;
            }
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        if dp != best {
            failures.push(format!("run {run}: DP {dp} vs brute force {best}"));
        }
    }
    conclude(9, "oracle cross-validation", failures);
}

#[test]
fn criterion_10_determinism() {
    let mut failures = Vec::new();
    for seed in 0..5u64 {
        let inst = gen_random_metric(9, 777 + seed, MetricStyle::Closure);
        let cfg = SolverConfig { rng_seed: seed, ..Default::default() };
        let a = solve_batsp(&inst, &cfg).unwrap();
        let b = solve_batsp(&inst, &cfg).unwrap();
        // Core reports carry no timings; the full debug rendering must match
        // byte for byte.
        let (ra, rb) = (format!("{a:?}"), format!("{b:?}"));
        if ra != rb {
            failures.push(format!("seed {seed}: reports differ"));
        }
    }
    conclude(10, "determinism", failures);
}
