//! Dinic max-flow, in a float flavor (cut separation over LP values) and an
//! integer flavor (circulations, vertex-disjoint path counting).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone)]
struct Edge<T> {
    to: usize,
    cap: T,
    rev: usize,
}

macro_rules! dinic_impl {
    ($name:ident, $t:ty, $zero:expr) => {
        #[derive(Debug, Clone)]
        pub struct $name {
            graph: Vec<Vec<Edge<$t>>>,
            level: Vec<i32>,
            iter: Vec<usize>,
            eps: $t,
        }

        impl $name {
            pub fn new(n: usize, eps: $t) -> Self {
                $name {
                    graph: vec![Vec::new(); n],
                    level: vec![0; n],
                    iter: vec![0; n],
                    eps,
                }
            }

            /// Adds a directed edge; returns (node, index) usable with `flow_on`.
            pub fn add_edge(&mut self, from: usize, to: usize, cap: $t) -> (usize, usize) {
                let rev = self.graph[to].len();
                let idx = self.graph[from].len();
                self.graph[from].push(Edge { to, cap, rev });
                self.graph[to].push(Edge {
                    to: from,
                    cap: $zero,
                    rev: idx,
                });
                (from, idx)
            }

            /// Flow pushed through the edge returned by `add_edge`.
            pub fn flow_on(&self, handle: (usize, usize), original_cap: $t) -> $t {
                original_cap - self.graph[handle.0][handle.1].cap
            }

            fn bfs(&mut self, s: usize) {
                self.level.iter_mut().for_each(|l| *l = -1);
                self.level[s] = 0;
                let mut q = VecDeque::new();
                q.push_back(s);
                while let Some(v) = q.pop_front() {
                    for e in &self.graph[v] {
                        if e.cap > self.eps && self.level[e.to] < 0 {
                            self.level[e.to] = self.level[v] + 1;
                            q.push_back(e.to);
                        }
                    }
                }
            }

            fn dfs(&mut self, v: usize, t: usize, f: $t) -> $t {
                if v == t {
                    return f;
                }
                while self.iter[v] < self.graph[v].len() {
                    let i = self.iter[v];
                    let (to, cap, rev) = {
                        let e = &self.graph[v][i];
                        (e.to, e.cap, e.rev)
                    };
                    if cap > self.eps && self.level[v] < self.level[to] {
                        let pushed = self.dfs(to, t, if f < cap { f } else { cap });
                        if pushed > self.eps {
                            self.graph[v][i].cap -= pushed;
                            self.graph[to][rev].cap += pushed;
                            return pushed;
                        }
                    }
                    self.iter[v] += 1;
                }
                $zero
            }

            pub fn max_flow(&mut self, s: usize, t: usize, limit: $t) -> $t {
                let mut total = $zero;
                loop {
                    self.bfs(s);
                    if self.level[t] < 0 {
                        return total;
                    }
                    self.iter.iter_mut().for_each(|i| *i = 0);
                    loop {
                        let remaining = limit - total;
                        if !(remaining > self.eps) {
                            return total;
                        }
                        let f = self.dfs(s, t, remaining);
                        if !(f > self.eps) {
                            break;
                        }
                        total += f;
                    }
                }
            }

            /// Vertices reachable from `s` in the residual graph; the source
            /// side of a minimum cut after `max_flow` has run.
            pub fn min_cut_side(&self, s: usize) -> Vec<bool> {
                let mut seen = vec![false; self.graph.len()];
                seen[s] = true;
                let mut q = VecDeque::new();
                q.push_back(s);
                while let Some(v) = q.pop_front() {
                    for e in &self.graph[v] {
                        if e.cap > self.eps && !seen[e.to] {
                            seen[e.to] = true;
                            q.push_back(e.to);
                        }
                    }
                }
                seen
            }
        }
    };
}

dinic_impl!(DinicF64, f64, 0.0f64);
dinic_impl!(DinicI64, i64, 0i64);
