//! Dinic max-flow on integer capacities, used to decide restricted
//! feasibility and extract a violated Hall cut.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

struct Edge {
    to: usize,
    cap: BigInt,
}

pub(crate) struct MaxFlow {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    level: Vec<i64>,
    next: Vec<usize>,
}

impl MaxFlow {
    pub(crate) fn new(n: usize) -> Self {
        MaxFlow {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![-1; n],
            next: vec![0; n],
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: BigInt) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge {
            to: from,
            cap: BigInt::zero(),
        });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if self.level[v] < 0 && self.edges[e].cap.is_positive() {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: BigInt) -> BigInt {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let e = self.adj[u][self.next[u]];
            let v = self.edges[e].to;
            if self.level[v] == self.level[u] + 1 && self.edges[e].cap.is_positive() {
                let amount = (&pushed).min(&self.edges[e].cap).clone();
                let got = self.dfs(v, t, amount);
                if got.is_positive() {
                    self.edges[e].cap -= &got;
                    self.edges[e ^ 1].cap += &got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        BigInt::zero()
    }

    pub(crate) fn run(&mut self, s: usize, t: usize, limit: &BigInt) -> BigInt {
        let mut total = BigInt::zero();
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
            loop {
                let f = self.dfs(s, t, limit.clone());
                if f.is_zero() {
                    break;
                }
                total += f;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph after [`run`](Self::run).
    pub(crate) fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.edges[e].to;
                if !seen[v] && self.edges[e].cap.is_positive() {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        seen
    }
}
