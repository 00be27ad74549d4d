//! Uncapacitated network simplex over exact integers.
//!
//! The basis is a spanning tree rooted at an extra node joined to every real
//! node by an artificial arc of cost `M`. The tree is rebuilt by a BFS after
//! each pivot, which is plenty for the instance sizes met here.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotRule {
    /// Lowest-index entering arc, lowest-index leaving arc among ties.
    #[default]
    Bland,
    /// Most negative reduced cost; falls back to Bland after a long run of
    /// degenerate pivots so that termination is still guaranteed.
    Best,
}

/// Consecutive degenerate pivots tolerated under [`PivotRule::Best`].
const DEGENERATE_STREAK: usize = 64;

pub(crate) struct Network {
    pub nodes: usize,
    /// Positive for sources, negative for sinks; sums to zero.
    pub supply: Vec<BigInt>,
    pub arcs: Vec<(usize, usize, BigInt)>,
}

pub(crate) struct FlowSolution {
    pub flow: Vec<BigInt>,
    /// Node potentials with `c(u, v) >= pi(v) - pi(u)` on every real arc.
    pub potential: Vec<BigInt>,
    pub artificial_flow: BigInt,
    pub pivots: usize,
}

struct Tree {
    parent_arc: Vec<Option<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    pi: Vec<BigInt>,
}

pub(crate) fn solve(net: &Network, rule: PivotRule) -> Result<FlowSolution> {
    let n = net.nodes;
    let root = n;
    let m_real = net.arcs.len();
    let big_m: BigInt = BigInt::from(1) + net.arcs.iter().map(|a| a.2.abs()).sum::<BigInt>();
    let mut tail = Vec::with_capacity(m_real + n);
    let mut head = Vec::with_capacity(m_real + n);
    let mut cost = Vec::with_capacity(m_real + n);
    for (u, v, c) in &net.arcs {
        tail.push(*u);
        head.push(*v);
        cost.push(c.clone());
    }
    let mut flow = vec![BigInt::zero(); m_real + n];
    let mut in_tree = vec![false; m_real + n];
    for v in 0..n {
        let a = m_real + v;
        if net.supply[v].is_negative() {
            tail.push(root);
            head.push(v);
            flow[a] = -net.supply[v].clone();
        } else {
            tail.push(v);
            head.push(root);
            flow[a] = net.supply[v].clone();
        }
        cost.push(big_m.clone());
        in_tree[a] = true;
    }
    let total_arcs = m_real + n;
    let mut use_bland = rule == PivotRule::Bland;
    let mut streak = 0usize;
    let mut pivots = 0usize;
    loop {
        let tree = build_tree(n + 1, root, &tail, &head, &cost, &in_tree);
        let rc = |a: usize| &cost[a] + &tree.pi[tail[a]] - &tree.pi[head[a]];
        let entering = if use_bland {
            (0..total_arcs).find(|&a| !in_tree[a] && rc(a).is_negative())
        } else {
            let mut best: Option<(usize, BigInt)> = None;
            for a in (0..total_arcs).filter(|&a| !in_tree[a]) {
                let r = rc(a);
                if r.is_negative() && best.as_ref().map_or(true, |(_, b)| r < *b) {
                    best = Some((a, r));
                }
            }
            best.map(|(a, _)| a)
        };
        let Some(e) = entering else {
            let artificial_flow = flow[m_real..].iter().sum();
            flow.truncate(m_real);
            return Ok(FlowSolution {
                flow,
                potential: tree.pi[..n].to_vec(),
                artificial_flow,
                pivots,
            });
        };
        // Cycle: e = (u -> v), then the tree path from v back to u.
        let (u, v) = (tail[e], head[e]);
        let mut forward = vec![e];
        let mut backward = Vec::new();
        let (mut x, mut y) = (u, v);
        while x != y {
            if tree.depth[x] >= tree.depth[y] {
                // x lies on u's side; the path is walked parent -> x.
                let a = tree.parent_arc[x].unwrap();
                if tail[a] == tree.parent[x] {
                    forward.push(a);
                } else {
                    backward.push(a);
                }
                x = tree.parent[x];
            } else {
                // y lies on v's side; the path is walked y -> parent.
                let a = tree.parent_arc[y].unwrap();
                if tail[a] == y {
                    forward.push(a);
                } else {
                    backward.push(a);
                }
                y = tree.parent[y];
            }
        }
        let delta = backward
            .iter()
            .map(|&a| &flow[a])
            .min()
            .cloned()
            .ok_or_else(|| Error::internal("unbounded transport network"))?;
        let leaving = *backward
            .iter()
            .filter(|&&a| flow[a] == delta)
            .min()
            .unwrap();
        for &a in &forward {
            flow[a] += &delta;
        }
        for &a in &backward {
            flow[a] -= &delta;
        }
        in_tree[e] = true;
        in_tree[leaving] = false;
        pivots += 1;
        if delta.is_zero() {
            streak += 1;
            if streak > DEGENERATE_STREAK {
                use_bland = true;
            }
        } else {
            streak = 0;
        }
    }
}

fn build_tree(
    nodes: usize,
    root: usize,
    tail: &[usize],
    head: &[usize],
    cost: &[BigInt],
    in_tree: &[bool],
) -> Tree {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for a in (0..in_tree.len()).filter(|&a| in_tree[a]) {
        adj[tail[a]].push(a);
        adj[head[a]].push(a);
    }
    let mut parent_arc = vec![None; nodes];
    let mut parent = vec![root; nodes];
    let mut depth = vec![0; nodes];
    let mut pi = vec![BigInt::zero(); nodes];
    let mut seen = vec![false; nodes];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(x) = q.pop_front() {
        for &a in &adj[x] {
            let y = if tail[a] == x { head[a] } else { tail[a] };
            if seen[y] {
                continue;
            }
            seen[y] = true;
            parent_arc[y] = Some(a);
            parent[y] = x;
            depth[y] = depth[x] + 1;
            // Tree arcs have zero reduced cost: pi(head) = pi(tail) + c.
            pi[y] = if tail[a] == x {
                &pi[x] + &cost[a]
            } else {
                &pi[x] - &cost[a]
            };
            q.push_back(y);
        }
    }
    Tree {
        parent_arc,
        parent,
        depth,
        pi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn small_transportation_problem() {
        // Two sources of 1, two sinks of 1; the diagonal is free.
        let net = Network {
            nodes: 4,
            supply: vec![int(1), int(1), int(-1), int(-1)],
            arcs: vec![
                (0, 2, int(0)),
                (0, 3, int(1)),
                (1, 2, int(1)),
                (1, 3, int(0)),
            ],
        };
        for rule in [PivotRule::Bland, PivotRule::Best] {
            let sol = solve(&net, rule).unwrap();
            assert_eq!(sol.flow, vec![int(1), int(0), int(0), int(1)]);
            assert!(sol.artificial_flow.is_zero());
            for (a, (u, v, c)) in net.arcs.iter().enumerate() {
                let rc = c + &sol.potential[*u] - &sol.potential[*v];
                assert!(!rc.is_negative());
                if sol.flow[a].is_positive() {
                    assert!(rc.is_zero());
                }
            }
        }
    }

    #[test]
    fn infeasible_network_keeps_artificial_flow() {
        let net = Network {
            nodes: 3,
            supply: vec![int(2), int(-1), int(-1)],
            arcs: vec![(0, 1, int(5))],
        };
        let sol = solve(&net, PivotRule::Bland).unwrap();
        assert_eq!(sol.artificial_flow, int(2));
    }
}
