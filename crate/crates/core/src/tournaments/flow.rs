//! Min-cost flow by successive shortest paths.
//!
//! Shortest paths use queue-based Bellman-Ford, so edge costs may be
//! negative as long as the initial graph has no negative cycle.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i64,
    cost: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct MinCostFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl MinCostFlow {
    pub(crate) fn new(nodes: usize) -> Self {
        MinCostFlow {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Returns an id for [`MinCostFlow::flow`].
    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, cost });
        self.adj[from].push(id);
        self.edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently on edge `id`.
    pub(crate) fn flow(&self, id: usize) -> i64 {
        self.edges[id + 1].cap
    }

    /// Pushes up to `limit` units from `s` to `t` at minimum cost.
    /// Returns `(flow, cost)`.
    pub(crate) fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, i64) {
        let n = self.adj.len();
        let (mut flow, mut cost) = (0, 0);
        while flow < limit {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            let mut queue = VecDeque::from([s]);
            dist[s] = 0;
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &e in &self.adj[u] {
                    let Edge { to, cap, cost: c } = self.edges[e];
                    if cap > 0 && dist[u] + c < dist[to] {
                        dist[to] = dist[u] + c;
                        via[to] = e;
                        if !queued[to] {
                            queued[to] = true;
                            queue.push_back(to);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.edges[e].cap -= push;
                self.edges[e ^ 1].cap += push;
                v = self.edges[e ^ 1].to;
            }
            flow += push;
            cost += push * dist[t];
        }
        (flow, cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_cheap_paths() {
        // s=0, t=3; two parallel routes of cost 1 and 5, capacity 1 each.
        let mut g = MinCostFlow::new(4);
        let a = g.add_edge(0, 1, 1, 1);
        g.add_edge(1, 3, 1, 0);
        let b = g.add_edge(0, 2, 1, 5);
        g.add_edge(2, 3, 1, 0);
        assert_eq!(g.run(0, 3, 1), (1, 1));
        assert_eq!((g.flow(a), g.flow(b)), (1, 0));
        assert_eq!(g.run(0, 3, 10), (1, 5));
    }

    #[test]
    fn reroutes_through_residual_edges() {
        // Greedy 0-1-2-3 blocks the second unit unless flow is undone on 1-2.
        let mut g = MinCostFlow::new(4);
        g.add_edge(0, 1, 1, 0);
        g.add_edge(0, 2, 1, 0);
        g.add_edge(1, 2, 1, -1);
        g.add_edge(1, 3, 1, 0);
        g.add_edge(2, 3, 1, 0);
        assert_eq!(g.run(0, 3, 2), (2, 0));
    }
}
