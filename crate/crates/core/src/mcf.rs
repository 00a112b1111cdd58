//! Successive shortest paths min-cost flow with Dijkstra potentials.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
pub struct MinCostFlow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    potential: Vec<i64>,
}

impl MinCostFlow {
    pub fn new(n: usize) -> Self {
        MinCostFlow { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), cost: Vec::new(), potential: vec![0; n] }
    }

    /// Adds an arc with nonnegative cost.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        assert!(cost >= 0, "negative arc cost");
        for (a, b, c, w) in [(from, to, cap, cost), (to, from, 0, -cost)] {
            self.adj[a].push(self.to.len());
            self.to.push(b);
            self.cap.push(c);
            self.cost.push(w);
        }
    }

    /// Sends up to `limit` units from `s` to `t`; returns (flow, cost).
    pub fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, i64) {
        let n = self.adj.len();
        let mut flow = 0;
        let mut total = 0;
        let mut dist = vec![i64::MAX; n];
        let mut via = vec![usize::MAX; n];
        while flow < limit {
            dist.fill(i64::MAX);
            via.fill(usize::MAX);
            dist[s] = 0;
            let mut queue = BinaryHeap::new();
            queue.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = queue.pop() {
                if d > dist[u] {
                    continue;
                }
                for &a in &self.adj[u] {
                    if self.cap[a] <= 0 {
                        continue;
                    }
                    let v = self.to[a];
                    let rc = self.cost[a] + self.potential[u] - self.potential[v];
                    debug_assert!(rc >= 0);
                    let nd = d + rc;
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = a;
                        queue.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let far = dist.iter().copied().filter(|&d| d != i64::MAX).max().unwrap_or(0);
            for v in 0..n {
                self.potential[v] += if dist[v] == i64::MAX { far } else { dist[v] };
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                total += push * self.cost[a];
                v = self.to[a ^ 1];
            }
            flow += push;
        }
        (flow, total)
    }

    /// Node potentials `x` with `x[to] - x[from] <= cost` on every residual
    /// arc and equality on arcs carrying flow.
    pub fn potentials(&self) -> &[i64] {
        &self.potential
    }
}
