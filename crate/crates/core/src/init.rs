//! Dual and matching initialization.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::solver::*;

const OUTER: u8 = 1;
const INNER: u8 = 2;

impl Solver {
    pub(crate) fn initialize(&mut self) {
        self.init_duals();
        self.greedy_raise_and_match();
        match self.config.init {
            InitStrategy::Greedy => {}
            InitStrategy::Fractional => self.fractional_init(usize::MAX),
            InitStrategy::FractionalThresholded => self.fractional_init(self.config.init_threshold),
        }
    }

    fn edge_other(&self, e: u32, v: u32) -> u32 {
        let [a, b] = self.edges[e as usize].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    fn elementary_edges(&self, v: u32) -> &[u32] {
        &self.adj[self.adj_start[v as usize] as usize..self.adj_start[v as usize + 1] as usize]
    }

    /// `y_v` = half the cheapest incident weight.
    pub(crate) fn init_duals(&mut self) {
        for v in 0..self.n as u32 {
            let min = self.elementary_edges(v).iter().map(|&e| self.edges[e as usize].w).min();
            if let Some(w) = min {
                debug_assert_eq!(w % 2, 0);
                self.nodes[v as usize].y = w / 2;
            }
        }
    }

    fn init_slack(&self, e: u32) -> i64 {
        let edge = &self.edges[e as usize];
        edge.w - self.nodes[edge.ends[0] as usize].y - self.nodes[edge.ends[1] as usize].y
    }

    pub(crate) fn greedy_raise_and_match(&mut self) {
        for v in 0..self.n as u32 {
            let min = self.elementary_edges(v).iter().map(|&e| self.init_slack(e)).min();
            if let Some(s) = min {
                self.nodes[v as usize].y += s;
            }
        }
        for v in 0..self.n as u32 {
            if self.nodes[v as usize].matched != NONE {
                continue;
            }
            for i in 0..self.elementary_edges(v).len() {
                let e = self.elementary_edges(v)[i];
                let o = self.edge_other(e, v);
                if self.nodes[o as usize].matched == NONE && self.init_slack(e) == 0 {
                    self.nodes[v as usize].matched = e;
                    self.nodes[o as usize].matched = e;
                    break;
                }
            }
        }
    }

    /// Single alternating tree fractional matching. Trees larger than
    /// `threshold` nodes are abandoned with their duals kept; remaining
    /// half-integral odd cycles are rounded at the end.
    pub(crate) fn fractional_init(&mut self, threshold: usize) {
        let mut frac = Fractional::new(self.n);
        for r in 0..self.n as u32 {
            if self.nodes[r as usize].matched == NONE && frac.cycle_of[r as usize] == NONE {
                frac.grow_tree(self, r, threshold);
            }
        }
        for c in 0..frac.cycles.len() {
            if frac.cycles[c].is_empty() {
                continue;
            }
            let k = (0..frac.cycles[c].len()).min_by_key(|&i| frac.cycles[c][i]).unwrap();
            frac.dissolve(self, c, k);
            let low = frac.cycles[c][k];
            self.nodes[low as usize].matched = NONE;
            frac.cycles[c].clear();
        }
    }
}

struct Fractional {
    label: Vec<u8>,
    stamp: Vec<u32>,
    gen: u32,
    join: Vec<i64>,
    /// Inner nodes: edge towards the outer parent.
    tree_edge: Vec<u32>,
    cycle_of: Vec<u32>,
    cycles: Vec<Vec<u32>>,
    cycle_edges: Vec<Vec<u32>>,
    delta: i64,
    members: Vec<u32>,
    events: BinaryHeap<Reverse<(i64, u32, u32)>>,
}

enum Step {
    Continue,
    Done,
}

impl Fractional {
    fn new(n: usize) -> Self {
        Fractional {
            label: vec![0; n],
            stamp: vec![0; n],
            gen: 0,
            join: vec![0; n],
            tree_edge: vec![NONE; n],
            cycle_of: vec![NONE; n],
            cycles: Vec::new(),
            cycle_edges: Vec::new(),
            delta: 0,
            members: Vec::new(),
            events: BinaryHeap::new(),
        }
    }

    fn state(&self, v: u32) -> u8 {
        if self.stamp[v as usize] == self.gen {
            self.label[v as usize]
        } else {
            0
        }
    }

    fn dual(&self, s: &Solver, v: u32, at: i64) -> i64 {
        let y = s.nodes[v as usize].y;
        match self.state(v) {
            OUTER => y + (at - self.join[v as usize]),
            INNER => y - (at - self.join[v as usize]),
            _ => y,
        }
    }

    fn slack(&self, s: &Solver, e: u32, at: i64) -> i64 {
        let [a, b] = s.edges[e as usize].ends;
        s.edges[e as usize].w - self.dual(s, a, at) - self.dual(s, b, at)
    }

    fn enter(&mut self, v: u32, label: u8) {
        self.stamp[v as usize] = self.gen;
        self.label[v as usize] = label;
        self.join[v as usize] = self.delta;
        self.members.push(v);
    }

    fn add_outer(&mut self, s: &mut Solver, v: u32) {
        self.enter(v, OUTER);
        for i in 0..s.elementary_edges(v).len() {
            let e = s.elementary_edges(v)[i];
            let o = s.edge_other(e, v);
            let slack = self.slack(s, e, self.delta);
            debug_assert!(slack >= 0);
            let time = match self.state(o) {
                INNER => continue,
                OUTER => {
                    if slack % 2 != 0 {
                        s.stats.inexact_halvings += 1;
                        debug_assert!(false, "odd outer-outer slack {slack}");
                    }
                    self.delta + slack.div_euclid(2)
                }
                _ => self.delta + slack,
            };
            self.events.push(Reverse((time, e, v)));
        }
    }

    fn grow_tree(&mut self, s: &mut Solver, root: u32, threshold: usize) {
        self.gen += 1;
        self.delta = 0;
        self.members.clear();
        self.events.clear();
        self.add_outer(s, root);
        loop {
            let Some(Reverse((time, e, from))) = self.events.pop() else { break };
            let at = time.max(self.delta);
            let o = s.edge_other(e, from);
            let os = self.state(o);
            if os == INNER || self.slack(s, e, at) != 0 {
                continue;
            }
            self.delta = at;
            match self.event(s, root, from, o, e, os) {
                Step::Done => break,
                Step::Continue => {
                    if self.members.len() > threshold {
                        break;
                    }
                }
            }
        }
        // Materialize duals and drop the tree.
        for i in 0..self.members.len() {
            let v = self.members[i];
            s.nodes[v as usize].y = self.dual(s, v, self.delta);
        }
        self.gen += 1;
    }

    fn event(&mut self, s: &mut Solver, root: u32, from: u32, o: u32, e: u32, os: u8) -> Step {
        if os == OUTER {
            self.form_cycle(s, root, from, o, e);
            return Step::Done;
        }
        let c = self.cycle_of[o as usize];
        if c != NONE {
            self.flip_to_root(s, root, from, e);
            let k = self.cycles[c as usize].iter().position(|&z| z == o).unwrap();
            self.dissolve(s, c as usize, k);
            s.nodes[o as usize].matched = e;
            self.cycles[c as usize].clear();
            return Step::Done;
        }
        let m = s.nodes[o as usize].matched;
        if m == NONE {
            self.flip_to_root(s, root, from, e);
            s.nodes[o as usize].matched = e;
            return Step::Done;
        }
        self.enter(o, INNER);
        self.tree_edge[o as usize] = e;
        let mate = s.edge_other(m, o);
        self.add_outer(s, mate);
        Step::Continue
    }

    /// Flips the tree path from `from` to the root and matches `from` by `e`.
    fn flip_to_root(&mut self, s: &mut Solver, root: u32, from: u32, e: u32) {
        let mut o = from;
        let mut incoming = e;
        loop {
            let old = s.nodes[o as usize].matched;
            s.nodes[o as usize].matched = incoming;
            if o == root {
                break;
            }
            let i = s.edge_other(old, o);
            let up = self.tree_edge[i as usize];
            s.nodes[i as usize].matched = up;
            o = s.edge_other(up, i);
            incoming = up;
        }
    }

    /// Outer ancestor of the outer node `o`, or `None` at the root.
    fn up(&self, s: &Solver, o: u32) -> Option<(u32, u32)> {
        let m = s.nodes[o as usize].matched;
        if m == NONE {
            return None;
        }
        let i = s.edge_other(m, o);
        Some((i, s.edge_other(self.tree_edge[i as usize], i)))
    }

    fn form_cycle(&mut self, s: &mut Solver, root: u32, u: u32, v: u32, e: u32) {
        // Lowest common outer ancestor.
        let mut seen = std::collections::HashSet::new();
        let (mut a, mut b) = (Some(u), Some(v));
        let lca = loop {
            if let Some(x) = a {
                if !seen.insert(x) {
                    break x;
                }
                a = self.up(s, x).map(|p| p.1);
            }
            if let Some(x) = b {
                if !seen.insert(x) {
                    break x;
                }
                b = self.up(s, x).map(|p| p.1);
            }
        };
        let walk = |this: &Self, s: &Solver, start: u32| {
            let mut nodes = vec![start];
            let mut edges = Vec::new();
            let mut x = start;
            while x != lca {
                let m = s.nodes[x as usize].matched;
                let (i, p) = this.up(s, x).unwrap();
                nodes.push(i);
                edges.push(m);
                nodes.push(p);
                edges.push(this.tree_edge[i as usize]);
                x = p;
            }
            (nodes, edges)
        };
        let (nu, eu) = walk(self, s, u);
        let (nv, ev) = walk(self, s, v);
        // Cycle lca .. u, v .. (child of lca), closing back to lca.
        let mut cyc: Vec<u32> = nu.iter().rev().copied().collect();
        let mut cedges: Vec<u32> = eu.iter().rev().copied().collect();
        cedges.push(e);
        cyc.extend(nv[..nv.len() - 1].iter().copied());
        cedges.extend(ev.iter().copied());
        // Rematch lca .. root so that lca becomes exposed.
        let mut o = lca;
        let mut m = s.nodes[o as usize].matched;
        while o != root {
            let i = s.edge_other(m, o);
            let up = self.tree_edge[i as usize];
            let p = s.edge_other(up, i);
            let pm = s.nodes[p as usize].matched;
            s.nodes[i as usize].matched = up;
            s.nodes[p as usize].matched = up;
            o = p;
            m = pm;
        }
        let id = self.cycles.len() as u32;
        for &z in &cyc {
            s.nodes[z as usize].matched = NONE;
            self.cycle_of[z as usize] = id;
        }
        debug_assert_eq!(cyc.len(), cedges.len());
        debug_assert_eq!(cyc.len() % 2, 1);
        self.cycles.push(cyc);
        self.cycle_edges.push(cedges);
    }

    /// Matches every node of cycle `c` except position `k` along the cycle.
    fn dissolve(&mut self, s: &mut Solver, c: usize, k: usize) {
        let len = self.cycles[c].len();
        for step in (1..len).step_by(2) {
            let i = (k + step) % len;
            let j = (i + 1) % len;
            let e = self.cycle_edges[c][i];
            s.nodes[self.cycles[c][i] as usize].matched = e;
            s.nodes[self.cycles[c][j] as usize].matched = e;
        }
        for &z in &self.cycles[c] {
            self.cycle_of[z as usize] = NONE;
        }
    }
}
