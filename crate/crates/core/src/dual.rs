//! Per-tree dual increments.
//!
//! A constraint system over `k` trees consists of caps `delta_i <= a_i`,
//! pair caps `delta_i + delta_j <= b` and difference caps
//! `delta_i - delta_j <= c`, all over nonnegative integers.

use crate::heap::HeapId;
use crate::mcf::MinCostFlow;
use crate::solver::*;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaConstraints {
    pub trees: usize,
    pub a: Vec<Option<i64>>,
    /// `(i, j, b)` with `delta_i + delta_j <= b`, `i != j`.
    pub b: Vec<(usize, usize, i64)>,
    /// `(i, j, c)` with `delta_i - delta_j <= c`, `i != j`.
    pub c: Vec<(usize, usize, i64)>,
}

impl DeltaConstraints {
    pub fn new(trees: usize) -> Self {
        DeltaConstraints { trees, a: vec![None; trees], ..Default::default() }
    }

    pub fn cap(&mut self, i: usize, value: i64) {
        self.a[i] = Some(self.a[i].map_or(value, |a| a.min(value)));
    }

    /// Whether `deltas` satisfies every constraint.
    pub fn feasible(&self, deltas: &[i64]) -> bool {
        deltas.len() == self.trees
            && deltas.iter().all(|&d| d >= 0)
            && self.a.iter().zip(deltas).all(|(a, &d)| a.is_none_or(|a| d <= a))
            && self.b.iter().all(|&(i, j, b)| deltas[i] + deltas[j] <= b)
            && self.c.iter().all(|&(i, j, c)| deltas[i] - deltas[j] <= c)
    }
}

fn uf_find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Greedy update over connected components of tight difference caps.
/// Returns `None` when some component is unbounded.
pub fn dual_update_cc(cons: &DeltaConstraints, inexact_halvings: &mut u64) -> Option<Vec<i64>> {
    let k = cons.trees;
    let mut parent: Vec<usize> = (0..k).collect();
    for &(i, j, c) in &cons.c {
        if c == 0 {
            let (ri, rj) = (uf_find(&mut parent, i), uf_find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let comp: Vec<usize> = (0..k).map(|i| uf_find(&mut parent, i)).collect();
    // Constraint lists grouped by component representative.
    let mut b_of: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (idx, &(i, j, _)) in cons.b.iter().enumerate() {
        b_of[comp[i]].push(idx);
        if comp[j] != comp[i] {
            b_of[comp[j]].push(idx);
        }
    }
    let mut c_of: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (idx, &(i, _, _)) in cons.c.iter().enumerate() {
        c_of[comp[i]].push(idx);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        members[comp[i]].push(i);
    }
    let mut delta = vec![0i64; k];
    let mut done = vec![false; k];
    for rep in 0..k {
        if comp[rep] != rep {
            continue;
        }
        let mut cap: Option<i64> = None;
        let mut lower = |v: i64| cap = Some(cap.map_or(v, |c| c.min(v)));
        for &i in &members[rep] {
            if let Some(a) = cons.a[i] {
                lower(a);
            }
        }
        for &idx in &b_of[rep] {
            let (i, j, b) = cons.b[idx];
            let other = if comp[i] == rep { j } else { i };
            if comp[other] == rep {
                if b % 2 != 0 {
                    *inexact_halvings += 1;
                    debug_assert!(false, "odd plus-plus slack {b} inside a component");
                }
                lower(b.div_euclid(2));
            } else {
                lower(b - if done[comp[other]] { delta[other] } else { 0 });
            }
        }
        for &idx in &c_of[rep] {
            let (_, j, c) = cons.c[idx];
            if comp[j] != rep {
                lower(c + if done[comp[j]] { delta[j] } else { 0 });
            }
        }
        let value = cap?;
        for &i in &members[rep] {
            delta[i] = value;
        }
        done[rep] = true;
    }
    Some(delta)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpUpdate {
    /// Rounded-down increments, then raised until no single one can grow.
    pub deltas: Vec<i64>,
    /// Twice the optimal LP objective before rounding.
    pub twice_objective: i64,
}

/// Maximizes the total increment exactly through a min-cost flow dual.
/// Returns `None` when the LP is unbounded.
pub fn dual_update_lp(cons: &DeltaConstraints) -> Option<LpUpdate> {
    let k = cons.trees;
    // Potential x_u(i) = delta_i, x_v(i) = -delta_i, reference node z.
    let z = 2 * k;
    let up = |i: usize| i;
    let vn = |i: usize| k + i;
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..k {
        arcs.push((up(i), z, 0));
        arcs.push((z, vn(i), 0));
        if let Some(a) = cons.a[i] {
            arcs.push((z, up(i), a));
            arcs.push((vn(i), z, a));
        }
    }
    for &(i, j, b) in &cons.b {
        arcs.push((vn(j), up(i), b));
        arcs.push((vn(i), up(j), b));
    }
    for &(i, j, c) in &cons.c {
        arcs.push((up(j), up(i), c));
        arcs.push((vn(i), vn(j), c));
    }
    let source = 2 * k + 1;
    let sink = 2 * k + 2;
    let mut flow = MinCostFlow::new(2 * k + 3);
    let inf = k as i64 + 1;
    for &(s, t, w) in &arcs {
        flow.add_arc(s, t, inf, w);
    }
    for i in 0..k {
        flow.add_arc(source, vn(i), 1, 0);
        flow.add_arc(up(i), sink, 1, 0);
    }
    let (sent, cost) = flow.run(source, sink, k as i64);
    if sent < k as i64 {
        return None;
    }
    let x = flow.potentials();
    let mut deltas: Vec<i64> = (0..k).map(|i| (x[up(i)] - x[vn(i)]).div_euclid(2)).collect();
    raise_to_maximal(cons, &mut deltas);
    Some(LpUpdate { deltas, twice_objective: cost })
}

/// Raises each increment in turn as far as the constraints allow, so that
/// some constraint is tight after rounding a half-integral optimum.
fn raise_to_maximal(cons: &DeltaConstraints, deltas: &mut [i64]) {
    for i in 0..cons.trees {
        let mut room = cons.a[i].map_or(i64::MAX, |a| a - deltas[i]);
        for &(p, q, b) in &cons.b {
            if p == i || q == i {
                room = room.min(b - deltas[p] - deltas[q]);
            }
        }
        for &(p, q, c) in &cons.c {
            if p == i {
                room = room.min(c - deltas[p] + deltas[q]);
            }
        }
        if room > 0 && room < i64::MAX {
            deltas[i] += room;
        }
    }
}

/// Heap a classified edge belongs to, with its key.
type Placement = Option<(HeapId, i64)>;

impl Solver {
    pub(crate) fn pair_id(&mut self, t1: u32, t2: u32) -> u32 {
        debug_assert!(t1 < t2);
        if let Some(&p) = self.pair_index.get(&(t1, t2)) {
            return p;
        }
        let id = self.pairs.len() as u32;
        let pp = self.edge_heaps.new_heap();
        let pm = self.edge_heaps.new_heap();
        let mp = self.edge_heaps.new_heap();
        self.pairs.push(TreePair { t: [t1, t2], alive: true, pp, pm, mp });
        self.pair_index.insert((t1, t2), id);
        self.trees[t1 as usize].pairs.push(id);
        self.trees[t2 as usize].pairs.push(id);
        id
    }

    /// Heap that `e` must live in given the current labels.
    pub(crate) fn classify(&mut self, e: u32) -> Placement {
        let (a, b) = self.resolve(e);
        if a == b {
            return None;
        }
        let (na, nb) = (&self.nodes[a as usize], &self.nodes[b as usize]);
        let (la, lb, ta, tb) = (na.label, nb.label, na.tree, nb.tree);
        let key = self.edges[e as usize].slack - na.y - nb.y;
        let (pa, pb) = (la & PLUS != 0, lb & PLUS != 0);
        let heap = if pa && lb == FREE {
            self.trees[ta as usize].plus_free
        } else if pb && la == FREE {
            self.trees[tb as usize].plus_free
        } else if pa && pb {
            if ta == tb {
                self.trees[ta as usize].pp_internal
            } else {
                let p = self.pair_id(ta.min(tb), ta.max(tb));
                self.pairs[p as usize].pp
            }
        } else if (pa && lb == MINUS && ta != tb) || (pb && la == MINUS && ta != tb) {
            let (tp, tm) = if pa { (ta, tb) } else { (tb, ta) };
            let p = self.pair_id(tp.min(tm), tp.max(tm));
            if tp < tm {
                self.pairs[p as usize].pm
            } else {
                self.pairs[p as usize].mp
            }
        } else {
            return None;
        };
        Some((heap, key))
    }

    fn place_edge(&mut self, e: u32) {
        match self.classify(e) {
            Some((h, key)) => {
                let heaps = &mut self.edge_heaps;
                if heaps.heap_of(e) == Some(h) && heaps.key_of(e) == key {
                    return;
                }
                heaps.remove(e);
                heaps.insert(h, e, key);
            }
            None => self.edge_heaps.remove(e),
        }
    }

    pub(crate) fn node_placement(&self, v: u32) -> Placement {
        let node = &self.nodes[v as usize];
        (self.is_super(v) && self.is_top(v) && node.label == MINUS && node.tree != NONE)
            .then(|| (self.trees[node.tree as usize].minus_heap, node.y))
    }

    /// Reclassifies the incident edges of every node touched since the last
    /// refresh.
    pub(crate) fn refresh(&mut self) {
        let dirty = std::mem::take(&mut self.dirty);
        for &v in &dirty {
            self.nodes[v as usize].flags &= !F_DIRTY;
            if !self.is_top(v) {
                continue;
            }
            match self.node_placement(v) {
                Some((h, key)) => {
                    if self.node_heaps.heap_of(v) != Some(h) || self.node_heaps.key_of(v) != key {
                        self.node_heaps.remove(v);
                        self.node_heaps.insert(h, v, key);
                    }
                }
                None => self.node_heaps.remove(v),
            }
            for i in 0..self.degree(v) {
                let e = self.neighbor(v, i);
                self.place_edge(e);
            }
        }
        self.dirty = dirty;
        self.dirty.clear();
        let edges = std::mem::take(&mut self.dirty_edges);
        for &e in &edges {
            self.place_edge(e);
        }
        self.dirty_edges = edges;
        self.dirty_edges.clear();
    }

    /// Minimum of the internal plus-plus heap of `t`, discarding loops.
    fn pp_internal_min(&mut self, t: u32) -> Option<i64> {
        let h = self.trees[t as usize].pp_internal;
        while let Some((e, key)) = self.edge_heaps.peek_min(h) {
            let (a, b) = self.resolve(e);
            if a != b {
                return Some(key);
            }
            self.edge_heaps.pop_min(h);
        }
        None
    }

    pub(crate) fn live_tree_ids(&self) -> Vec<u32> {
        (0..self.trees.len() as u32).filter(|&t| self.trees[t as usize].alive).collect()
    }

    /// Constraint system of the current forest over `ids`.
    pub(crate) fn collect_constraints(&mut self, ids: &[u32], local: &[usize]) -> DeltaConstraints {
        let mut cons = DeltaConstraints::new(ids.len());
        for (i, &t) in ids.iter().enumerate() {
            let tree = &self.trees[t as usize];
            let yt = tree.y_t;
            let (mh, pf) = (tree.minus_heap, tree.plus_free);
            if let Some((_, key)) = self.node_heaps.peek_min(mh) {
                cons.cap(i, key - yt);
            }
            if let Some((_, key)) = self.edge_heaps.peek_min(pf) {
                cons.cap(i, key - yt);
            }
            if let Some(key) = self.pp_internal_min(t) {
                let slack = key - 2 * yt;
                if slack % 2 != 0 {
                    self.stats.inexact_halvings += 1;
                    debug_assert!(false, "odd internal plus-plus slack {slack}");
                }
                cons.cap(i, slack.div_euclid(2));
            }
            for pi in 0..self.trees[t as usize].pairs.len() {
                let p = self.trees[t as usize].pairs[pi];
                let pair = &self.pairs[p as usize];
                if !pair.alive || pair.t[0] != t {
                    continue;
                }
                let j = local[pair.t[1] as usize];
                let yj = self.trees[pair.t[1] as usize].y_t;
                let (pp, pm, mp) = (pair.pp, pair.pm, pair.mp);
                if let Some((_, key)) = self.edge_heaps.peek_min(pp) {
                    cons.b.push((i, j, key - yt - yj));
                }
                if let Some((_, key)) = self.edge_heaps.peek_min(pm) {
                    cons.c.push((i, j, key - yt + yj));
                }
                if let Some((_, key)) = self.edge_heaps.peek_min(mp) {
                    cons.c.push((j, i, key - yj + yt));
                }
            }
        }
        cons
    }

    /// Computes and applies per-tree increments, then queues every operation
    /// that became available. Returns false when the dual is unbounded.
    pub(crate) fn dual_update(&mut self) -> bool {
        let ids = self.live_tree_ids();
        let mut local = vec![usize::MAX; self.trees.len()];
        for (i, &t) in ids.iter().enumerate() {
            local[t as usize] = i;
        }
        let cons = self.collect_constraints(&ids, &local);
        debug_assert!(cons.a.iter().flatten().all(|&a| a >= 0), "negative cap");
        debug_assert!(cons.b.iter().chain(&cons.c).all(|&(_, _, v)| v >= 0), "negative pair cap");
        let mut deltas = None;
        if self.config.dual_mode == DualMode::Lp && ids.len() <= self.config.lp_tree_threshold {
            match dual_update_lp(&cons) {
                Some(lp) if lp.deltas.iter().any(|&d| d > 0) => {
                    self.stats.lp_updates += 1;
                    deltas = Some(lp.deltas);
                }
                _ => self.stats.lp_fallbacks += 1,
            }
        }
        let deltas = match deltas {
            Some(d) => d,
            None => match dual_update_cc(&cons, &mut self.stats.inexact_halvings) {
                Some(d) => d,
                None => return false,
            },
        };
        debug_assert!(cons.feasible(&deltas));
        for (i, &t) in ids.iter().enumerate() {
            self.trees[t as usize].y_t += deltas[i];
        }
        self.stats.dual_updates += 1;
        let found = self.detect_tight(&ids);
        assert!(found, "dual update made no progress");
        true
    }

    /// Finds heap items that reached zero and schedules the matching
    /// operations. Returns whether anything was found.
    fn detect_tight(&mut self, ids: &[u32]) -> bool {
        let mut edges = Vec::new();
        let mut found = false;
        for &t in ids {
            let tree = &self.trees[t as usize];
            let yt = tree.y_t;
            let (mh, pf, pi) = (tree.minus_heap, tree.plus_free, tree.pp_internal);
            let mut nodes = Vec::new();
            self.node_heaps.collect_at_most(mh, yt, &mut nodes);
            for s in nodes {
                found = true;
                self.expand_queue.push(s);
            }
            self.edge_heaps.collect_at_most(pf, yt, &mut edges);
            self.edge_heaps.collect_at_most(pi, 2 * yt, &mut edges);
            for pix in 0..self.trees[t as usize].pairs.len() {
                let p = self.trees[t as usize].pairs[pix];
                let pair = &self.pairs[p as usize];
                if !pair.alive || pair.t[0] != t {
                    continue;
                }
                let yj = self.trees[pair.t[1] as usize].y_t;
                let (pp, pm, mp) = (pair.pp, pair.pm, pair.mp);
                self.edge_heaps.collect_at_most(pp, yt + yj, &mut edges);
                self.edge_heaps.collect_at_most(pm, yt - yj, &mut edges);
                self.edge_heaps.collect_at_most(mp, yj - yt, &mut edges);
            }
        }
        for e in edges {
            let (a, b) = self.resolve(e);
            if a == b {
                continue;
            }
            debug_assert!(self.slack(e) >= 0, "negative slack after dual update");
            if self.slack(e) != 0 {
                continue;
            }
            self.edges[e as usize].zero_hint = true;
            for x in [a, b] {
                if self.nodes[x as usize].label & PLUS != 0 {
                    found = true;
                    self.push_scan(x);
                }
            }
        }
        found
    }
}
