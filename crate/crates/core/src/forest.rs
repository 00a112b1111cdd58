//! Primal operations on the cherry forest.

use std::time::Instant;

use crate::solver::*;

impl Solver {
    #[inline]
    fn plus_like(&self, v: u32) -> bool {
        self.nodes[v as usize].label & PLUS != 0
    }

    #[inline]
    fn tree_alive(&self, t: u32) -> bool {
        t != NONE && self.trees[t as usize].alive
    }

    /// Successor of a plus-state node: across its matched edge.
    pub(crate) fn plus_step(&mut self, v: u32) -> Option<u32> {
        let e = self.nodes[v as usize].matched;
        (e != NONE).then(|| self.other(e, v))
    }

    /// Successor of a minus-state node: across its minus-parent arc.
    pub(crate) fn minus_step(&mut self, v: u32) -> u32 {
        let e = self.nodes[v as usize].mp;
        debug_assert!(e != NONE, "minus step from {v} without a minus parent");
        self.other(e, v)
    }

    pub(crate) fn primal_phase(&mut self, hook: &mut dyn FnMut(&mut Solver, PhaseEvent)) {
        self.pm_list.clear();
        loop {
            if let Some(s) = self.expand_queue.pop() {
                if self.expandable(s) {
                    let t = Instant::now();
                    self.expand(s);
                    self.stats.expand_time += t.elapsed();
                    hook(self, PhaseEvent::AfterOperation(Operation::Expand));
                }
                continue;
            }
            if let Some(p) = self.scan_queue.pop_front() {
                self.nodes[p as usize].flags &= !F_QUEUED;
                self.scan(p, hook);
                continue;
            }
            break;
        }
        let t = Instant::now();
        self.shrink_all();
        self.stats.shrink_time += t.elapsed();
    }

    fn expandable(&self, s: u32) -> bool {
        let node = &self.nodes[s as usize];
        self.is_super(s)
            && self.is_top(s)
            && node.label == MINUS
            && self.tree_alive(node.tree)
            && self.true_dual(s) == 0
    }

    /// Applies every primal operation available at the plus node `p`.
    fn scan(&mut self, p: u32, hook: &mut dyn FnMut(&mut Solver, PhaseEvent)) {
        if !self.is_top(p) || !self.plus_like(p) || !self.tree_alive(self.nodes[p as usize].tree) {
            return;
        }
        let mut tight = std::mem::take(&mut self.scratch);
        tight.clear();
        for i in 0..self.degree(p) {
            let e = self.neighbor(p, i);
            if !self.edges[e as usize].zero_hint {
                continue;
            }
            if self.slack(e) != 0 {
                self.edges[e as usize].zero_hint = false;
                continue;
            }
            tight.push(e);
        }
        let tp = self.nodes[p as usize].tree;
        for &e in &tight {
            let o = self.other(e, p);
            let to = self.nodes[o as usize].tree;
            if self.plus_like(o) && to != tp && self.tree_alive(to) {
                self.augment(p, o, e);
                self.scratch = tight;
                hook(self, PhaseEvent::AfterOperation(Operation::Augment));
                return;
            }
        }
        for &e in &tight {
            let o = self.other(e, p);
            let label = self.nodes[o as usize].label;
            if label == FREE {
                self.grow_out(p, e, o);
                hook(self, PhaseEvent::AfterOperation(Operation::GrowOut));
            } else if label & PLUS != 0 && self.nodes[o as usize].tree == tp && self.find(o) != self.find(p) {
                self.grow_in(p, o, e);
                hook(self, PhaseEvent::AfterOperation(Operation::GrowIn));
            }
        }
        self.scratch = tight;
    }

    pub(crate) fn grow_out(&mut self, v: u32, e: u32, x: u32) {
        let t = self.nodes[v as usize].tree;
        let m = self.nodes[x as usize].matched;
        debug_assert!(m != NONE, "free node {x} without a mate");
        let y = self.other(m, x);
        self.set_label(x, MINUS, t);
        self.nodes[x as usize].mp = e;
        self.nodes[x as usize].rec = x;
        self.set_label(y, PLUS, t);
        self.nodes[y as usize].mp = NONE;
        self.nodes[y as usize].rec = y;
        self.trees[t as usize].nodes.push(x);
        self.trees[t as usize].nodes.push(y);
        self.push_scan(y);
        if self.is_super(x) && self.true_dual(x) == 0 {
            self.expand_queue.push(x);
        }
        self.stats.grow_outs += 1;
    }

    /// Plus-state nodes along P+ starting at `u`, alternating with `v`,
    /// until a node already visited by the other walk is reached.
    fn first_common(&mut self, u: u32, v: u32) -> u32 {
        let gen = self.next_generation();
        let mut cur = [Some(u), Some(v)];
        loop {
            for side in 0..2 {
                let Some(x) = cur[side] else { continue };
                let node = &mut self.nodes[x as usize];
                if node.mark == gen && node.aux != side as u32 {
                    return x;
                }
                node.mark = gen;
                node.aux = side as u32;
                cur[side] = self.plus_step(x).map(|m| self.minus_step(m));
            }
            debug_assert!(cur[0].is_some() || cur[1].is_some(), "plus paths never met");
        }
    }

    pub(crate) fn grow_in(&mut self, u: u32, v: u32, e: u32) {
        let t = self.nodes[u as usize].tree;
        let a = self.first_common(u, v);
        let r = self.find(a);
        let mut paths: Vec<Vec<u32>> = Vec::with_capacity(2);
        for w in [u, v] {
            if self.find(w) == r {
                continue;
            }
            let mut path = vec![w];
            let mut cur = w;
            loop {
                let m = self.plus_step(cur).expect("plus path left the tree");
                path.push(m);
                let next = self.minus_step(m);
                if self.find(next) == r {
                    break;
                }
                path.push(next);
                cur = next;
            }
            paths.push(path);
        }
        debug_assert!(!paths.is_empty());
        // New minus parents of the plus-state nodes point back along the path;
        // read every old arc before writing any.
        let new_mp: Vec<Vec<u32>> = paths
            .iter()
            .map(|path| {
                (0..path.len())
                    .step_by(2)
                    .map(|j| if j == 0 { e } else { self.nodes[path[j - 1] as usize].mp })
                    .collect()
            })
            .collect();
        for (path, arcs) in paths.iter().zip(&new_mp) {
            for (k, j) in (0..path.len()).step_by(2).enumerate() {
                self.nodes[path[j] as usize].mp = arcs[k];
            }
        }
        for path in &paths {
            for &z in path {
                let was_minus_only = self.nodes[z as usize].label == MINUS;
                let fz = self.find(z);
                if fz != r {
                    self.nodes[fz as usize].rec = r;
                }
                if self.nodes[z as usize].label != PM {
                    self.set_label(z, PM, t);
                }
                if was_minus_only {
                    self.push_scan(z);
                }
                self.pm_list.push(z);
            }
        }
        self.stats.grow_ins += 1;
    }

    /// Flips the alternating path P+_start and puts `first` on `start`.
    fn flip_plus_path(&mut self, start: u32, first: u32) {
        let mut cur = start;
        let mut incoming = first;
        loop {
            let old = self.nodes[cur as usize].matched;
            self.nodes[cur as usize].matched = incoming;
            if old == NONE {
                break;
            }
            let m = self.other(old, cur);
            let up = self.nodes[m as usize].mp;
            self.nodes[m as usize].matched = up;
            cur = self.other(up, m);
            incoming = up;
        }
    }

    pub(crate) fn augment(&mut self, u: u32, v: u32, e: u32) {
        let (tu, tv) = (self.nodes[u as usize].tree, self.nodes[v as usize].tree);
        debug_assert_ne!(tu, tv);
        self.flip_plus_path(u, e);
        self.flip_plus_path(v, e);
        let mut freed = Vec::new();
        self.free_tree(tu, &mut freed);
        self.free_tree(tv, &mut freed);
        self.wake_plus_neighbors(&freed);
        self.stats.augments += 1;
    }

    fn free_tree(&mut self, t: u32, freed: &mut Vec<u32>) {
        let nodes = std::mem::take(&mut self.trees[t as usize].nodes);
        for z in nodes {
            if self.nodes[z as usize].tree == t && self.is_top(z) {
                self.set_label(z, FREE, NONE);
                let node = &mut self.nodes[z as usize];
                node.mp = NONE;
                node.rec = z;
                freed.push(z);
            }
        }
        let tree = &mut self.trees[t as usize];
        tree.alive = false;
        let (mh, pf, pi) = (tree.minus_heap, tree.plus_free, tree.pp_internal);
        let pairs = std::mem::take(&mut tree.pairs);
        self.node_heaps.retire(mh);
        self.edge_heaps.retire(pf);
        self.edge_heaps.retire(pi);
        for p in pairs {
            let pair = &mut self.pairs[p as usize];
            if !pair.alive {
                continue;
            }
            pair.alive = false;
            let key = (pair.t[0], pair.t[1]);
            let hs = [pair.pp, pair.pm, pair.mp];
            self.pair_index.remove(&key);
            for h in hs {
                self.edge_heaps.retire(h);
            }
        }
        self.live_trees -= 1;
    }

    /// Queues plus nodes that reach one of `freed` over a tight edge.
    fn wake_plus_neighbors(&mut self, freed: &[u32]) {
        for &z in freed {
            if !self.is_top(z) || self.nodes[z as usize].label != FREE {
                continue;
            }
            for i in 0..self.degree(z) {
                let e = self.neighbor(z, i);
                if !self.edges[e as usize].zero_hint {
                    continue;
                }
                let o = self.other(e, z);
                if self.plus_like(o) && self.tree_alive(self.nodes[o as usize].tree) && self.slack(e) == 0 {
                    self.push_scan(o);
                }
            }
        }
    }

    /// Shrinks every cherry blossom created in this phase.
    fn shrink_all(&mut self) {
        let list = std::mem::take(&mut self.pm_list);
        let gen = self.next_generation();
        let mut groups: Vec<(u32, Vec<u32>)> = Vec::new();
        let mut group_of = std::collections::HashMap::new();
        for z in list.iter().copied() {
            if self.nodes[z as usize].mark == gen || !self.is_top(z) || self.nodes[z as usize].label != PM {
                continue;
            }
            self.nodes[z as usize].mark = gen;
            let r = self.find(z);
            let idx = *group_of.entry(r).or_insert_with(|| {
                groups.push((r, Vec::new()));
                groups.len() - 1
            });
            groups[idx].1.push(z);
        }
        for (r, members) in groups {
            self.shrink(r, members);
        }
        self.pm_list = list;
        self.pm_list.clear();
    }

    /// Contracts the blossom with receptacle `r` and ±-members `members`.
    pub(crate) fn shrink(&mut self, r: u32, members: Vec<u32>) -> u32 {
        let t = self.nodes[r as usize].tree;
        debug_assert_eq!(self.nodes[r as usize].label, PLUS);
        let s = self.nodes.len() as u32;
        let mut children = Vec::with_capacity(members.len() + 1);
        children.push(r);
        children.extend(members);
        let gen = self.next_generation();
        let mut depth = 0;
        for &c in &children {
            let y = self.true_dual(c);
            let node = &mut self.nodes[c as usize];
            node.mark = gen;
            node.y = y;
            node.tree = NONE;
            if self.is_super(c) {
                depth = depth.max(self.blossoms[c as usize - self.n].depth);
            }
        }
        let mut neighbors = Vec::new();
        let pp_internal = self.trees[t as usize].pp_internal;
        for &c in &children {
            let yc = self.nodes[c as usize].y;
            let dirty = self.nodes[c as usize].flags & F_DIRTY != 0;
            for i in 0..self.degree(c) {
                let e = self.neighbor(c, i);
                let o = self.other(e, c);
                if self.nodes[o as usize].mark == gen {
                    if self.edge_heaps.heap_of(e) != Some(pp_internal) {
                        self.edge_heaps.remove(e);
                    }
                } else {
                    self.edges[e as usize].slack -= yc;
                    neighbors.push(e);
                    if dirty {
                        self.dirty_edges.push(e);
                    }
                }
            }
        }
        let matched = self.nodes[r as usize].matched;
        self.nodes.push(Node {
            y: 0,
            tree: NONE,
            matched,
            mp: NONE,
            parent: NONE,
            ancestor: NONE,
            rec: s,
            mark: 0,
            aux: 0,
            label: FREE,
            flags: F_SUPER,
        });
        self.node_heaps.ensure_items(self.nodes.len());
        for &c in &children {
            let is_super = self.is_super(c);
            let node = &mut self.nodes[c as usize];
            node.parent = s;
            node.ancestor = NONE;
            node.rec = r;
            node.label = if c == r { PLUS } else { PM };
            if c == r {
                node.matched = NONE;
                node.mp = NONE;
            }
            if is_super {
                self.node_heaps.remove(c);
            }
        }
        self.blossoms.push(Blossom { children, neighbors, depth: depth + 1 });
        // Every child was plus-like in `t`, so boundary keys are unchanged and
        // only edges of children not yet refreshed need reclassifying.
        let yt = self.trees[t as usize].y_t;
        let node = &mut self.nodes[s as usize];
        node.label = PLUS;
        node.tree = t;
        node.y = -yt;
        self.trees[t as usize].nodes.push(s);
        if self.trees[t as usize].root == r {
            self.trees[t as usize].root = s;
        }
        self.stats.shrinks += 1;
        s
    }

    /// Makes `v` the unmatched node of the blossom formed by the children of
    /// `s`, which must currently be top nodes.
    pub(crate) fn rotate_receptacle(&mut self, s: u32, v: u32) {
        debug_assert!(self.is_expanded(s));
        let children = self.blossoms[s as usize - self.n].children.clone();
        let mut root = children
            .iter()
            .copied()
            .find(|&c| self.nodes[c as usize].matched == NONE)
            .expect("blossom without receptacle");
        if root != v {
            // d(q_i) = i along P+_v.
            let gen = self.next_generation();
            let mut path = vec![v];
            let mut cur = v;
            loop {
                let node = &mut self.nodes[cur as usize];
                node.mark = gen;
                node.aux = (path.len() - 1) as u32;
                if cur == root {
                    break;
                }
                let m = self.plus_step(cur).expect("interior plus path ended early");
                path.push(m);
                self.nodes[m as usize].mark = gen;
                self.nodes[m as usize].aux = (path.len() - 1) as u32;
                let next = self.minus_step(m);
                path.push(next);
                cur = next;
            }
            let mut guard = 0usize;
            while root != v {
                guard += 1;
                assert!(guard <= children.len() + 1, "receptacle rotation did not terminate");
                let d_root = self.nodes[root as usize].aux as usize;
                let x = path[d_root - 1];
                // Cycle: x = c0 .. cL = root along P+_x, closed by mp(x).
                let mut cyc = vec![x];
                let mut cyc_edges = Vec::new();
                let mut c = x;
                let mut plus_state = true;
                while c != root {
                    let e = if plus_state { self.nodes[c as usize].matched } else { self.nodes[c as usize].mp };
                    cyc_edges.push(e);
                    c = self.other(e, c);
                    cyc.push(c);
                    plus_state = !plus_state;
                }
                let closing = self.nodes[x as usize].mp;
                cyc_edges.push(closing);
                let dist = |sv: &Solver, z: u32| {
                    let nd = &sv.nodes[z as usize];
                    if nd.mark == gen { nd.aux as usize } else { usize::MAX }
                };
                let k = (0..cyc.len()).min_by_key(|&i| dist(self, cyc[i])).unwrap();
                debug_assert!(k % 2 == 1, "rotation hit an even cycle position");
                let u = cyc[k];
                // Flip root - c0 - .. - ck.
                for j in (1..k).step_by(2) {
                    let e = cyc_edges[j];
                    self.nodes[cyc[j] as usize].matched = e;
                    self.nodes[cyc[j + 1] as usize].matched = e;
                }
                self.nodes[x as usize].matched = closing;
                self.nodes[root as usize].matched = closing;
                self.nodes[u as usize].matched = NONE;
                // Minus parents around the cycle: the unmatched cycle edge.
                let len = cyc.len();
                for i in 0..len {
                    let z = cyc[i];
                    if z == u {
                        self.nodes[z as usize].mp = NONE;
                        continue;
                    }
                    let before = cyc_edges[(i + len - 1) % len];
                    let after = cyc_edges[i];
                    let m = self.nodes[z as usize].matched;
                    self.nodes[z as usize].mp = if m == before { after } else { before };
                }
                root = u;
            }
        }
        for &c in &children {
            let node = &mut self.nodes[c as usize];
            node.rec = v;
            node.label = if c == v { PLUS } else { PM };
        }
        self.nodes[v as usize].mp = NONE;
    }

    /// Expands a purely minus supernode with zero dual.
    pub(crate) fn expand(&mut self, s: u32) {
        let t = self.nodes[s as usize].tree;
        let e_m = self.nodes[s as usize].matched;
        let e_p = self.nodes[s as usize].mp;
        let children = self.unparent_children(s);
        for &c in &children {
            let node = &mut self.nodes[c as usize];
            node.label = FREE;
            node.tree = NONE;
        }
        let boundary = std::mem::take(&mut self.blossoms[s as usize - self.n].neighbors);
        let gen = self.generation;
        for &e in &boundary {
            let (a, b) = self.resolve(e);
            let c = if self.nodes[a as usize].mark == gen { a } else { b };
            debug_assert_eq!(self.nodes[c as usize].mark, gen);
            let yc = self.nodes[c as usize].y;
            self.edges[e as usize].slack += yc;
        }
        let x = self.inner_endpoint(e_m, s);
        let y = self.inner_endpoint(e_p, s);
        self.node_heaps.remove(s);
        self.rotate_receptacle(s, x);
        // P+_y inside the rotated blossom ends at x.
        let mut path = vec![y];
        let mut cur = y;
        while cur != x {
            let m = self.plus_step(cur).expect("interior path ended early");
            path.push(m);
            cur = self.minus_step(m);
            path.push(cur);
        }
        let old_mp: Vec<u32> = path.iter().map(|&z| self.nodes[z as usize].mp).collect();
        self.nodes[x as usize].matched = e_m;
        let gen_path = self.next_generation();
        for (i, &z) in path.iter().enumerate() {
            self.nodes[z as usize].mark = gen_path;
            if i % 2 == 0 {
                self.set_label(z, MINUS, t);
                self.nodes[z as usize].mp = if i == 0 { e_p } else { old_mp[i - 1] };
                if self.is_super(z) && self.true_dual(z) == 0 {
                    self.expand_queue.push(z);
                }
            } else {
                self.set_label(z, PLUS, t);
                self.nodes[z as usize].mp = NONE;
                self.push_scan(z);
            }
            self.nodes[z as usize].rec = z;
            self.trees[t as usize].nodes.push(z);
        }
        let mut freed = Vec::new();
        for &c in &children {
            self.mark_dirty(c);
            if self.nodes[c as usize].mark != gen_path {
                let node = &mut self.nodes[c as usize];
                node.mp = NONE;
                node.rec = c;
                node.label = FREE;
                freed.push(c);
            }
        }
        self.wake_plus_neighbors(&freed);
        self.stats.expands += 1;
    }
}

#[cfg(test)]
mod tests {
    use crate::format::Instance;
    use crate::rng::SplitMix64;
    use crate::solver::*;

    /// Interior structure after rotating to `v`: `v` is the only unmatched
    /// child, all others are ± with receptacle `v`, and both interior
    /// alternating paths of each child reach `v` over tight arcs.
    fn check_rotated(s: &mut Solver, b: u32, v: u32) {
        let children = s.blossoms[b as usize - s.n].children.clone();
        let mut matched = 0;
        for &c in &children {
            let node = s.nodes[c as usize].clone();
            assert_eq!(node.rec, v);
            if c == v {
                assert_eq!(node.matched, NONE);
                assert_eq!(node.label, PLUS);
                continue;
            }
            assert_eq!(node.label, PM);
            let mate = s.other(node.matched, c);
            assert!(children.contains(&mate));
            assert_eq!(s.nodes[mate as usize].matched, node.matched);
            matched += 1;
            for plus_first in [true, false] {
                let mut x = c;
                let mut plus_state = plus_first;
                let mut steps = 0;
                while x != v {
                    let e = if plus_state { s.nodes[x as usize].matched } else { s.nodes[x as usize].mp };
                    assert_ne!(e, NONE);
                    assert_eq!(s.level_slack(e), 0);
                    x = s.other(e, x);
                    assert!(children.contains(&x));
                    plus_state = !plus_state;
                    steps += 1;
                    assert!(steps <= children.len());
                }
                assert_eq!(steps % 2 == 0, plus_first, "path parity from {c}");
            }
        }
        assert_eq!(matched, children.len() - 1);
    }

    /// Rotates every supernode of a snapshot to every child.
    fn rotate_everywhere(snapshot: &Solver) -> usize {
        let mut checked = 0;
        for b in 0..snapshot.blossoms.len() {
            let sn = (snapshot.n + b) as u32;
            if snapshot.is_expanded(sn) || !snapshot.is_top(sn) {
                continue;
            }
            let children = snapshot.blossoms[b].children.clone();
            for &v in &children {
                let mut s = snapshot.clone();
                s.unparent_children(sn);
                s.rotate_receptacle(sn, v);
                check_rotated(&mut s, sn, v);
                checked += 1;
            }
        }
        checked
    }

    fn two_cycles(k: u32) -> Instance {
        // Two zero-weight odd cycles joined by a bridge of weight 5.
        let mut t: Vec<(u32, u32, i64)> = Vec::new();
        for base in [0, k] {
            t.extend((0..k).map(|i| (base + i, base + (i + 1) % k, 0)));
        }
        t.push((k - 1, k, 5));
        Instance::from_triples(2 * k as usize, &t).unwrap()
    }

    fn rotations_during_run(inst: &Instance, config: SolverConfig) -> usize {
        let mut checked = 0;
        let outcome = Solver::new(inst, config).unwrap().solve_with_hook(&mut |s, ev| {
            if ev == PhaseEvent::AfterPrimal {
                checked += rotate_everywhere(s);
            }
        });
        assert!(outcome.weight().is_some());
        checked
    }

    #[test]
    fn rotations_of_odd_cycles() {
        let greedy = SolverConfig { init: InitStrategy::Greedy, ..Default::default() };
        for k in [3, 5, 7, 9] {
            assert!(rotations_during_run(&two_cycles(k), greedy.clone()) >= 2 * k as usize);
        }
    }

    #[test]
    fn rotations_of_random_nested_blossoms() {
        let mut rng = SplitMix64::new(21);
        let mut checked = 0;
        for _ in 0..300 {
            let n = 10 + 2 * rng.below(15) as usize;
            let mut t = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.unit_f64() < 0.3 {
                        t.push((u, v, rng.range_i64(0, 6)));
                    }
                }
            }
            let inst = Instance::from_triples(n, &t).unwrap();
            let config = SolverConfig { init: InitStrategy::Greedy, ..Default::default() };
            let solver = Solver::new(&inst, config).unwrap();
            let _ = solver.solve_with_hook(&mut |s, ev| {
                if ev == PhaseEvent::AfterPrimal {
                    checked += rotate_everywhere(s);
                }
            });
        }
        assert!(checked > 100, "only {checked} rotations exercised");
    }
}
