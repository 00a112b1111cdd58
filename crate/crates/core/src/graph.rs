//! Blossom hierarchy, lazy endpoints and slack arithmetic.

use crate::solver::*;

impl Solver {
    #[inline]
    pub(crate) fn is_super(&self, v: u32) -> bool {
        self.nodes[v as usize].flags & F_SUPER != 0
    }

    #[inline]
    pub(crate) fn is_expanded(&self, v: u32) -> bool {
        self.nodes[v as usize].flags & F_EXPANDED != 0
    }

    #[inline]
    pub(crate) fn is_top(&self, v: u32) -> bool {
        let node = &self.nodes[v as usize];
        node.parent == NONE && node.flags & F_EXPANDED == 0
    }

    #[inline]
    fn climb(&self, x: u32) -> u32 {
        let node = &self.nodes[x as usize];
        let a = node.ancestor;
        if a != NONE && !self.is_expanded(a) {
            a
        } else {
            node.parent
        }
    }

    /// Outermost supernode containing `v`, with path compression.
    pub(crate) fn top(&mut self, v: u32) -> u32 {
        if self.nodes[v as usize].parent == NONE {
            return v;
        }
        let mut x = v;
        while self.nodes[x as usize].parent != NONE {
            x = self.climb(x);
        }
        let mut y = v;
        while y != x {
            let next = self.climb(y);
            self.nodes[y as usize].ancestor = x;
            y = next;
        }
        x
    }

    /// Uncached walk, used by audits.
    pub(crate) fn top_uncached(&self, mut v: u32) -> u32 {
        while self.nodes[v as usize].parent != NONE {
            v = self.nodes[v as usize].parent;
        }
        v
    }

    /// Current top endpoints of `e`; refreshes the cached heads.
    pub(crate) fn resolve(&mut self, e: u32) -> (u32, u32) {
        let mut out = [0u32; 2];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut h = self.edges[e as usize].head[i];
            if self.is_expanded(h) {
                h = self.edges[e as usize].ends[i];
            }
            let t = self.top(h);
            self.edges[e as usize].head[i] = t;
            *slot = t;
        }
        (out[0], out[1])
    }

    /// Top endpoint of `e` opposite to the top node `v`.
    pub(crate) fn other(&mut self, e: u32, v: u32) -> u32 {
        let (a, b) = self.resolve(e);
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v, "edge {e} is not incident to {v}");
            a
        }
    }

    #[inline]
    pub(crate) fn sign(label: u8) -> i64 {
        match label {
            FREE => 0,
            MINUS => -1,
            _ => 1,
        }
    }

    /// True dual of a top node, or the frozen dual of an inner node.
    pub(crate) fn true_dual(&self, v: u32) -> i64 {
        let node = &self.nodes[v as usize];
        if node.tree == NONE {
            node.y
        } else {
            node.y + Self::sign(node.label) * self.trees[node.tree as usize].y_t
        }
    }

    /// Changes label and tree, rebasing the lazy dual.
    pub(crate) fn set_label(&mut self, v: u32, label: u8, tree: u32) {
        let y = self.true_dual(v);
        let offset = if tree == NONE { 0 } else { Self::sign(label) * self.trees[tree as usize].y_t };
        let node = &mut self.nodes[v as usize];
        node.label = label;
        node.tree = tree;
        node.y = y - offset;
        self.mark_dirty(v);
    }

    pub(crate) fn mark_dirty(&mut self, v: u32) {
        let node = &mut self.nodes[v as usize];
        if node.flags & F_DIRTY == 0 {
            node.flags |= F_DIRTY;
            self.dirty.push(v);
        }
    }

    pub(crate) fn push_scan(&mut self, v: u32) {
        let node = &mut self.nodes[v as usize];
        if node.flags & F_QUEUED == 0 {
            node.flags |= F_QUEUED;
            self.scan_queue.push_back(v);
        }
    }

    #[inline]
    pub(crate) fn degree(&self, v: u32) -> usize {
        if self.is_super(v) {
            self.blossoms[v as usize - self.n].neighbors.len()
        } else {
            (self.adj_start[v as usize + 1] - self.adj_start[v as usize]) as usize
        }
    }

    /// `i`-th non-loop incident edge of the top node `v`.
    #[inline]
    pub(crate) fn neighbor(&self, v: u32, i: usize) -> u32 {
        if self.is_super(v) {
            self.blossoms[v as usize - self.n].neighbors[i]
        } else {
            self.adj[self.adj_start[v as usize] as usize + i]
        }
    }

    /// Incident non-loop edges of the top node `v` with their opposite tops.
    pub fn neighbors(&mut self, v: u32) -> Vec<(u32, u32)> {
        (0..self.degree(v))
            .map(|i| {
                let e = self.neighbor(v, i);
                (e, self.other(e, v))
            })
            .collect()
    }

    /// Slack of a non-loop edge under the current duals.
    pub(crate) fn slack(&mut self, e: u32) -> i64 {
        let (a, b) = self.resolve(e);
        debug_assert_ne!(a, b, "slack of a loop");
        self.edges[e as usize].slack - self.true_dual(a) - self.true_dual(b)
    }

    /// Public form of [`Self::slack`] in the quadrupled domain; `None` for loops.
    pub fn true_slack(&mut self, e: u32) -> Option<i64> {
        let (a, b) = self.resolve(e);
        (a != b).then(|| self.slack(e))
    }

    pub fn top_node(&mut self, v: u32) -> u32 {
        self.top(v)
    }

    /// Receptacle of `v` via the union-find links.
    pub(crate) fn find(&mut self, v: u32) -> u32 {
        let mut r = v;
        while self.nodes[r as usize].rec != r {
            r = self.nodes[r as usize].rec;
        }
        let mut x = v;
        while x != r {
            let next = self.nodes[x as usize].rec;
            self.nodes[x as usize].rec = r;
            x = next;
        }
        r
    }

    /// Expands the hierarchy below `s` by one level. Children become top and
    /// free with their frozen duals, and carry the current generation mark.
    pub(crate) fn unparent_children(&mut self, s: u32) -> Vec<u32> {
        let gen = self.next_generation();
        self.nodes[s as usize].flags |= F_EXPANDED;
        let children = std::mem::take(&mut self.blossoms[s as usize - self.n].children);
        for &c in &children {
            let node = &mut self.nodes[c as usize];
            node.parent = NONE;
            node.ancestor = NONE;
            node.mark = gen;
        }
        self.blossoms[s as usize - self.n].children = children.clone();
        children
    }

    /// Endpoint of `e` among the children just marked by
    /// [`Self::unparent_children`].
    pub(crate) fn inner_endpoint(&mut self, e: u32, s: u32) -> u32 {
        let (a, b) = self.resolve(e);
        let gen = self.generation;
        if self.nodes[a as usize].mark == gen && a != s {
            a
        } else {
            debug_assert_eq!(self.nodes[b as usize].mark, gen);
            b
        }
    }

    /// Number of supernodes ever created.
    pub fn supernode_count(&self) -> usize {
        self.blossoms.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Duals along the hierarchy chain of `v`, innermost first, with the
    /// true dual of every chain node.
    pub(crate) fn chain_duals(&self, mut v: u32, out: &mut Vec<(u32, i64)>) {
        out.clear();
        loop {
            out.push((v, self.true_dual(v)));
            let p = self.nodes[v as usize].parent;
            if p == NONE {
                break;
            }
            v = p;
        }
    }

    /// Slack of `e` at the level of the smallest blossom containing both
    /// endpoints (the plain slack for non-loop edges), computed from scratch.
    pub(crate) fn level_slack(&self, e: u32) -> i64 {
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        let [a, b] = self.edges[e as usize].ends;
        self.chain_duals(a, &mut ca);
        self.chain_duals(b, &mut cb);
        // Drop the common suffix.
        while let (Some(x), Some(y)) = (ca.last(), cb.last()) {
            if x.0 == y.0 {
                ca.pop();
                cb.pop();
            } else {
                break;
            }
        }
        let sum: i64 = ca.iter().chain(cb.iter()).map(|&(_, y)| y).sum();
        self.edges[e as usize].w - sum
    }
}
