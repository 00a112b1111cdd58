//! Intrusive pairing heaps over a shared item arena.
//!
//! Every item (an edge or a node of the solver) owns one [`Link`] record; a
//! heap is only a root pointer. Items therefore belong to at most one heap at
//! a time and can be removed without a handle. Heaps are retired when their
//! owning tree dies: removing an item from a retired heap only clears the
//! item's own record and leaves the rest of that heap untouched.

pub type HeapId = u32;
pub type ItemId = u32;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Link {
    key: i64,
    child: u32,
    next: u32,
    /// Parent when this item is a first child, previous sibling otherwise.
    prev: u32,
    heap: u32,
}

impl Link {
    const EMPTY: Link = Link { key: 0, child: NIL, next: NIL, prev: NIL, heap: NIL };
}

#[derive(Debug, Clone, Copy)]
struct Header {
    root: u32,
    live: bool,
    len: u32,
    /// Set when this heap was melded into another one.
    merged_into: u32,
}

#[derive(Debug, Clone, Default)]
pub struct PairingHeaps {
    links: Vec<Link>,
    heaps: Vec<Header>,
    pairs: Vec<u32>,
}

impl PairingHeaps {
    pub fn new(items: usize) -> Self {
        PairingHeaps { links: vec![Link::EMPTY; items], heaps: Vec::new(), pairs: Vec::new() }
    }

    /// Makes room for item ids below `items`.
    pub fn ensure_items(&mut self, items: usize) {
        if self.links.len() < items {
            self.links.resize(items, Link::EMPTY);
        }
    }

    pub fn new_heap(&mut self) -> HeapId {
        self.heaps.push(Header { root: NIL, live: true, len: 0, merged_into: NIL });
        (self.heaps.len() - 1) as HeapId
    }

    /// Marks `h` dead. Its items keep their membership until removed.
    pub fn retire(&mut self, h: HeapId) {
        let h = self.resolve(h);
        self.heaps[h as usize].live = false;
    }

    pub fn is_live(&self, h: HeapId) -> bool {
        self.heaps[self.resolve(h) as usize].live
    }

    pub fn len(&self, h: HeapId) -> usize {
        self.heaps[self.resolve(h) as usize].len as usize
    }

    pub fn is_empty(&self, h: HeapId) -> bool {
        self.len(h) == 0
    }

    fn resolve(&self, mut h: HeapId) -> HeapId {
        while self.heaps[h as usize].merged_into != NIL {
            h = self.heaps[h as usize].merged_into;
        }
        h
    }

    /// Heap currently holding `item`, live or dead.
    pub fn heap_of(&self, item: ItemId) -> Option<HeapId> {
        let h = self.links[item as usize].heap;
        (h != NIL).then(|| self.resolve(h))
    }

    /// Key the item was inserted with.
    pub fn key_of(&self, item: ItemId) -> i64 {
        self.links[item as usize].key
    }

    pub fn insert(&mut self, h: HeapId, item: ItemId, key: i64) {
        if let Some(old) = self.heap_of(item) {
            assert!(!self.heaps[old as usize].live, "item {item} is already in a live heap");
            self.links[item as usize] = Link::EMPTY;
        }
        let h = self.resolve(h);
        debug_assert!(self.heaps[h as usize].live, "insert into a retired heap");
        self.links[item as usize] = Link { key, heap: h, ..Link::EMPTY };
        let root = self.heaps[h as usize].root;
        let root = self.link(root, item);
        let hdr = &mut self.heaps[h as usize];
        hdr.root = root;
        hdr.len += 1;
    }

    /// Removes `item` from whatever heap holds it; a no-op for free items.
    pub fn remove(&mut self, item: ItemId) {
        let Some(h) = self.heap_of(item) else { return };
        if !self.heaps[h as usize].live {
            self.links[item as usize] = Link::EMPTY;
            return;
        }
        let Link { child, next, prev, .. } = self.links[item as usize];
        let sub = self.merge_pairs(child);
        let root = self.heaps[h as usize].root;
        let new_root = if root == item {
            sub
        } else {
            if self.links[prev as usize].child == item {
                self.links[prev as usize].child = next;
            } else {
                self.links[prev as usize].next = next;
            }
            if next != NIL {
                self.links[next as usize].prev = prev;
            }
            self.link(root, sub)
        };
        self.links[item as usize] = Link::EMPTY;
        let hdr = &mut self.heaps[h as usize];
        hdr.root = new_root;
        hdr.len -= 1;
    }

    pub fn peek_min(&self, h: HeapId) -> Option<(ItemId, i64)> {
        let hdr = &self.heaps[self.resolve(h) as usize];
        assert!(hdr.live, "query on a retired heap");
        (hdr.root != NIL).then(|| (hdr.root, self.links[hdr.root as usize].key))
    }

    pub fn pop_min(&mut self, h: HeapId) -> Option<(ItemId, i64)> {
        let (item, key) = self.peek_min(h)?;
        self.remove(item);
        Some((item, key))
    }

    /// Appends every item of `h` whose key is at most `bound` to `out`.
    /// Only subtrees rooted at qualifying items are visited.
    pub fn collect_at_most(&self, h: HeapId, bound: i64, out: &mut Vec<ItemId>) {
        let hdr = &self.heaps[self.resolve(h) as usize];
        assert!(hdr.live, "query on a retired heap");
        let mut stack = Vec::new();
        if hdr.root != NIL {
            stack.push(hdr.root);
        }
        while let Some(first) = stack.pop() {
            let mut x = first;
            while x != NIL {
                let l = &self.links[x as usize];
                if l.key <= bound {
                    out.push(x);
                    if l.child != NIL {
                        stack.push(l.child);
                    }
                }
                x = l.next;
            }
        }
    }

    /// Moves every item of `b` into `a` and returns `a`.
    pub fn meld(&mut self, a: HeapId, b: HeapId) -> HeapId {
        let (a, b) = (self.resolve(a), self.resolve(b));
        if a == b {
            return a;
        }
        assert!(self.heaps[a as usize].live && self.heaps[b as usize].live);
        let ra = self.heaps[a as usize].root;
        let rb = self.heaps[b as usize].root;
        let root = self.link(ra, rb);
        let moved = self.heaps[b as usize].len;
        self.heaps[b as usize] = Header { root: NIL, live: true, len: 0, merged_into: a };
        let hdr = &mut self.heaps[a as usize];
        hdr.root = root;
        hdr.len += moved;
        a
    }

    /// Links two roots; the smaller key wins, ties keep `a` on top.
    fn link(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (top, sub) = if self.links[b as usize].key < self.links[a as usize].key { (b, a) } else { (a, b) };
        let first = self.links[top as usize].child;
        {
            let s = &mut self.links[sub as usize];
            s.next = first;
            s.prev = top;
        }
        if first != NIL {
            self.links[first as usize].prev = sub;
        }
        let t = &mut self.links[top as usize];
        t.child = sub;
        t.next = NIL;
        t.prev = NIL;
        top
    }

    /// Standard two-pass merge of a sibling list.
    fn merge_pairs(&mut self, first: u32) -> u32 {
        if first == NIL {
            return NIL;
        }
        let mut pairs = std::mem::take(&mut self.pairs);
        pairs.clear();
        let mut cur = first;
        while cur != NIL {
            let a = cur;
            let b = self.links[a as usize].next;
            let rest = if b != NIL { self.links[b as usize].next } else { NIL };
            self.detach(a);
            if b != NIL {
                self.detach(b);
            }
            pairs.push(self.link(a, b));
            cur = rest;
        }
        let mut root = NIL;
        while let Some(t) = pairs.pop() {
            root = self.link(t, root);
        }
        self.pairs = pairs;
        root
    }

    fn detach(&mut self, x: u32) {
        let l = &mut self.links[x as usize];
        l.next = NIL;
        l.prev = NIL;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use std::collections::BTreeMap;

    fn drain(h: &mut PairingHeaps, id: HeapId) -> Vec<i64> {
        std::iter::from_fn(|| h.pop_min(id).map(|(_, k)| k)).collect()
    }

    #[test]
    fn insert_and_peek() {
        let mut h = PairingHeaps::new(3);
        let id = h.new_heap();
        assert_eq!(h.peek_min(id), None);
        h.insert(id, 0, 5);
        assert_eq!(h.peek_min(id), Some((0, 5)));
        h.insert(id, 1, 3);
        h.insert(id, 2, 7);
        assert_eq!(h.peek_min(id), Some((1, 3)));
        assert_eq!(h.pop_min(id), Some((1, 3)));
        assert_eq!(h.peek_min(id), Some((0, 5)));
    }

    #[test]
    fn remove_min_and_middle() {
        let mut h = PairingHeaps::new(3);
        let id = h.new_heap();
        for (i, k) in [3, 5, 7].into_iter().enumerate() {
            h.insert(id, i as u32, k);
        }
        h.remove(0);
        assert_eq!(h.peek_min(id), Some((1, 5)));
        h.remove(0); // idempotent
        assert_eq!(h.len(id), 2);
        assert_eq!(drain(&mut h, id), vec![5, 7]);
    }

    #[test]
    fn random_inserts_pop_sorted() {
        let mut rng = SplitMix64::new(11);
        let mut h = PairingHeaps::new(1000);
        let id = h.new_heap();
        let mut keys: Vec<i64> = (0..1000).map(|_| rng.range_i64(-500, 500)).collect();
        for (i, &k) in keys.iter().enumerate() {
            h.insert(id, i as u32, k);
        }
        keys.sort();
        assert_eq!(drain(&mut h, id), keys);
    }

    #[test]
    fn retired_heap_removal_only_clears_the_item() {
        let mut h = PairingHeaps::new(4);
        let id = h.new_heap();
        for i in 0..4 {
            h.insert(id, i, i as i64);
        }
        h.retire(id);
        h.remove(2);
        assert_eq!(h.heap_of(2), None);
        assert_eq!(h.heap_of(1), Some(id));
        // The item can join a fresh heap afterwards.
        let fresh = h.new_heap();
        h.insert(fresh, 2, 9);
        h.insert(fresh, 1, 4);
        assert_eq!(h.peek_min(fresh), Some((1, 4)));
    }

    #[test]
    fn meld_heaps() {
        let mut h = PairingHeaps::new(202);
        let a = h.new_heap();
        let b = h.new_heap();
        h.insert(a, 0, 3);
        h.insert(b, 1, 5);
        let c = h.meld(a, b);
        assert_eq!(h.peek_min(c), Some((0, 3)));
        assert_eq!(h.heap_of(1), Some(c));
        let e = h.new_heap();
        assert_eq!(h.meld(c, e), c);
        assert_eq!(h.len(c), 2);

        let x = h.new_heap();
        let y = h.new_heap();
        let mut rng = SplitMix64::new(5);
        let mut keys = Vec::new();
        for i in 2..202u32 {
            let k = rng.range_i64(0, 50);
            keys.push(k);
            h.insert(if i % 2 == 0 { x } else { y }, i, k);
        }
        let z = h.meld(x, y);
        keys.sort();
        assert_eq!(drain(&mut h, z), keys);
    }

    #[test]
    fn collect_at_most_finds_exactly_the_small_keys() {
        let mut rng = SplitMix64::new(3);
        let mut h = PairingHeaps::new(500);
        let id = h.new_heap();
        let keys: Vec<i64> = (0..500).map(|_| rng.range_i64(0, 100)).collect();
        for (i, &k) in keys.iter().enumerate() {
            h.insert(id, i as u32, k);
        }
        // shake the structure a bit
        for i in (0..500).step_by(7) {
            h.remove(i);
        }
        let mut got = Vec::new();
        h.collect_at_most(id, 20, &mut got);
        got.sort();
        let want: Vec<u32> = (0..500u32).filter(|&i| i % 7 != 0 && keys[i as usize] <= 20).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn shadow_multiset_fuzz() {
        let mut rng = SplitMix64::new(99);
        let items = 400usize;
        let mut h = PairingHeaps::new(items);
        let ids = [h.new_heap(), h.new_heap()];
        let mut shadow: [BTreeMap<(i64, u32), ()>; 2] = [BTreeMap::new(), BTreeMap::new()];
        let mut place: Vec<Option<(usize, i64)>> = vec![None; items];
        for _ in 0..100_000 {
            let item = rng.below(items as u64) as u32;
            match (place[item as usize], rng.below(3)) {
                (None, _) => {
                    let which = rng.below(2) as usize;
                    let key = rng.range_i64(-1000, 1000);
                    h.insert(ids[which], item, key);
                    shadow[which].insert((key, item), ());
                    place[item as usize] = Some((which, key));
                }
                (Some((which, _)), 0) => {
                    // pop instead of a targeted removal
                    let (top, k) = h.pop_min(ids[which]).unwrap();
                    assert_eq!(Some(k), shadow[which].keys().next().map(|&(sk, _)| sk));
                    shadow[which].remove(&(k, top));
                    place[top as usize] = None;
                }
                (Some((which, key)), _) => {
                    h.remove(item);
                    shadow[which].remove(&(key, item));
                    place[item as usize] = None;
                }
            }
            for w in 0..2 {
                let expect = shadow[w].keys().next().map(|&(k, _)| k);
                assert_eq!(h.peek_min(ids[w]).map(|(_, k)| k), expect);
                assert_eq!(h.len(ids[w]), shadow[w].len());
            }
        }
    }
}
