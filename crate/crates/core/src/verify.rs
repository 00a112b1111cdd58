//! Independent oracles and checkers.

use std::collections::HashMap;

use crate::format::{Certificate, Instance};
use crate::heap::HeapId;
use crate::solver::*;

/// Exhaustive minimum-weight perfect matching for `n <= 20`.
/// Returns the weight and one optimal set of edge indices.
pub fn oracle_mwpm(inst: &Instance) -> Option<(i64, Vec<usize>)> {
    let n = inst.n;
    assert!(n <= 20, "oracle_mwpm supports at most 20 vertices");
    if n % 2 == 1 {
        return None;
    }
    // Cheapest edge per pair.
    let mut best: HashMap<(u32, u32), usize> = HashMap::new();
    for (i, e) in inst.edges.iter().enumerate() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let keep = best.get(&key).is_some_and(|&j| inst.edges[j].w <= e.w);
        if !keep {
            best.insert(key, i);
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (&(u, v), &i) in &best {
        adj[u as usize].push((v as usize, i));
        adj[v as usize].push((u as usize, i));
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let full = (1usize << n) - 1;
    // dp[mask] = cheapest perfect matching of the vertices in `mask`, where
    // the lowest vertex of the mask is always matched first.
    let mut dp: Vec<Option<i64>> = vec![None; 1 << n];
    let mut choice = vec![usize::MAX; 1 << n];
    dp[0] = Some(0);
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let low = mask.trailing_zeros() as usize;
        let mut bestv: Option<i64> = None;
        for &(v, i) in &adj[low] {
            if mask & (1 << v) == 0 {
                continue;
            }
            if let Some(rest) = dp[mask & !(1 << low) & !(1 << v)] {
                let cand = rest + inst.edges[i].w;
                if bestv.is_none_or(|b| cand < b) {
                    bestv = Some(cand);
                    choice[mask] = i;
                }
            }
        }
        dp[mask] = bestv;
    }
    let weight = dp[full]?;
    let mut chosen = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let i = choice[mask];
        chosen.push(i);
        mask &= !(1 << inst.edges[i].u) & !(1 << inst.edges[i].v);
    }
    chosen.sort_unstable();
    Some((weight, chosen))
}

/// Exhaustive maximum-cardinality matching for `n <= 20`.
pub fn max_matching_oracle(n: usize, edges: &[(u32, u32)]) -> usize {
    assert!(n <= 20, "max_matching_oracle supports at most 20 vertices");
    let mut adj = vec![0u32; n];
    for &(u, v) in edges {
        if u != v {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
    }
    let mut g = vec![0u8; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let without = mask & !(1 << low);
        let mut best = g[without];
        let mut cand = adj[low] as usize & without;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            best = best.max(1 + g[without & !(1 << v)]);
            cand &= cand - 1;
        }
        g[mask] = best;
    }
    g[(1 << n) - 1] as usize
}

/// Checks that `pairs` is a perfect matching of `inst` and returns its
/// weight, using the cheapest edge among parallel ones.
pub fn matching_weight(inst: &Instance, pairs: &[(u32, u32)]) -> std::result::Result<i64, String> {
    let mut cheapest: HashMap<(u32, u32), i64> = HashMap::new();
    for e in &inst.edges {
        let w = cheapest.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(e.w);
        *w = (*w).min(e.w);
    }
    let mut covered = vec![false; inst.n];
    let mut total = 0i64;
    for &(u, v) in pairs {
        let Some(&w) = cheapest.get(&(u.min(v), u.max(v))) else {
            return Err(format!("matched pair ({} {}) is not an edge", u + 1, v + 1));
        };
        for x in [u, v] {
            if std::mem::replace(&mut covered[x as usize], true) {
                return Err(format!("vertex {} is matched twice", x + 1));
            }
        }
        total += w;
    }
    match covered.iter().position(|&c| !c) {
        Some(v) => Err(format!("vertex {} is not matched", v + 1)),
        None => Ok(total),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertificateReport {
    pub violations: Vec<String>,
    /// Matching weight times the certificate scale.
    pub primal: i128,
    pub dual: i128,
}

impl CertificateReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a matching and its dual certificate against the LP optimality
/// conditions. Structural problems with the certificate itself (non-laminar,
/// even or tiny sets) are reported as errors.
pub fn check_certificate(
    inst: &Instance,
    pairs: &[(u32, u32)],
    cert: &Certificate,
) -> crate::Result<CertificateReport> {
    use crate::Error;
    let n = inst.n;
    let scale = cert.scale as i128;
    if cert.scale <= 0 {
        return Err(Error::Certificate("scale must be positive".into()));
    }
    if cert.vertex.len() != n {
        return Err(Error::Certificate(format!("expected {n} vertex duals, got {}", cert.vertex.len())));
    }
    // Laminar family: process sets by decreasing size.
    let mut order: Vec<usize> = (0..cert.sets.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(cert.sets[i].vertices.len()));
    let mut inner = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; cert.sets.len()];
    let mut depth = vec![0usize; cert.sets.len()];
    for &s in &order {
        let set = &cert.sets[s];
        let k = set.vertices.len();
        if k < 3 || k % 2 == 0 {
            return Err(Error::Certificate(format!("set {s} has size {k}; sets must be odd with at least 3 vertices")));
        }
        let first = *set.vertices.first().unwrap() as usize;
        let mut seen = std::collections::HashSet::new();
        for &v in &set.vertices {
            if v as usize >= n || !seen.insert(v) {
                return Err(Error::Certificate(format!("set {s} has a bad or repeated vertex {}", v + 1)));
            }
            if first >= n || inner[v as usize] != inner[first] {
                return Err(Error::Certificate(format!("set {s} is not laminar with the larger sets")));
            }
        }
        parent[s] = inner[first];
        depth[s] = if parent[s] == usize::MAX { 1 } else { depth[parent[s]] + 1 };
        for &v in &set.vertices {
            inner[v as usize] = s;
        }
    }
    let mut report = CertificateReport::default();
    // pi[s] = sum of duals on the chain from s to its outermost ancestor.
    let mut pi = vec![0i128; cert.sets.len()];
    let mut by_depth = order.clone();
    by_depth.sort_by_key(|&s| depth[s]);
    for &s in &by_depth {
        let value = cert.sets[s].value as i128;
        if value < 0 {
            report.violations.push(format!("set {s} has negative dual {value}"));
        }
        pi[s] = value + if parent[s] == usize::MAX { 0 } else { pi[parent[s]] };
    }
    let lca = |mut a: usize, mut b: usize| -> usize {
        while a != b {
            if a == usize::MAX || b == usize::MAX {
                return usize::MAX;
            }
            if depth[a] >= depth[b] {
                a = parent[a];
            } else {
                b = parent[b];
            }
        }
        a
    };
    let pi_of = |s: usize| if s == usize::MAX { 0 } else { pi[s] };
    let slack = |u: u32, v: u32, w: i64| -> i128 {
        let (iu, iv) = (inner[u as usize], inner[v as usize]);
        let shared = pi_of(lca(iu, iv));
        scale * w as i128
            - cert.vertex[u as usize] as i128
            - cert.vertex[v as usize] as i128
            - (pi_of(iu) - shared)
            - (pi_of(iv) - shared)
    };
    let mut cheapest: HashMap<(u32, u32), i64> = HashMap::new();
    for (i, e) in inst.edges.iter().enumerate() {
        let s = slack(e.u, e.v, e.w);
        if s < 0 {
            report.violations.push(format!("edge {i} ({} {}) has negative slack {s}", e.u + 1, e.v + 1));
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        let w = cheapest.entry(key).or_insert(e.w);
        *w = (*w).min(e.w);
    }
    // (a) perfect matching
    let mut covered = vec![false; n];
    let mut primal: i128 = 0;
    let mut crossing = vec![0usize; cert.sets.len()];
    for &(u, v) in pairs {
        let key = (u.min(v), u.max(v));
        let Some(&w) = cheapest.get(&key) else {
            report.violations.push(format!("matched pair ({} {}) is not an edge", u + 1, v + 1));
            continue;
        };
        for x in [u, v] {
            if covered[x as usize] {
                report.violations.push(format!("vertex {} is matched twice", x + 1));
            }
            covered[x as usize] = true;
        }
        primal += w as i128;
        // (c) complementary slackness on matched edges
        let s = slack(u, v, w);
        if s != 0 {
            report.violations.push(format!("matched edge ({} {}) has slack {s}", u + 1, v + 1));
        }
        let (iu, iv) = (inner[u as usize], inner[v as usize]);
        let top = lca(iu, iv);
        for start in [iu, iv] {
            let mut s = start;
            while s != top {
                crossing[s] += 1;
                s = parent[s];
            }
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        report.violations.push(format!("vertex {} is not matched", v + 1));
    }
    // (d) every set with positive dual is crossed exactly once
    for (s, set) in cert.sets.iter().enumerate() {
        if set.value > 0 && crossing[s] != 1 {
            report.violations.push(format!("set {s} with dual {} is crossed by {} matched edges", set.value, crossing[s]));
        }
    }
    // (e) strong duality
    let dual: i128 = cert.vertex.iter().map(|&y| y as i128).sum::<i128>()
        + cert.sets.iter().map(|s| s.value as i128).sum::<i128>();
    report.primal = primal * scale;
    report.dual = dual;
    if report.primal != dual {
        report.violations.push(format!("primal {} differs from dual {dual} (scale {})", report.primal, cert.scale));
    }
    Ok(report)
}

/// Top-level view used by the phase maximality check: top nodes indexed
/// `0..k`, tight non-loop edges between them and the matched pairs.
#[derive(Debug, Clone, Default)]
pub struct TopLevelView {
    pub nodes: usize,
    pub tight: Vec<(u32, u32)>,
    pub matched: usize,
}

pub fn top_level_view(s: &mut Solver) -> TopLevelView {
    let mut index = vec![u32::MAX; s.nodes.len()];
    let mut count = 0u32;
    for v in 0..s.nodes.len() as u32 {
        if s.is_top(v) {
            index[v as usize] = count;
            count += 1;
        }
    }
    let mut view = TopLevelView { nodes: count as usize, ..Default::default() };
    for e in 0..s.edges.len() as u32 {
        let (a, b) = s.resolve(e);
        if a == b {
            continue;
        }
        if s.slack(e) == 0 {
            view.tight.push((index[a as usize], index[b as usize]));
        }
        if s.nodes[a as usize].matched == e {
            debug_assert_eq!(s.nodes[b as usize].matched, e);
            view.matched += 1;
        }
    }
    view
}

/// Structural audit of the solver state. With `heaps` set, heap membership
/// is compared against the labels too, which holds only right after a refresh.
pub fn audit_forest(s: &mut Solver, heaps: bool) -> Vec<String> {
    let mut out = Vec::new();
    let total = s.nodes.len() as u32;
    // hierarchy and path compression
    for v in 0..total {
        if s.is_expanded(v) {
            continue;
        }
        let plain = s.top_uncached(v);
        if s.top(v) != plain {
            out.push(format!("node {v}: cached top disagrees with the parent chain"));
        }
    }
    // duals and slacks
    for e in 0..s.edges.len() as u32 {
        let sl = s.level_slack(e);
        if sl < 0 {
            out.push(format!("edge {e}: negative slack {sl}"));
        }
        let (a, b) = s.resolve(e);
        if a != b && s.slack(e) != sl {
            out.push(format!("edge {e}: lazy slack {} differs from recomputed {sl}", s.slack(e)));
        }
    }
    for v in s.n as u32..total {
        if !s.is_expanded(v) && s.true_dual(v) < 0 {
            out.push(format!("supernode {v}: negative dual {}", s.true_dual(v)));
        }
    }
    // matching validity at every level
    for v in 0..total {
        if s.is_expanded(v) {
            continue;
        }
        let e = s.nodes[v as usize].matched;
        if e == NONE {
            continue;
        }
        let Some(o) = level_other(s, e, v) else {
            out.push(format!("node {v}: matched edge {e} is not incident at its level"));
            continue;
        };
        if s.nodes[o as usize].matched != e {
            out.push(format!("node {v}: mate {o} does not point back"));
        }
        if s.level_slack(e) != 0 {
            out.push(format!("node {v}: matched edge {e} is not tight"));
        }
    }
    // forest structure on top nodes
    let tops: Vec<u32> = (0..total).filter(|&v| s.is_top(v)).collect();
    let mut unmatched_per_tree: HashMap<u32, usize> = HashMap::new();
    for &v in &tops {
        let node = s.nodes[v as usize].clone();
        match node.label {
            FREE => {
                if node.matched == NONE {
                    out.push(format!("free node {v} is unmatched"));
                } else if let Some(o) = level_other(s, node.matched, v) {
                    if s.nodes[o as usize].label != FREE {
                        out.push(format!("free node {v} is matched to labeled node {o}"));
                    }
                }
                continue;
            }
            _ => {
                if node.tree == NONE || !s.trees[node.tree as usize].alive {
                    out.push(format!("labeled node {v} is not in a live tree"));
                    continue;
                }
            }
        }
        if node.matched == NONE {
            *unmatched_per_tree.entry(node.tree).or_default() += 1;
            if node.label != PLUS || s.trees[node.tree as usize].root != v {
                out.push(format!("unmatched node {v} is not a purely plus root"));
            }
        }
        if node.label & PLUS != 0 {
            check_path(s, v, true, &mut out);
        }
        if node.label & MINUS != 0 {
            check_path(s, v, false, &mut out);
        }
        if node.label == PM {
            check_receptacle(s, v, &mut out);
        }
    }
    for t in 0..s.trees.len() as u32 {
        if s.trees[t as usize].alive && unmatched_per_tree.get(&t).copied().unwrap_or(0) != 1 {
            out.push(format!("tree {t} does not have exactly one root"));
        }
    }
    // supernode interiors
    for b in 0..s.blossoms.len() {
        let sn = (s.n + b) as u32;
        if s.is_expanded(sn) {
            continue;
        }
        audit_blossom(s, sn, &mut out);
    }
    if heaps {
        audit_heaps(s, &mut out);
    }
    out
}

/// Opposite endpoint of `e` at the level of node `v`: the child of the
/// lowest common ancestor on the other side.
fn level_other(s: &Solver, e: u32, v: u32) -> Option<u32> {
    let [a, b] = s.edges[e as usize].ends;
    let chain = |mut x: u32| {
        let mut c = vec![x];
        while s.nodes[x as usize].parent != NONE {
            x = s.nodes[x as usize].parent;
            c.push(x);
        }
        c
    };
    let (ca, cb) = (chain(a), chain(b));
    let (pa, pb) = (ca.iter().position(|&x| x == v), cb.iter().position(|&x| x == v));
    let (mine, theirs, pos) = match (pa, pb) {
        (Some(p), None) => (&ca, &cb, p),
        (None, Some(p)) => (&cb, &ca, p),
        _ => return None,
    };
    let parent = mine.get(pos + 1).copied();
    match parent {
        None => theirs.last().copied().filter(|&t| t != *mine.last().unwrap()),
        Some(p) => {
            let idx = theirs.iter().position(|&x| x == p)?;
            if idx == 0 {
                return None;
            }
            Some(theirs[idx - 1])
        }
    }
}

/// Walks P+_v (or P-_v) at the top level and reports problems.
fn check_path(s: &mut Solver, v: u32, plus_first: bool, out: &mut Vec<String>) {
    let t = s.nodes[v as usize].tree;
    let root = s.trees[t as usize].root;
    let mut seen = std::collections::HashSet::new();
    let mut x = v;
    let mut plus_state = plus_first;
    loop {
        if !seen.insert(x) {
            out.push(format!("path from {v} is not simple at {x}"));
            return;
        }
        let node = s.nodes[x as usize].clone();
        if node.tree != t {
            out.push(format!("path from {v} leaves its tree at {x}"));
            return;
        }
        let e = if plus_state {
            if node.label & PLUS == 0 {
                out.push(format!("path from {v} uses plus step at non-plus {x}"));
                return;
            }
            if node.matched == NONE {
                if x != root {
                    out.push(format!("path from {v} ends at {x}, not at root {root}"));
                }
                return;
            }
            node.matched
        } else {
            if node.label & MINUS == 0 || node.mp == NONE {
                out.push(format!("path from {v} uses minus step at {x} without minus parent"));
                return;
            }
            if node.mp == node.matched {
                out.push(format!("node {x}: minus parent is matched"));
            }
            node.mp
        };
        let (a, b) = s.resolve(e);
        if a == b || (a != x && b != x) {
            out.push(format!("path from {v}: arc {e} at {x} is not a top-level edge of {x}"));
            return;
        }
        if s.slack(e) != 0 {
            out.push(format!("path from {v}: arc {e} is not tight"));
        }
        x = if a == x { b } else { a };
        plus_state = !plus_state;
    }
}

fn plus_path(s: &mut Solver, v: u32, plus_first: bool) -> Vec<(u32, bool)> {
    let mut path = Vec::new();
    let mut x = v;
    let mut plus_state = plus_first;
    let limit = s.nodes.len() + 2;
    while path.len() <= limit {
        path.push((x, plus_state));
        let node = &s.nodes[x as usize];
        let e = if plus_state { node.matched } else { node.mp };
        if e == NONE {
            break;
        }
        x = s.other(e, x);
        plus_state = !plus_state;
    }
    path
}

/// I1: the receptacle lies on both paths, with only ±-nodes strictly inside.
fn check_receptacle(s: &mut Solver, v: u32, out: &mut Vec<String>) {
    let r = s.find(v);
    if s.nodes[r as usize].label != PLUS {
        out.push(format!("node {v}: receptacle {r} is not purely plus"));
        return;
    }
    let mut parities = Vec::new();
    for plus_first in [true, false] {
        let path = plus_path(s, v, plus_first);
        let Some(pos) = path.iter().position(|&(x, _)| x == r) else {
            out.push(format!("node {v}: receptacle {r} not on its path"));
            return;
        };
        if path[1..pos].iter().any(|&(x, _)| s.nodes[x as usize].label != PM) {
            out.push(format!("node {v}: path to receptacle {r} passes a non-± node"));
        }
        parities.push(pos % 2);
    }
    if parities[0] == parities[1] {
        out.push(format!("node {v}: both paths to receptacle have the same parity"));
    }
}

/// Interior structure: one unmatched child (the receptacle, purely plus),
/// the others ± with receptacle links, interior paths ending at it.
fn audit_blossom(s: &mut Solver, b: u32, out: &mut Vec<String>) {
    let children = s.blossoms[b as usize - s.n].children.clone();
    if children.len() < 3 || children.len() % 2 == 0 {
        out.push(format!("supernode {b} has {} children", children.len()));
    }
    let unmatched: Vec<u32> = children.iter().copied().filter(|&c| s.nodes[c as usize].matched == NONE).collect();
    if unmatched.len() != 1 {
        out.push(format!("supernode {b} has {} unmatched children", unmatched.len()));
        return;
    }
    let r = unmatched[0];
    if s.nodes[r as usize].label != PLUS {
        out.push(format!("supernode {b}: receptacle {r} is not purely plus"));
    }
    for &c in &children {
        if s.nodes[c as usize].parent != b {
            out.push(format!("supernode {b}: child {c} has another parent"));
        }
        if c == r {
            continue;
        }
        if s.nodes[c as usize].label != PM || s.nodes[c as usize].rec != r {
            out.push(format!("supernode {b}: child {c} is not a ± node of receptacle {r}"));
        }
        for plus_first in [true, false] {
            let mut x = c;
            let mut plus_state = plus_first;
            let mut steps = 0;
            while x != r {
                steps += 1;
                if steps > children.len() + 1 {
                    out.push(format!("supernode {b}: interior path from {c} does not reach {r}"));
                    break;
                }
                let node = &s.nodes[x as usize];
                let e = if plus_state { node.matched } else { node.mp };
                if e == NONE {
                    out.push(format!("supernode {b}: interior path from {c} stops at {x}"));
                    break;
                }
                if s.level_slack(e) != 0 {
                    out.push(format!("supernode {b}: interior arc {e} is not tight"));
                }
                match level_other(s, e, x) {
                    Some(o) if s.nodes[o as usize].parent == b => x = o,
                    _ => {
                        out.push(format!("supernode {b}: interior arc {e} leaves the blossom"));
                        break;
                    }
                }
                plus_state = !plus_state;
            }
        }
    }
}

fn audit_heaps(s: &mut Solver, out: &mut Vec<String>) {
    for e in 0..s.edges.len() as u32 {
        let want = s.classify(e);
        let have: Option<HeapId> = s.edge_heaps.heap_of(e).filter(|&h| s.edge_heaps.is_live(h));
        match want {
            Some((h, key)) => {
                if have != Some(h) || s.edge_heaps.key_of(e) != key {
                    out.push(format!("edge {e}: heap membership does not match its labels"));
                }
            }
            None => {
                let (a, b) = s.resolve(e);
                let loop_in_pp = a == b && have.is_some_and(|h| s.trees.iter().any(|t| t.alive && t.pp_internal == h));
                if have.is_some() && !loop_in_pp {
                    out.push(format!("edge {e}: in a live heap but should not be"));
                }
            }
        }
    }
    for v in 0..s.nodes.len() as u32 {
        let want = s.node_placement(v);
        let have = s.node_heaps.heap_of(v).filter(|&h| s.node_heaps.is_live(h));
        if want.map(|w| w.0) != have || want.is_some_and(|w| s.node_heaps.key_of(v) != w.1) {
            out.push(format!("node {v}: node-heap membership does not match its label"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Instance {
        Instance::from_triples(6, &[(0, 1, 0), (1, 2, 0), (0, 2, 0), (3, 4, 0), (4, 5, 0), (3, 5, 0), (2, 3, 5)])
            .unwrap()
    }

    fn greedy() -> SolverConfig {
        SolverConfig { init: InitStrategy::Greedy, ..Default::default() }
    }

    #[test]
    fn fresh_state_is_clean() {
        let mut seen = false;
        Solver::new(&two_triangles(), greedy()).unwrap().solve_with_hook(&mut |s, ev| {
            if ev == PhaseEvent::AfterInit {
                assert!(audit_forest(s, false).is_empty());
                seen = true;
            }
        });
        assert!(seen);
    }

    #[test]
    fn corrupted_receptacles_are_reported() {
        let mut top_level = 0;
        let mut interior = 0;
        Solver::new(&two_triangles(), greedy()).unwrap().solve_with_hook(&mut |s, ev| {
            let pm: Vec<u32> = (0..s.nodes.len() as u32).filter(|&v| s.is_top(v) && s.nodes[v as usize].label == PM).collect();
            if ev == PhaseEvent::AfterOperation(Operation::GrowIn) && !pm.is_empty() {
                assert!(audit_forest(s, false).is_empty());
                let mut bad = s.clone();
                bad.nodes[pm[0] as usize].rec = pm[0];
                assert!(audit_forest(&mut bad, false).iter().any(|m| m.contains("receptacle")));
                top_level += 1;
            }
            if ev == PhaseEvent::AfterPrimal && s.supernode_count() > 0 {
                let b = s.n as u32;
                if !s.is_expanded(b) {
                    let children = s.blossoms[0].children.clone();
                    let mut bad = s.clone();
                    let other = children.iter().copied().find(|&c| bad.nodes[c as usize].matched != NONE).unwrap();
                    bad.nodes[other as usize].rec = other;
                    assert!(audit_forest(&mut bad, false).iter().any(|m| m.contains("receptacle")));
                    interior += 1;
                }
            }
        });
        assert!(top_level > 0 && interior > 0);
    }

    #[test]
    fn corrupted_matching_is_reported() {
        let mut checked = false;
        Solver::new(&two_triangles(), greedy()).unwrap().solve_with_hook(&mut |s, ev| {
            if ev == PhaseEvent::AfterInit {
                let v = (0..6).find(|&v| s.nodes[v].matched != NONE).unwrap();
                let mut bad = s.clone();
                let e = bad.nodes[v].matched;
                let o = bad.edges[e as usize].ends.iter().copied().find(|&x| x as usize != v).unwrap();
                bad.nodes[o as usize].matched = NONE;
                assert!(!audit_forest(&mut bad, false).is_empty());
                checked = true;
            }
        });
        assert!(checked);
    }
}
