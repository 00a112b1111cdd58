//! Solver state, configuration and the outer primal/dual loop.

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::format::{Certificate, Instance, SetDual};
use crate::heap::{HeapId, PairingHeaps};

pub(crate) const NONE: u32 = u32::MAX;

pub(crate) const FREE: u8 = 0;
pub(crate) const PLUS: u8 = 1;
pub(crate) const MINUS: u8 = 2;
pub(crate) const PM: u8 = PLUS | MINUS;

pub(crate) const F_SUPER: u8 = 1;
pub(crate) const F_EXPANDED: u8 = 2;
pub(crate) const F_DIRTY: u8 = 4;
pub(crate) const F_QUEUED: u8 = 8;

/// Internal weights are the input weights times this factor.
pub const WEIGHT_SCALE: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    Greedy,
    /// Single-tree fractional jumpstart without a size limit.
    Fractional,
    /// Fractional jumpstart abandoning trees above the threshold.
    FractionalThresholded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualMode {
    ConnectedComponents,
    Lp,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub init: InitStrategy,
    pub init_threshold: usize,
    pub dual_mode: DualMode,
    pub lp_tree_threshold: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            init: InitStrategy::FractionalThresholded,
            init_threshold: 100,
            dual_mode: DualMode::ConnectedComponents,
            lp_tree_threshold: 100,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub grow_outs: u64,
    pub grow_ins: u64,
    pub augments: u64,
    pub shrinks: u64,
    pub expands: u64,
    pub dual_updates: u64,
    pub lp_updates: u64,
    pub lp_fallbacks: u64,
    pub primal_phases: u64,
    /// Trees left for the main loop after initialization.
    pub init_trees: u64,
    pub max_node_depth: u32,
    /// Halvings in the quadrupled domain that were not exact. Always zero
    /// unless an internal invariant broke.
    pub inexact_halvings: u64,
    pub init_time: Duration,
    pub primal_time: Duration,
    pub shrink_time: Duration,
    pub expand_time: Duration,
    pub refresh_time: Duration,
    pub dual_time: Duration,
    pub finish_time: Duration,
    pub total_time: Duration,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Total input weight of the matching.
    pub weight: i64,
    /// Indices into the instance edge list.
    pub edges: Vec<usize>,
    pub pairs: Vec<(u32, u32)>,
    pub certificate: Certificate,
    pub stats: SolveStats,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Matched(Solution),
    Infeasible(SolveStats),
    TimedOut(SolveStats),
}

impl Outcome {
    pub fn weight(&self) -> Option<i64> {
        match self {
            Outcome::Matched(s) => Some(s.weight),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            Outcome::Matched(s) => &s.stats,
            Outcome::Infeasible(s) | Outcome::TimedOut(s) => s,
        }
    }
}

/// Points at which an instrumentation hook is called.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseEvent {
    AfterInit,
    /// After a primal operation inside a primal phase.
    AfterOperation(Operation),
    /// After the primal phase including the final shrinks.
    AfterPrimal,
    /// After heaps were refreshed and duals updated.
    AfterDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    GrowOut,
    GrowIn,
    Augment,
    Expand,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    /// Lazy dual. The true dual adds the tree offset with the label's sign.
    pub y: i64,
    pub tree: u32,
    pub matched: u32,
    /// Minus-parent edge.
    pub mp: u32,
    pub parent: u32,
    pub ancestor: u32,
    /// Union-find link towards the receptacle.
    pub rec: u32,
    pub mark: u32,
    pub aux: u32,
    pub label: u8,
    pub flags: u8,
}

#[derive(Debug, Clone)]
pub(crate) struct Edge {
    pub ends: [u32; 2],
    pub head: [u32; 2],
    /// Quadrupled weight.
    pub w: i64,
    /// Slack without the duals of the current top endpoints.
    pub slack: i64,
    pub zero_hint: bool,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Blossom {
    pub children: Vec<u32>,
    pub neighbors: Vec<u32>,
    pub depth: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Tree {
    pub root: u32,
    pub alive: bool,
    pub y_t: i64,
    pub nodes: Vec<u32>,
    pub minus_heap: HeapId,
    pub plus_free: HeapId,
    pub pp_internal: HeapId,
    pub pairs: Vec<u32>,
}

#[derive(Debug, Clone)]
pub(crate) struct TreePair {
    pub t: [u32; 2],
    pub alive: bool,
    pub pp: HeapId,
    /// Plus endpoint in `t[0]`, minus endpoint in `t[1]`.
    pub pm: HeapId,
    /// Minus endpoint in `t[0]`, plus endpoint in `t[1]`.
    pub mp: HeapId,
}

#[derive(Clone)]
pub struct Solver {
    pub(crate) n: usize,
    pub(crate) config: SolverConfig,
    pub(crate) nodes: Vec<Node>,
    pub(crate) edges: Vec<Edge>,
    pub(crate) adj_start: Vec<u32>,
    pub(crate) adj: Vec<u32>,
    pub(crate) blossoms: Vec<Blossom>,
    pub(crate) trees: Vec<Tree>,
    pub(crate) pairs: Vec<TreePair>,
    pub(crate) pair_index: HashMap<(u32, u32), u32>,
    pub(crate) live_trees: usize,
    pub(crate) edge_heaps: PairingHeaps,
    pub(crate) node_heaps: PairingHeaps,
    pub(crate) dirty: Vec<u32>,
    /// Boundary edges of nodes absorbed into a blossom before their refresh.
    pub(crate) dirty_edges: Vec<u32>,
    pub(crate) scan_queue: VecDeque<u32>,
    pub(crate) expand_queue: Vec<u32>,
    pub(crate) pm_list: Vec<u32>,
    pub(crate) generation: u32,
    pub(crate) stats: SolveStats,
    pub(crate) scratch: Vec<u32>,
}

impl Solver {
    /// Builds the working graph. Weights are quadrupled here.
    pub fn new(instance: &Instance, config: SolverConfig) -> Result<Self> {
        instance.validate()?;
        if config.init_threshold == 0 {
            return Err(Error::Instance("init threshold must be positive".into()));
        }
        let n = instance.n;
        let mut degree = vec![0u32; n + 1];
        for e in &instance.edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut adj_start = vec![0u32; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + degree[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; adj_start[n] as usize];
        let mut edges = Vec::with_capacity(instance.m());
        for (i, e) in instance.edges.iter().enumerate() {
            for v in [e.u, e.v] {
                adj[fill[v as usize] as usize] = i as u32;
                fill[v as usize] += 1;
            }
            let w = e.w * WEIGHT_SCALE;
            edges.push(Edge { ends: [e.u, e.v], head: [e.u, e.v], w, slack: w, zero_hint: true });
        }
        let nodes = (0..n as u32)
            .map(|v| Node {
                y: 0,
                tree: NONE,
                matched: NONE,
                mp: NONE,
                parent: NONE,
                ancestor: NONE,
                rec: v,
                mark: 0,
                aux: 0,
                label: FREE,
                flags: 0,
            })
            .collect();
        Ok(Solver {
            n,
            config,
            nodes,
            edge_heaps: PairingHeaps::new(edges.len()),
            node_heaps: PairingHeaps::new(2 * n),
            edges,
            adj_start,
            adj,
            blossoms: Vec::new(),
            trees: Vec::new(),
            pairs: Vec::new(),
            pair_index: HashMap::new(),
            live_trees: 0,
            dirty: Vec::new(),
            dirty_edges: Vec::new(),
            scan_queue: VecDeque::new(),
            expand_queue: Vec::new(),
            pm_list: Vec::new(),
            generation: 0,
            stats: SolveStats::default(),
            scratch: Vec::new(),
        })
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn live_tree_count(&self) -> usize {
        self.live_trees
    }

    /// Runs to completion without instrumentation.
    pub fn solve(self) -> Outcome {
        self.solve_with_hook(&mut |_, _| {})
    }

    pub fn solve_with_hook(mut self, hook: &mut dyn FnMut(&mut Solver, PhaseEvent)) -> Outcome {
        let start = Instant::now();
        let deadline = self.config.time_limit.map(|d| start + d);
        let outcome = self.run(hook, deadline);
        let mut stats = self.stats.clone();
        stats.total_time = start.elapsed();
        match outcome {
            RunEnd::Done => {
                let t = Instant::now();
                let mut sol = self.finish();
                stats.finish_time = t.elapsed();
                stats.total_time = start.elapsed();
                stats.max_node_depth = sol.stats.max_node_depth;
                sol.stats = stats;
                Outcome::Matched(sol)
            }
            RunEnd::Infeasible => Outcome::Infeasible(stats),
            RunEnd::TimedOut => Outcome::TimedOut(stats),
        }
    }

    fn run(&mut self, hook: &mut dyn FnMut(&mut Solver, PhaseEvent), deadline: Option<Instant>) -> RunEnd {
        if self.n % 2 == 1 {
            return RunEnd::Infeasible;
        }
        if (0..self.n).any(|v| self.adj_start[v] == self.adj_start[v + 1]) {
            return RunEnd::Infeasible;
        }
        let t = Instant::now();
        self.initialize();
        self.stats.init_time = t.elapsed();
        self.start_trees();
        hook(self, PhaseEvent::AfterInit);
        loop {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return RunEnd::TimedOut;
            }
            let t = Instant::now();
            self.primal_phase(hook);
            self.stats.primal_time += t.elapsed();
            self.stats.primal_phases += 1;
            hook(self, PhaseEvent::AfterPrimal);
            if self.live_trees == 0 {
                return RunEnd::Done;
            }
            let t = Instant::now();
            self.refresh();
            self.stats.refresh_time += t.elapsed();
            let t = Instant::now();
            let ok = self.dual_update();
            self.stats.dual_time += t.elapsed();
            if !ok {
                return RunEnd::Infeasible;
            }
            hook(self, PhaseEvent::AfterDual);
        }
    }

    /// Turns every unmatched top node into the root of a singleton tree.
    pub(crate) fn start_trees(&mut self) {
        for v in 0..self.n as u32 {
            if self.nodes[v as usize].matched == NONE {
                let id = self.new_tree(v);
                self.set_label(v, PLUS, id);
                self.push_scan(v);
            }
        }
        self.stats.init_trees = self.live_trees as u64;
    }

    pub(crate) fn new_tree(&mut self, root: u32) -> u32 {
        let id = self.trees.len() as u32;
        let minus_heap = self.node_heaps.new_heap();
        let plus_free = self.edge_heaps.new_heap();
        let pp_internal = self.edge_heaps.new_heap();
        self.trees.push(Tree {
            root,
            alive: true,
            y_t: 0,
            nodes: vec![root],
            minus_heap,
            plus_free,
            pp_internal,
            pairs: Vec::new(),
        });
        self.live_trees += 1;
        id
    }

    pub(crate) fn next_generation(&mut self) -> u32 {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            for node in &mut self.nodes {
                node.mark = 0;
            }
            self.generation = 1;
        }
        self.generation
    }

    /// Collects the certificate, then unwinds every supernode so that the
    /// matching is expressed on elementary vertices.
    fn finish(&mut self) -> Solution {
        let certificate = self.extract_certificate();
        let max_depth = (0..self.blossoms.len())
            .filter(|&b| self.nodes[self.n + b].flags & F_EXPANDED == 0)
            .map(|b| self.blossoms[b].depth)
            .max()
            .unwrap_or(0);
        let mut stack: Vec<u32> = (0..self.nodes.len() as u32)
            .filter(|&v| self.is_super(v) && self.is_top(v))
            .collect();
        while let Some(s) = stack.pop() {
            let e = self.nodes[s as usize].matched;
            debug_assert!(e != NONE, "top supernode without a mate at the end");
            let children = self.unparent_children(s);
            let x = self.inner_endpoint(e, s);
            self.rotate_receptacle(s, x);
            self.nodes[x as usize].matched = e;
            for c in children {
                if self.is_super(c) {
                    stack.push(c);
                }
            }
        }
        let mut weight = 0i64;
        let mut chosen = Vec::with_capacity(self.n / 2);
        let mut pairs = Vec::with_capacity(self.n / 2);
        for v in 0..self.n {
            let e = self.nodes[v].matched;
            debug_assert!(e != NONE);
            let [a, b] = self.edges[e as usize].ends;
            if a as usize == v {
                weight += self.edges[e as usize].w / WEIGHT_SCALE;
                chosen.push(e as usize);
                pairs.push((a.min(b), a.max(b)));
            }
        }
        let stats = SolveStats { max_node_depth: max_depth, ..SolveStats::default() };
        Solution { weight, edges: chosen, pairs, certificate, stats }
    }

    fn extract_certificate(&mut self) -> Certificate {
        let mut vertex: Vec<i64> = (0..self.n as u32).map(|v| self.true_dual(v)).collect();
        let mut sets = Vec::new();
        for b in 0..self.blossoms.len() {
            let s = (self.n + b) as u32;
            if self.nodes[s as usize].flags & F_EXPANDED != 0 {
                continue;
            }
            let value = self.true_dual(s);
            if value == 0 {
                continue;
            }
            let mut vertices = Vec::new();
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                if self.is_super(x) {
                    stack.extend_from_slice(&self.blossoms[x as usize - self.n].children);
                } else {
                    vertices.push(x);
                }
            }
            vertices.sort_unstable();
            sets.push(SetDual { vertices, value });
        }
        let mut scale = WEIGHT_SCALE;
        for k in [4, 2] {
            if vertex.iter().chain(sets.iter().map(|s| &s.value)).all(|y| y % k == 0) {
                for y in vertex.iter_mut() {
                    *y /= k;
                }
                for s in sets.iter_mut() {
                    s.value /= k;
                }
                scale = WEIGHT_SCALE / k;
                break;
            }
        }
        Certificate { scale, vertex, sets }
    }
}

enum RunEnd {
    Done,
    Infeasible,
    TimedOut,
}

/// Solves `instance` with `config`.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<Outcome> {
    Ok(Solver::new(instance, config.clone())?.solve())
}
