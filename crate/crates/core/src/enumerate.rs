//! Exhaustive search for Hamilton-path HK AOFs of the dual graph.
//!
//! Depth-first over Hamilton paths. Every prefix fixes the direction of all
//! edges with a placed endpoint (placed vertices precede unplaced ones), so a
//! face acquires its source and its sinks at the moment those vertices are
//! placed. Prefixes giving a face a second source or a premature sink are
//! cut, as are prefixes that leave two future sinks in one face.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::orientation::{
    canonical_indices, class_members, is_aof, is_hk_up_to, mask_iter, vertex_disjoint_paths, CanonicalForm, HamiltonOrder, Orientation,
    OrientationError,
};
use crate::polytope::{dual_graph, face_table, symmetry_group, DualGraph, FaceTable, Params, PolytopeError, VertexMask};

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("{kind} budget exhausted after {nodes} nodes with {} classes found", partial.len())]
    BudgetExceeded { kind: &'static str, nodes: u64, partial: Vec<CanonicalForm> },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    /// Start from every vertex instead of one per symmetry orbit.
    pub raw: bool,
    /// Check the Holt–Klee condition only on faces up to this dimension.
    pub hk_max_dim: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub d: usize,
    pub classes: Vec<CanonicalForm>,
    /// Search tree nodes visited.
    pub nodes: u64,
    /// Complete Hamilton orders that passed the final HK AOF check.
    pub accepted_orders: u64,
    pub group_order: usize,
    pub elapsed: Duration,
}

impl Enumeration {
    /// Number of distinct orders with each order identified with its
    /// reversal, without identifying symmetric images.
    pub fn orders_up_to_reversal(&self) -> Result<usize, EnumerateError> {
        let group = symmetry_group(Params::corank3(self.d)?)?;
        let directed: usize = self.classes.iter().map(|c| class_members(c.order(), &group).len()).sum();
        Ok(directed / 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reject {
    SecondSource(usize),
    EarlySink(usize),
    TwoFutureSinks(usize),
    NotHk(usize),
    Stranded,
}

struct Context<'a> {
    graph: &'a DualGraph,
    faces: &'a FaceTable,
    /// indices into `face_masks` of the faces through each vertex
    faces_of: Vec<Vec<usize>>,
    face_masks: Vec<VertexMask>,
    face_refs: Vec<&'a crate::polytope::Face>,
    maps: Vec<Vec<usize>>,
    nodes: AtomicU64,
    accepted: AtomicU64,
    stop: AtomicBool,
    stop_kind: Mutex<Option<&'static str>>,
    hk_max_dim: usize,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    found: Mutex<BTreeSet<Vec<usize>>>,
}

impl<'a> Context<'a> {
    fn new(graph: &'a DualGraph, faces: &'a FaceTable, maps: Vec<Vec<usize>>, opts: &EnumerateOptions) -> Self {
        let face_refs: Vec<&crate::polytope::Face> = faces.all_faces().collect();
        let face_masks: Vec<VertexMask> = face_refs.iter().map(|f| f.mask).collect();
        let mut faces_of = vec![Vec::new(); graph.len()];
        for (i, f) in face_refs.iter().enumerate() {
            for &v in &f.vertices {
                faces_of[v].push(i);
            }
        }
        Self {
            graph,
            faces,
            faces_of,
            face_masks,
            face_refs,
            maps,
            nodes: AtomicU64::new(0),
            accepted: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            stop_kind: Mutex::new(None),
            hk_max_dim: opts.hk_max_dim.unwrap_or(faces.d),
            node_budget: opts.node_budget,
            deadline: opts.time_budget.map(|t| Instant::now() + t),
            found: Mutex::new(BTreeSet::new()),
        }
    }

    fn halt(&self, kind: &'static str) {
        self.stop.store(true, Ordering::Relaxed);
        let mut k = self.stop_kind.lock().expect("stop flag");
        k.get_or_insert(kind);
    }

    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.node_budget.is_some_and(|b| n > b) {
            self.halt("node");
            return false;
        }
        if n % 4096 == 0 && self.deadline.is_some_and(|t| Instant::now() > t) {
            self.halt("time");
            return false;
        }
        true
    }

    /// Whether placing `v` after the vertices in `placed` keeps the prefix
    /// extendable. `ranks` must hold positions of `placed` and of `v`.
    fn admissible(&self, placed: VertexMask, v: usize, ranks: &[usize]) -> bool {
        self.check(placed, v, ranks).is_ok()
    }

    fn check(&self, placed: VertexMask, v: usize, ranks: &[usize]) -> Result<(), Reject> {
        let adj = &self.graph.adjacency_mask;
        let after = placed | 1 << v;
        let unplaced_after = self.graph.full_mask() & !after;
        for &fi in &self.faces_of[v] {
            let face = self.face_masks[fi];
            let nb = adj[v] & face;
            // v would be a second source
            if placed & face != 0 && nb & placed == 0 {
                return Err(Reject::SecondSource(fi));
            }
            let rest = face & unplaced_after;
            // v is a sink while the face continues
            if nb & !placed == 0 && rest != 0 {
                return Err(Reject::EarlySink(fi));
            }
            // unplaced vertices whose face-neighbours are all placed are
            // future sinks
            let mut future_sinks = 0;
            for w in mask_iter(rest & adj[v]) {
                if adj[w] & face & unplaced_after == 0 {
                    future_sinks += 1;
                    if future_sinks > 1 {
                        return Err(Reject::TwoFutureSinks(fi));
                    }
                }
            }
            if rest == 0 && !self.completed_face_is_hk(fi, ranks) {
                return Err(Reject::NotHk(fi));
            }
        }
        // an unplaced vertex with no unplaced neighbour can only come next,
        // and then the path would end early
        if unplaced_after.count_ones() > 1 && mask_iter(unplaced_after).any(|w| adj[w] & unplaced_after == 0) {
            return Err(Reject::Stranded);
        }
        Ok(())
    }

    fn completed_face_is_hk(&self, fi: usize, ranks: &[usize]) -> bool {
        let face = self.face_refs[fi];
        if face.dim < 3 || face.dim > self.hk_max_dim {
            return true;
        }
        let adj = &self.graph.adjacency_mask;
        let mut out = vec![0u64; self.graph.len()];
        for &u in &face.vertices {
            out[u] = mask_iter(adj[u] & face.mask).filter(|&w| ranks[w] > ranks[u]).fold(0, |m, w| m | 1 << w);
        }
        let s = *face.vertices.iter().min_by_key(|&&v| ranks[v]).expect("non-empty face");
        let t = *face.vertices.iter().max_by_key(|&&v| ranks[v]).expect("non-empty face");
        vertex_disjoint_paths(&out, face.mask, s, t, face.dim) >= face.dim
    }

    fn dfs(&self, seq: &mut Vec<usize>, placed: VertexMask, ranks: &mut [usize]) {
        if !self.tick() {
            return;
        }
        if placed == self.graph.full_mask() {
            self.leaf(seq, ranks);
            return;
        }
        let last = *seq.last().expect("non-empty prefix");
        for w in mask_iter(self.graph.adjacency_mask[last] & !placed) {
            ranks[w] = seq.len();
            if self.admissible(placed, w, ranks) {
                seq.push(w);
                self.dfs(seq, placed | 1 << w, ranks);
                seq.pop();
            }
        }
    }

    fn leaf(&self, seq: &[usize], ranks: &[usize]) {
        let o = Orientation::from_values(self.graph, ranks);
        let ok = matches!(is_aof(self.graph, &o, self.faces), Ok(true)) && matches!(is_hk_up_to(self.graph, &o, self.faces, self.hk_max_dim), Ok(true));
        if ok {
            self.accepted.fetch_add(1, Ordering::Relaxed);
            let canon = canonical_indices(seq, &self.maps);
            self.found.lock().expect("result set").insert(canon);
        }
    }
}

/// Finds all Hamilton-path HK AOFs of the dual graph of `C_d(d+3)^Δ`, up to
/// symmetry and reversal.
pub fn enumerate(d: usize, opts: &EnumerateOptions) -> Result<Enumeration, EnumerateError> {
    let params = Params::corank3(d)?;
    let graph = dual_graph(params)?;
    let faces = face_table(&graph);
    let group = symmetry_group(params)?;
    let maps = group.vertex_maps(&graph);
    let starts: Vec<usize> = if opts.raw {
        (0..graph.len()).collect()
    } else {
        group.vertex_orbits(&graph).iter().map(|orbit| orbit[0]).collect()
    };
    let start = Instant::now();
    let ctx = Context::new(&graph, &faces, maps, opts);

    let mut prefixes: Vec<Vec<usize>> = starts.iter().map(|&s| vec![s]).collect();
    for _ in 0..2 {
        let mut next = Vec::new();
        for p in &prefixes {
            let placed = p.iter().fold(0u64, |m, &v| m | 1 << v);
            let last = *p.last().expect("non-empty");
            let mut ranks = vec![0; graph.len()];
            for (i, &v) in p.iter().enumerate() {
                ranks[v] = i;
            }
            for w in mask_iter(graph.adjacency_mask[last] & !placed) {
                ranks[w] = p.len();
                if ctx.admissible(placed, w, &ranks) {
                    let mut q = p.clone();
                    q.push(w);
                    next.push(q);
                }
            }
        }
        prefixes = next;
    }

    let run = || {
        prefixes.par_iter().for_each(|p| {
            let mut ranks = vec![0; graph.len()];
            for (i, &v) in p.iter().enumerate() {
                ranks[v] = i;
            }
            let placed = p.iter().fold(0u64, |m, &v| m | 1 << v);
            let mut seq = p.clone();
            ctx.dfs(&mut seq, placed, &mut ranks);
        })
    };
    match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| EnumerateError::ThreadPool(e.to_string()))?
            .install(run),
        None => run(),
    }

    let found = ctx.found.lock().expect("result set").clone();
    let classes: Vec<CanonicalForm> =
        found.iter().map(|seq| CanonicalForm(HamiltonOrder::from_indices(&graph, seq))).collect();
    let nodes = ctx.nodes.load(Ordering::Relaxed);
    if let Some(kind) = *ctx.stop_kind.lock().expect("stop flag") {
        return Err(EnumerateError::BudgetExceeded { kind, nodes, partial: classes });
    }
    Ok(Enumeration {
        d,
        classes,
        nodes,
        accepted_orders: ctx.accepted.load(Ordering::Relaxed),
        group_order: group.order(),
        elapsed: start.elapsed(),
    })
}
