//! Randomized search for realizations of orientations of `C_d(d+3)^Δ`.
//!
//! A sample is a random planar Gale configuration in the labelling
//! convention. Requiring the intersection heights to increase along every
//! directed edge is a linear system in the lifting heights, decided exactly.
//! A solution is turned back into facet normals and an objective, and the
//! result is re-verified from scratch.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galediagram::{edge_coefficients, intersection_height, GaleConfig, GaleError};
use crate::linalg::{dot, nullspace, solve};
use crate::lp::{nonneg_solve, strict_feasibility, NonnegResult, StrictFeasibility};
use crate::orientation::{self, HamiltonOrder, OrientationError};
use crate::polytope::{dual_graph, symmetry_group, DualGraph, Params, PolytopeError, VertexLabel};
use crate::rational::{self, q, Q};

/// Rejection attempts per configuration before giving up.
pub const REJECTION_LIMIT: usize = 200_000;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Gale(#[from] GaleError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("no valid configuration after {0} attempts")]
    RejectionBudget(usize),
    #[error("budget: {0}")]
    Budget(String),
    #[error("reconstruction: {0}")]
    Reconstruction(String),
}

/// Clockwise circular order of the vectors: odd indices, then even ones.
pub fn circular_order(n: usize) -> Vec<u8> {
    let n = n as u8;
    (1..=n).step_by(2).chain((2..=n).step_by(2)).collect()
}

/// Seed of sample `i` in a run with root seed `root`.
pub fn sample_seed(root: u64, i: u64) -> u64 {
    root.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Length of a vector of unit weight.
const DIRECTION_SCALE: f64 = 10_000.0;
/// Angular gaps are log-uniform between this fraction and 1, then normalised.
const MIN_GAP: f64 = 1e-3;
/// Free weights are integers, log-uniform in `1..2^WEIGHT_BITS`.
const WEIGHT_BITS: f64 = 16.0;

/// A random valid, balanced Gale configuration, deterministic in `seed`.
/// Also returns the number of rejected attempts.
///
/// Directions follow the circular order with log-uniform angular gaps.
/// All but two vectors get log-uniform positive weights and the last two
/// are solved for so that the vectors sum to zero. The weighted vectors are
/// rounded to integers except one, which is set to minus the sum of the
/// others. Samples with non-positive weights or an invalid result are
/// rejected.
pub fn random_gale_config_with_stats(params: Params, seed: u64) -> Result<(GaleConfig, usize), RealizeError> {
    params.require_corank3()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = circular_order(params.n);
    let n = params.n;
    let graph = dual_graph(params)?;
    for attempt in 0..REJECTION_LIMIT {
        let gaps: Vec<f64> = (0..n).map(|_| rng.gen_range(MIN_GAP.ln()..0.0).exp()).collect();
        let total: f64 = gaps.iter().sum();
        let mut angle = rng.gen_range(0.0..TAU);
        let mut dirs = vec![[0.0f64; 2]; n];
        for (&idx, gap) in order.iter().zip(&gaps) {
            dirs[idx as usize - 1] = [angle.cos(), angle.sin()];
            angle -= gap / total * TAU;
        }
        let mut picks: Vec<usize> = (0..n).collect();
        picks.shuffle(&mut rng);
        let (a, b) = (picks[0], picks[1]);
        let mut weights = vec![0.0f64; n];
        let mut sum = [0.0f64; 2];
        for &i in &picks[2..] {
            weights[i] = rng.gen_range(0.0..WEIGHT_BITS).exp2();
            sum[0] += weights[i] * dirs[i][0];
            sum[1] += weights[i] * dirs[i][1];
        }
        let det = dirs[a][0] * dirs[b][1] - dirs[b][0] * dirs[a][1];
        weights[a] = (sum[1] * dirs[b][0] - sum[0] * dirs[b][1]) / det;
        weights[b] = (sum[0] * dirs[a][1] - sum[1] * dirs[a][0]) / det;
        if !(weights[a] > 0.0 && weights[b] > 0.0) {
            continue;
        }
        // round all but one vector; the last one closes the sum exactly
        let mut vectors = vec![[0i64; 2]; n];
        let mut closing = [0i64; 2];
        for i in (0..n).filter(|&i| i != b) {
            for c in 0..2 {
                vectors[i][c] = (DIRECTION_SCALE * weights[i] * dirs[i][c]).round() as i64;
                closing[c] -= vectors[i][c];
            }
        }
        vectors[b] = closing;
        if !vectors_valid(&vectors, &graph) {
            continue;
        }
        let cfg = GaleConfig::new(vectors.iter().map(|v| [q(v[0]), q(v[1])]).collect());
        cfg.validate(params)?;
        return Ok((cfg, attempt));
    }
    Err(RealizeError::RejectionBudget(REJECTION_LIMIT))
}

/// `GaleConfig::validate` on small integer vectors: no two parallel, no
/// degenerate triangle, and the origin strictly inside exactly the
/// vertex-label triangles, each anticlockwise.
fn vectors_valid(v: &[[i64; 2]], graph: &DualGraph) -> bool {
    let n = v.len();
    let perp = |a: usize, b: usize| v[a][0] as i128 * v[b][1] as i128 - v[b][0] as i128 * v[a][1] as i128;
    for a in 0..n {
        for b in a + 1..n {
            if perp(a, b) == 0 {
                return false;
            }
            for c in b + 1..n {
                let p = [perp(a, b), perp(b, c), perp(c, a)];
                if p.iter().sum::<i128>() == 0 {
                    return false;
                }
                let s = p.map(i128::signum);
                let inside = s[0] == s[1] && s[1] == s[2];
                let vertex = graph.is_vertex(&VertexLabel::new(a as u8 + 1, b as u8 + 1, c as u8 + 1));
                if vertex != inside || (vertex && s[0] != 1) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn random_gale_config(params: Params, seed: u64) -> Result<GaleConfig, RealizeError> {
    random_gale_config_with_stats(params, seed).map(|(cfg, _)| cfg)
}

/// Rows `z_p - z_q` over `h_1..h_n`, one per directed edge `p -> q`; the
/// system asks for every row to be at most `-1`.
#[derive(Debug, Clone)]
pub struct FeasibilitySystem {
    pub edges: Vec<(VertexLabel, VertexLabel)>,
    pub rows: Vec<Vec<Q>>,
}

pub fn edge_system(cfg: &GaleConfig, edges: &[(VertexLabel, VertexLabel)]) -> Result<FeasibilitySystem, RealizeError> {
    let n = cfg.len();
    let mut rows = Vec::with_capacity(edges.len());
    for (p, qq) in edges {
        let c = edge_coefficients(cfg, p, qq)?;
        let mut row = vec![Q::zero(); n];
        for (&col, v) in c.columns.iter().zip(&c.values) {
            row[col as usize - 1] += v;
        }
        rows.push(row);
    }
    Ok(FeasibilitySystem { edges: edges.to_vec(), rows })
}

/// Increasing heights along consecutive labels are equivalent to the whole
/// orientation of a Hamilton order.
pub fn path_edges(order: &[VertexLabel]) -> Vec<(VertexLabel, VertexLabel)> {
    order.windows(2).map(|w| (w[0], w[1])).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    /// Nonnegative row multipliers summing to one whose combination vanishes.
    Infeasible(Vec<Q>),
}

pub fn feasibility(cfg: &GaleConfig, order: &HamiltonOrder) -> Result<Feasibility, RealizeError> {
    let system = edge_system(cfg, &path_edges(&order.0))?;
    Ok(solve_system(&system, cfg.len()))
}

/// Solves on rows scaled to primitive integer vectors, then maps the answer
/// back to the original rows.
pub fn solve_system(system: &FeasibilitySystem, vars: usize) -> Feasibility {
    let scales: Vec<Q> = system.rows.iter().map(|r| rational::primitive_scale(r)).collect();
    let scaled: Vec<Vec<Q>> = system.rows.iter().zip(&scales).map(|(r, s)| r.iter().map(|x| x * s).collect()).collect();
    match strict_feasibility(&scaled, vars) {
        StrictFeasibility::Feasible(h) => {
            let slack = system.rows.iter().map(|r| -dot(r, &h)).min().unwrap_or_else(Q::one);
            if slack >= Q::one() || !slack.is_positive() {
                return Feasibility::Feasible(h);
            }
            Feasibility::Feasible(h.iter().map(|x| x / &slack).collect())
        }
        StrictFeasibility::Infeasible(y) => {
            let y: Vec<Q> = y.iter().zip(&scales).map(|(a, s)| a * s).collect();
            let total = y.iter().fold(Q::zero(), |acc, x| acc + x);
            Feasibility::Infeasible(y.iter().map(|x| x / &total).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedVertex {
    pub label: VertexLabel,
    #[serde(serialize_with = "rational::ser_vec", deserialize_with = "rational::de_vec")]
    pub coords: Vec<Q>,
}

/// A polytope `{x : w_i·x <= 1}` with a linear objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub d: usize,
    #[serde(serialize_with = "rational::ser_mat", deserialize_with = "rational::de_mat")]
    pub normals: Vec<Vec<Q>>,
    #[serde(serialize_with = "rational::ser_vec", deserialize_with = "rational::de_vec")]
    pub objective: Vec<Q>,
    pub vertices: Vec<RealizedVertex>,
    /// Vertices by increasing objective value.
    pub order: Vec<VertexLabel>,
    pub gale: GaleConfig,
    #[serde(serialize_with = "rational::ser_vec", deserialize_with = "rational::de_vec")]
    pub heights: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// File name of the run manifest that produced this realization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl Realization {
    pub fn value(&self, label: &VertexLabel) -> Option<Q> {
        self.vertices.iter().find(|v| v.label == *label).map(|v| dot(&self.objective, &v.coords))
    }

    /// The same polytope with the objective negated.
    pub fn negated(&self) -> Self {
        let mut r = self.clone();
        r.objective = r.objective.iter().map(|x| -x).collect();
        r.heights = r.heights.iter().map(|x| -x).collect();
        r.order.reverse();
        r
    }
}

/// Polar dual of the Gale configuration, with objective `-Σ h_i w_i`, whose
/// values increase with the intersection heights.
pub fn reconstruct(params: Params, cfg: &GaleConfig, heights: &[Q]) -> Result<Realization, RealizeError> {
    params.require_corank3()?;
    let n = params.n;
    let rows = vec![
        cfg.vectors.iter().map(|v| v[0].clone()).collect::<Vec<_>>(),
        cfg.vectors.iter().map(|v| v[1].clone()).collect(),
        vec![Q::one(); n],
    ];
    let basis = nullspace(&rows, n);
    if basis.len() != params.d {
        return Err(RealizeError::Reconstruction(format!("dual space has dimension {}", basis.len())));
    }
    let normals: Vec<Vec<Q>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    let objective: Vec<Q> = (0..params.d)
        .map(|r| -normals.iter().zip(heights).fold(Q::zero(), |s, (w, h)| s + &w[r] * h))
        .collect();
    let graph = dual_graph(params)?;
    let mut vertices = Vec::with_capacity(graph.len());
    for label in &graph.vertices {
        let tight: Vec<Vec<Q>> =
            (1..=n as u8).filter(|&i| !label.contains(i)).map(|i| normals[i as usize - 1].clone()).collect();
        let coords = solve(&tight, &vec![Q::one(); params.d])
            .ok_or_else(|| RealizeError::Reconstruction(format!("facets at {label} are dependent")))?;
        vertices.push(RealizedVertex { label: *label, coords });
    }
    let mut order: Vec<(Q, VertexLabel)> = vertices.iter().map(|v| (dot(&objective, &v.coords), v.label)).collect();
    order.sort();
    Ok(Realization {
        d: params.d,
        normals,
        objective,
        vertices,
        order: order.into_iter().map(|(_, l)| l).collect(),
        gale: cfg.clone(),
        heights: heights.to_vec(),
        seed: None,
        manifest: None,
    })
}

/// Why a realization failed verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyFailure {
    #[error("malformed realization: {0}")]
    Malformed(String),
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("face lattice mismatch: {0}")]
    FaceLatticeMismatch(String),
    #[error("unbounded: the normals admit no positive vanishing combination")]
    Unbounded,
    #[error("stored coordinates of {0} are wrong")]
    VertexMismatch(VertexLabel),
    #[error("objective not generic: {0} and {1} tie")]
    ObjectiveNotGeneric(VertexLabel, VertexLabel),
    #[error("order mismatch at position {0}")]
    OrderMismatch(usize),
}

/// Recomputes every vertex as an intersection of `d` facet hyperplanes and
/// checks simplicity, the vertex-facet incidences against the combinatorial
/// model (which fixes the face lattice of a simple polytope), boundedness,
/// the stored data, genericity of the objective and the stored order.
pub fn verify_realization(r: &Realization) -> Result<(), VerifyFailure> {
    let params = Params::corank3(r.d).map_err(|e| VerifyFailure::Malformed(e.to_string()))?;
    let (n, d) = (params.n, params.d);
    if r.normals.len() != n || r.normals.iter().any(|w| w.len() != d) || r.objective.len() != d {
        return Err(VerifyFailure::Malformed("dimensions do not match".into()));
    }
    let graph = dual_graph(params).map_err(|e| VerifyFailure::Malformed(e.to_string()))?;
    let mut found: Vec<(VertexLabel, Vec<Q>)> = Vec::new();
    for subset in subsets(n, d) {
        let a: Vec<Vec<Q>> = subset.iter().map(|&i| r.normals[i].clone()).collect();
        let Some(x) = solve(&a, &vec![Q::one(); d]) else {
            continue;
        };
        let values: Vec<Q> = r.normals.iter().map(|w| dot(w, &x)).collect();
        if values.iter().any(|v| *v > Q::one()) {
            continue;
        }
        let tight: Vec<usize> = (0..n).filter(|&i| values[i].is_one()).collect();
        if tight.len() != d {
            return Err(VerifyFailure::NotSimple(format!("{} facets meet at a vertex", tight.len())));
        }
        let missing: Vec<u8> = (0..n).filter(|i| !tight.contains(i)).map(|i| i as u8 + 1).collect();
        found.push((VertexLabel::new(missing[0], missing[1], missing[2]), x));
    }
    let labels: BTreeSet<VertexLabel> = found.iter().map(|(l, _)| *l).collect();
    let expected: BTreeSet<VertexLabel> = graph.vertices.iter().copied().collect();
    if labels != expected {
        let extra: Vec<String> = labels.difference(&expected).map(|l| l.to_string()).collect();
        let lost: Vec<String> = expected.difference(&labels).map(|l| l.to_string()).collect();
        return Err(VerifyFailure::FaceLatticeMismatch(format!(
            "unexpected vertices [{}], missing [{}]",
            extra.join(" "),
            lost.join(" ")
        )));
    }
    if !is_bounded(&r.normals) {
        return Err(VerifyFailure::Unbounded);
    }
    if r.vertices.len() != found.len() {
        return Err(VerifyFailure::Malformed("vertex count differs".into()));
    }
    for (label, x) in &found {
        match r.vertices.iter().find(|v| v.label == *label) {
            Some(v) if v.coords == *x => {}
            _ => return Err(VerifyFailure::VertexMismatch(*label)),
        }
    }
    let mut values: Vec<(Q, VertexLabel)> = found.iter().map(|(l, x)| (dot(&r.objective, x), *l)).collect();
    values.sort();
    for w in values.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(VerifyFailure::ObjectiveNotGeneric(w[0].1, w[1].1));
        }
    }
    if r.order.len() != values.len() {
        return Err(VerifyFailure::OrderMismatch(r.order.len().min(values.len())));
    }
    for (i, ((_, l), stored)) in values.iter().zip(&r.order).enumerate() {
        if l != stored {
            return Err(VerifyFailure::OrderMismatch(i));
        }
    }
    Ok(())
}

/// Bounded with the origin inside iff `Σ λ_i w_i = 0` for some `λ >= 1`.
fn is_bounded(normals: &[Vec<Q>]) -> bool {
    let d = normals[0].len();
    let m: Vec<Vec<Q>> = (0..d).map(|r| normals.iter().map(|w| w[r].clone()).collect()).collect();
    let b: Vec<Q> = (0..d).map(|r| -normals.iter().fold(Q::zero(), |s, w| s + &w[r])).collect();
    matches!(nonneg_solve(&m, &b), NonnegResult::Solution(_))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Longest directed path in the orientation induced by the objective, with
/// the path itself.
pub fn longest_monotone_path(r: &Realization) -> Result<(usize, Vec<VertexLabel>), RealizeError> {
    let params = Params::corank3(r.d)?;
    let graph = dual_graph(params)?;
    let position: Vec<usize> = graph
        .vertices
        .iter()
        .map(|l| r.order.iter().position(|x| x == l).ok_or(PolytopeError::UnknownLabel(*l)))
        .collect::<Result<_, _>>()?;
    Ok(longest_path_by_rank(&graph, &position))
}

/// Longest path when edges point toward larger `rank`.
pub fn longest_path_by_rank(graph: &DualGraph, rank: &[usize]) -> (usize, Vec<VertexLabel>) {
    let mut by_rank: Vec<usize> = (0..graph.len()).collect();
    by_rank.sort_by_key(|&v| rank[v]);
    let mut best = vec![1usize; graph.len()];
    let mut prev = vec![usize::MAX; graph.len()];
    for &v in &by_rank {
        for &u in &graph.adjacency[v] {
            if rank[u] < rank[v] && best[u] + 1 > best[v] {
                best[v] = best[u] + 1;
                prev[v] = u;
            }
        }
    }
    let Some(mut end) = (0..graph.len()).max_by_key(|&v| (best[v], std::cmp::Reverse(v))) else {
        return (0, Vec::new());
    };
    let mut path = vec![graph.label(end)];
    while prev[end] != usize::MAX {
        end = prev[end];
        path.push(graph.label(end));
    }
    path.reverse();
    (path.len(), path)
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub seed: u64,
    /// Number of random configurations to try.
    pub samples: u64,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found { realization: Box<Realization>, sample: u64 },
    /// Non-conclusive: no sample worked.
    NotFound { samples: u64 },
}

/// Every order in the class of `order`: images under the symmetry group and
/// reversal.
pub fn class_members(params: Params, order: &HamiltonOrder) -> Result<Vec<HamiltonOrder>, RealizeError> {
    Ok(orientation::class_members(order, &symmetry_group(params)?))
}

/// Tries random configurations until one admits heights inducing some order
/// in the class of one of `classes`.
pub fn realize_classes(
    params: Params,
    classes: &[HamiltonOrder],
    opts: &SearchOptions,
) -> Result<SearchOutcome, RealizeError> {
    let graph = dual_graph(params)?;
    for c in classes {
        HamiltonOrder::new(&graph, c.0.clone())?;
    }
    let mut members = Vec::new();
    for c in classes {
        members.extend(class_members(params, c)?);
    }
    members.sort();
    members.dedup();
    let members: Vec<Vec<VertexLabel>> = members.into_iter().map(|m| m.0).collect();
    let attempt = |sample: u64| -> Result<Option<Realization>, RealizeError> {
        let seed = sample_seed(opts.seed, sample);
        let Some(cfg) = sample_config(params, seed)? else {
            return Ok(None);
        };
        let Some((order, h)) = feasible_order(&cfg, &members)? else {
            return Ok(None);
        };
        let mut r = reconstruct(params, &cfg, &h)?;
        r.seed = Some(seed);
        if r.order != order {
            return Err(RealizeError::Reconstruction("realized order differs from the solved one".into()));
        }
        Ok(Some(r))
    };
    run_samples(opts, attempt)
}

/// The first of the sorted `orders` (all of one length) admitting heights
/// that increase along it, with those heights. Orders are walked as a prefix
/// tree, and an infeasible prefix discards every order below it.
pub fn feasible_order(
    cfg: &GaleConfig,
    orders: &[Vec<VertexLabel>],
) -> Result<Option<(Vec<VertexLabel>, Vec<Q>)>, RealizeError> {
    fn walk(
        cfg: &GaleConfig,
        orders: &[Vec<VertexLabel>],
        depth: usize,
    ) -> Result<Option<(Vec<VertexLabel>, Vec<Q>)>, RealizeError> {
        let mut start = 0;
        while start < orders.len() {
            let label = orders[start][depth];
            let end = start + orders[start..].iter().take_while(|o| o[depth] == label).count();
            let group = &orders[start..end];
            let prefix = &group[0][..=depth];
            let feasible = if depth < 2 {
                None
            } else {
                match solve_system(&edge_system(cfg, &path_edges(prefix))?, cfg.len()) {
                    Feasibility::Feasible(h) => Some(Some(h)),
                    Feasibility::Infeasible(_) => Some(None),
                }
            };
            match feasible {
                Some(None) => {}
                Some(Some(h)) if depth + 1 == group[0].len() => return Ok(Some((group[0].clone(), h))),
                _ => {
                    if depth + 1 < group[0].len() {
                        if let Some(found) = walk(cfg, group, depth + 1)? {
                            return Ok(Some(found));
                        }
                    }
                }
            }
            start = end;
        }
        Ok(None)
    }
    if orders.is_empty() {
        return Ok(None);
    }
    walk(cfg, orders, 0)
}

pub fn realize_class(params: Params, class: &HamiltonOrder, opts: &SearchOptions) -> Result<SearchOutcome, RealizeError> {
    realize_classes(params, std::slice::from_ref(class), opts)
}

/// A sample whose rejection budget runs out counts as a failed sample.
fn sample_config(params: Params, seed: u64) -> Result<Option<GaleConfig>, RealizeError> {
    match random_gale_config(params, seed) {
        Ok(cfg) => Ok(Some(cfg)),
        Err(RealizeError::RejectionBudget(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `attempt` on samples `0..opts.samples` in parallel batches and
/// returns the success with the smallest sample index.
fn run_samples<F>(opts: &SearchOptions, attempt: F) -> Result<SearchOutcome, RealizeError>
where
    F: Fn(u64) -> Result<Option<Realization>, RealizeError> + Sync,
{
    if opts.samples == 0 {
        return Err(RealizeError::Budget("sample budget must be positive".into()));
    }
    let batch = (opts.jobs.unwrap_or_else(rayon::current_num_threads).max(1) * 4) as u64;
    let pool = match opts.jobs {
        Some(j) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| RealizeError::Budget(e.to_string()))?,
        ),
        None => None,
    };
    let mut start = 0;
    while start < opts.samples {
        let end = (start + batch).min(opts.samples);
        let work = || (start..end).into_par_iter().map(|s| attempt(s).map(|r| r.map(|r| (s, r)))).collect::<Vec<_>>();
        let results = match &pool {
            Some(p) => p.install(work),
            None => work(),
        };
        for res in results {
            if let Some((sample, realization)) = res? {
                return Ok(SearchOutcome::Found { realization: Box::new(realization), sample });
            }
        }
        start = end;
    }
    Ok(SearchOutcome::NotFound { samples: opts.samples })
}

/// Hill-climbing steps per configuration in `search_monotone`.
pub const CLIMB_STEPS: usize = 2000;

/// Searches for a realization with a monotone path through at least
/// `target` vertices. Per sample, random heights are improved by a
/// floating-point hill climb on the longest monotone path; a long enough
/// path is then confirmed by an exact feasibility system on its edges and an
/// exact reconstruction.
pub fn search_monotone(params: Params, target: usize, opts: &SearchOptions) -> Result<SearchOutcome, RealizeError> {
    let graph = dual_graph(params)?;
    if target < 2 || target > graph.len() {
        return Err(RealizeError::Budget(format!("target {target} outside 2..={}", graph.len())));
    }
    let attempt = |sample: u64| -> Result<Option<Realization>, RealizeError> {
        let seed = sample_seed(opts.seed, sample);
        let Some(cfg) = sample_config(params, seed)? else {
            return Ok(None);
        };
        let path = climb(&graph, &cfg, seed);
        if path.len() < target {
            return Ok(None);
        }
        let system = edge_system(&cfg, &path_edges(&path))?;
        let Feasibility::Feasible(h) = solve_system(&system, cfg.len()) else {
            return Ok(None);
        };
        let Some(h) = make_generic(params, &cfg, h, seed)? else {
            return Ok(None);
        };
        let mut r = reconstruct(params, &cfg, &h)?;
        r.seed = Some(seed);
        Ok((longest_monotone_path(&r)?.0 >= target).then_some(r))
    };
    run_samples(opts, attempt)
}

/// Longest monotone path found by random local search over heights, using
/// floating-point intersection heights.
fn climb(graph: &DualGraph, cfg: &GaleConfig, seed: u64) -> Vec<VertexLabel> {
    let n = cfg.len();
    let f = |x: &Q| x.to_f64().unwrap_or(0.0);
    let rows: Vec<Vec<f64>> = graph
        .vertices
        .iter()
        .map(|l| {
            let [i, j, k] = l.0;
            let det = f(&cfg.bracket(i, j, k));
            let mut row = vec![0.0; n];
            row[k as usize - 1] = f(&cfg.perp(i, j)) / det;
            row[j as usize - 1] = f(&cfg.perp(k, i)) / det;
            row[i as usize - 1] = f(&cfg.perp(j, k)) / det;
            row
        })
        .collect();
    let longest = |h: &[f64]| {
        let z: Vec<f64> = rows.iter().map(|r| r.iter().zip(h).map(|(a, b)| a * b).sum()).collect();
        let mut by_z: Vec<usize> = (0..z.len()).collect();
        by_z.sort_by(|&a, &b| z[a].total_cmp(&z[b]));
        let mut rank = vec![0; z.len()];
        for (pos, &v) in by_z.iter().enumerate() {
            rank[v] = pos;
        }
        longest_path_by_rank(graph, &rank).1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc11b);
    let mut h: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut best = longest(&h);
    for _ in 0..CLIMB_STEPS {
        let step: f64 = rng.gen_range(0.0..1.0);
        let h2: Vec<f64> = h.iter().map(|x| x + step * rng.gen_range(-1.0..1.0)).collect();
        let path = longest(&h2);
        if path.len() >= best.len() {
            h = h2;
            best = path;
        }
    }
    best
}

/// Perturbs heights until all intersection heights are distinct, keeping
/// every height difference that was at least 1 in absolute value.
fn make_generic(params: Params, cfg: &GaleConfig, h: Vec<Q>, seed: u64) -> Result<Option<Vec<Q>>, RealizeError> {
    let graph = dual_graph(params)?;
    let heights = |h: &[Q]| -> Result<Vec<Q>, RealizeError> {
        graph.vertices.iter().map(|l| intersection_height(cfg, h, l).map_err(Into::into)).collect()
    };
    let z0 = heights(&h)?;
    if distinct(&z0) {
        return Ok(Some(h));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let bound = z0.iter().map(|z| z.abs()).fold(Q::one(), |a, b| if b > a { b } else { a });
    let mut eps = Q::one() / (q(1000) * bound);
    for _ in 0..20 {
        let h2: Vec<Q> = h.iter().map(|x| x + &eps * q(rng.gen_range(-1000..=1000)) / q(1000)).collect();
        let z = heights(&h2)?;
        let kept = z0.iter().zip(&z).all(|(a, b)| {
            z0.iter().zip(&z).all(|(c, e)| (c - a).abs() < Q::one() || ((c - a).is_positive() == (e - b).is_positive()))
        });
        if kept && distinct(&z) {
            return Ok(Some(h2));
        }
        eps /= q(10);
    }
    Ok(None)
}

fn distinct(z: &[Q]) -> bool {
    let set: BTreeSet<&Q> = z.iter().collect();
    set.len() == z.len()
}
