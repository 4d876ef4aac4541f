//! Sign-level non-realizability certificates.
//!
//! After an affine change of the lifted diagram three heights `h_a, h_b,
//! h_c` of a vertex-label triangle can be taken to be zero. Every directed
//! edge then gives an inequality whose coefficient signs over the remaining
//! heights follow from the sign algebra. A pivot row together with singleton
//! rows of opposite sign in each of its columns has a positive combination
//! summing to zero whatever the magnitudes, contradicting strictness. When
//! no zeroed triple works outright, the search branches on an unknown sign.

mod check;
mod proof;

use thiserror::Error;

use crate::galediagram::signs::edge_signs;
use crate::galediagram::{deduce_signs, forced_signs, GaleError, Sign, SignState, SignTerm, Var};
use crate::orientation::{HamiltonOrder, OrientationError};
use crate::polytope::{dual_graph, DualGraph, Params, PolytopeError, VertexLabel};

pub use check::{check_proof, CheckFailure};
pub use proof::{Assignment, Branch, Child, DirectedEdge, Leaf, LeafRow, Outcome, ProofNode, ProofTree};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error(transparent)]
    Gale(#[from] GaleError),
    #[error("{0} is not a vertex label")]
    NotALabel(VertexLabel),
    #[error("{0} is already determined")]
    KnownVariable(Var),
}

/// One inequality `z_p - z_q < 0` for a directed edge `p -> q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRow {
    pub edge: DirectedEdge,
    /// Coefficient signs over [`SignMatrix::columns`].
    pub entries: Vec<SignTerm>,
}

impl MatrixRow {
    /// Signs of all entries, if determined.
    pub fn signs(&self) -> Option<Vec<Sign>> {
        self.entries.iter().map(SignTerm::determined).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignMatrix {
    pub zeroed: VertexLabel,
    /// Free height indices, increasing.
    pub columns: Vec<u8>,
    pub rows: Vec<MatrixRow>,
}

/// Rows of a [`SignMatrix`] with a positive combination summing to zero:
/// each nonzero column of `pivot` meets exactly one singleton row of
/// opposite sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cancellation {
    pub pivot: usize,
    pub singletons: Vec<usize>,
}

impl Cancellation {
    pub fn rows(&self) -> Vec<usize> {
        let mut rows = vec![self.pivot];
        rows.extend(&self.singletons);
        rows
    }
}

/// Directed edges of the orientation induced by `order`, lower end first,
/// sorted by label.
pub fn directed_edges(graph: &DualGraph, order: &HamiltonOrder) -> Result<Vec<DirectedEdge>, CertifyError> {
    let rank = order.ranks(graph)?;
    let mut edges: Vec<DirectedEdge> = graph
        .edges
        .iter()
        .map(|&(u, v)| {
            let (lo, hi) = if rank[u] < rank[v] { (u, v) } else { (v, u) };
            DirectedEdge(graph.label(lo), graph.label(hi))
        })
        .collect();
    edges.sort();
    Ok(edges)
}

/// The inequality system of the orientation with the heights of `zeroed`
/// set to zero, simplified under `state`. Rows without a nonzero free entry
/// are dropped.
pub fn build_sign_matrix(
    graph: &DualGraph,
    order: &HamiltonOrder,
    zeroed: VertexLabel,
    state: &SignState,
) -> Result<SignMatrix, CertifyError> {
    if !graph.is_vertex(&zeroed) {
        return Err(CertifyError::NotALabel(zeroed));
    }
    let edges = directed_edges(graph, order)?;
    matrix_for_edges(graph, &edges, zeroed, state)
}

fn matrix_for_edges(
    graph: &DualGraph,
    edges: &[DirectedEdge],
    zeroed: VertexLabel,
    state: &SignState,
) -> Result<SignMatrix, CertifyError> {
    let columns: Vec<u8> = graph.params.indices().filter(|&i| !zeroed.contains(i)).collect();
    let mut rows = Vec::with_capacity(edges.len());
    for edge in edges {
        let (idx, terms) = edge_signs(state, &edge.0, &edge.1)?;
        let mut entries = vec![SignTerm::constant(Sign::Zero); columns.len()];
        for (i, term) in idx.iter().zip(terms) {
            if let Some(c) = columns.iter().position(|x| x == i) {
                entries[c] = term;
            }
        }
        if entries.iter().all(|e| e.determined() == Some(Sign::Zero)) {
            continue;
        }
        rows.push(MatrixRow { edge: *edge, entries });
    }
    Ok(SignMatrix { zeroed, columns, rows })
}

/// The smallest cancellation among fully determined rows (first in row
/// order on ties), or `None`.
pub fn find_cancellation(m: &SignMatrix) -> Option<Cancellation> {
    let signs: Vec<Option<Vec<Sign>>> = m.rows.iter().map(MatrixRow::signs).collect();
    // first singleton row for each (column, sign)
    let mut singleton = vec![[None::<usize>; 2]; m.columns.len()];
    for (r, s) in signs.iter().enumerate() {
        let Some(s) = s else { continue };
        let nonzero: Vec<usize> = (0..s.len()).filter(|&c| s[c] != Sign::Zero).collect();
        if let [c] = nonzero[..] {
            let slot = &mut singleton[c][usize::from(s[c] == Sign::Pos)];
            if slot.is_none() {
                *slot = Some(r);
            }
        }
    }
    let mut best: Option<Cancellation> = None;
    for (r, s) in signs.iter().enumerate() {
        let Some(s) = s else { continue };
        let mut partners = Vec::new();
        let mut complete = true;
        for (c, &sign) in s.iter().enumerate() {
            if sign == Sign::Zero {
                continue;
            }
            match singleton[c][usize::from(sign == Sign::Neg)] {
                Some(p) if p != r => partners.push(p),
                _ => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete || partners.is_empty() {
            continue;
        }
        if best.as_ref().is_none_or(|b| partners.len() < b.singletons.len()) {
            best = Some(Cancellation { pivot: r, singletons: partners });
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    /// Maximum nesting of branches.
    pub depth: usize,
    /// Maximum number of sign assumptions tried in total.
    pub assumption_budget: usize,
    /// Zeroed triples to consider; all vertex labels when `None`.
    pub zeroed: Option<Vec<VertexLabel>>,
    /// Branch on this variable at the root instead of searching.
    pub root_branch: Option<Var>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        Self { depth: 2, assumption_budget: 100_000, zeroed: None, root_branch: None }
    }
}

#[derive(Debug, Clone)]
pub enum ProveOutcome {
    Proved(ProofTree),
    /// Non-conclusive: no certificate within the limits.
    NotFound { assumptions: usize, budget_exhausted: bool },
}

/// Size of a proof: branch nodes, then leaf rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    branches: usize,
    rows: usize,
}

struct Prover<'a> {
    graph: &'a DualGraph,
    edges: Vec<DirectedEdge>,
    zeroed: Vec<VertexLabel>,
    opts: &'a ProveOptions,
    assumptions: usize,
    exhausted: bool,
}

impl Prover<'_> {
    fn best_leaf(&self, state: &SignState) -> Result<Option<(Leaf, Cost)>, CertifyError> {
        let mut best: Option<(Leaf, Cost)> = None;
        for &z in &self.zeroed {
            let m = matrix_for_edges(self.graph, &self.edges, z, state)?;
            let Some(c) = find_cancellation(&m) else { continue };
            let cost = Cost { branches: 0, rows: c.singletons.len() + 1 };
            if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                best = Some((leaf_from(&m, &c), cost));
            }
        }
        Ok(best)
    }

    /// Unknown variables occurring in some matrix, `t` before `s`, most
    /// frequent first.
    fn branch_candidates(&self, state: &SignState) -> Result<Vec<Var>, CertifyError> {
        let mut count: std::collections::BTreeMap<Var, usize> = Default::default();
        for &z in &self.zeroed {
            let m = matrix_for_edges(self.graph, &self.edges, z, state)?;
            for row in &m.rows {
                for e in &row.entries {
                    for v in &e.vars {
                        *count.entry(*v).or_default() += 1;
                    }
                }
            }
        }
        let mut vars: Vec<(Var, usize)> = count.into_iter().collect();
        vars.sort_by(|a, b| {
            let kind = |v: &Var| matches!(v, Var::S(..));
            kind(&a.0).cmp(&kind(&b.0)).then(b.1.cmp(&a.1)).then(a.0.cmp(&b.0))
        });
        Ok(vars.into_iter().map(|(v, _)| v).collect())
    }

    fn solve(&mut self, state: &SignState, depth: usize, root: bool) -> Result<Option<(ProofNode, Cost)>, CertifyError> {
        let forced = if root { self.opts.root_branch } else { None };
        if forced.is_none() {
            if let Some((leaf, cost)) = self.best_leaf(state)? {
                return Ok(Some((ProofNode::Leaf(leaf), cost)));
            }
        }
        if depth == 0 {
            return Ok(None);
        }
        let candidates = match forced {
            Some(v) => {
                if state.get(v).is_some() {
                    return Err(CertifyError::KnownVariable(v));
                }
                vec![v]
            }
            None => self.branch_candidates(state)?,
        };
        let mut best: Option<(ProofNode, Cost)> = None;
        'vars: for var in candidates {
            let mut children = Vec::with_capacity(3);
            let mut cost = Cost { branches: 1, rows: 0 };
            for value in [Sign::Pos, Sign::Zero, Sign::Neg] {
                if self.assumptions >= self.opts.assumption_budget {
                    self.exhausted = true;
                    break 'vars;
                }
                self.assumptions += 1;
                match deduce_signs(state, Some((var, value))) {
                    Err(GaleError::Contradiction { var: v, had, new }) => children.push(Child {
                        value,
                        deductions: Vec::new(),
                        outcome: Outcome::Contradiction(format!("{v} is {had} and {new}")),
                    }),
                    Err(e) => return Err(e.into()),
                    Ok(d) => {
                        let Some((node, c)) = self.solve(&d.state, depth - 1, false)? else {
                            continue 'vars;
                        };
                        cost.branches += c.branches;
                        cost.rows += c.rows;
                        children.push(Child {
                            value,
                            deductions: d.deduced.into_iter().map(|(v, s)| Assignment(v, s)).collect(),
                            outcome: Outcome::Proof(Box::new(node)),
                        });
                    }
                }
            }
            if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                best = Some((ProofNode::Branch(Branch { variable: var, children }), cost));
            }
        }
        Ok(best)
    }
}

fn leaf_from(m: &SignMatrix, c: &Cancellation) -> Leaf {
    let rows = c
        .rows()
        .into_iter()
        .map(|r| {
            let row = &m.rows[r];
            LeafRow { edge: row.edge, signs: row.signs().expect("cancellation rows are determined") }
        })
        .collect();
    Leaf { zeroed: m.zeroed, columns: m.columns.clone(), rows }
}

/// Searches for a certificate that no realization induces `order`.
///
/// The order only needs to be a Hamilton path; the certificate speaks about
/// the edge directions it induces. Among certificates within the depth
/// limit the one with fewest branches and then fewest leaf rows is
/// returned.
pub fn prove_nonrealizable(d: usize, order: &HamiltonOrder, opts: &ProveOptions) -> Result<ProveOutcome, CertifyError> {
    let params = Params::corank3(d)?;
    let graph = dual_graph(params)?;
    let order = HamiltonOrder::new(&graph, order.0.clone())?;
    let zeroed = match &opts.zeroed {
        Some(list) => {
            for z in list {
                if !graph.is_vertex(z) {
                    return Err(CertifyError::NotALabel(*z));
                }
            }
            list.clone()
        }
        None => graph.vertices.clone(),
    };
    let state = forced_signs(params)?;
    let mut prover =
        Prover { graph: &graph, edges: directed_edges(&graph, &order)?, zeroed, opts, assumptions: 0, exhausted: false };
    let found = prover.solve(&state, opts.depth, true)?;
    Ok(match found {
        Some((root, _)) => ProveOutcome::Proved(ProofTree { d, order, root, manifest: None }),
        None => ProveOutcome::NotFound { assumptions: prover.assumptions, budget_exhausted: prover.exhausted },
    })
}
