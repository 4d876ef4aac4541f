//! Replays a proof tree from scratch.
//!
//! Row signs are recomputed here directly from the coefficient formula and
//! the replayed sign state, and the cancellation conditions are checked on
//! the stored rows, so nothing from the search is trusted.

use thiserror::Error;

use super::proof::{Leaf, Outcome, ProofNode, ProofTree};
use crate::galediagram::{deduce_signs, forced_signs, GaleError, Sign, SignState};
use crate::orientation::HamiltonOrder;
use crate::polytope::{dual_graph, DualGraph, Params, VertexLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    /// The tree does not describe a proof of the expected shape.
    #[error("malformed proof: {0}")]
    Malformed(String),
    /// Well-formed, but some step does not hold.
    #[error("invalid proof: {0}")]
    Invalid(String),
}

/// Validates every branch, deduction, leaf row and cancellation of `tree`.
pub fn check_proof(tree: &ProofTree) -> Result<(), CheckFailure> {
    let params = Params::corank3(tree.d).map_err(|e| CheckFailure::Malformed(e.to_string()))?;
    let graph = dual_graph(params).map_err(|e| CheckFailure::Malformed(e.to_string()))?;
    let order = HamiltonOrder::new(&graph, tree.order.0.clone()).map_err(|e| CheckFailure::Malformed(e.to_string()))?;
    let state = forced_signs(params).map_err(|e| CheckFailure::Malformed(e.to_string()))?;
    let mut rank = vec![usize::MAX; graph.len()];
    for (pos, l) in order.0.iter().enumerate() {
        rank[graph.index_of(l).map_err(|e| CheckFailure::Malformed(e.to_string()))?] = pos;
    }
    check_node(&graph, &rank, &tree.root, &state)
}

fn check_node(graph: &DualGraph, rank: &[usize], node: &ProofNode, state: &SignState) -> Result<(), CheckFailure> {
    match node {
        ProofNode::Leaf(leaf) => check_leaf(graph, rank, leaf, state),
        ProofNode::Branch(b) => {
            if state.get(b.variable).is_some() {
                return Err(CheckFailure::Invalid(format!("branch on {} which is already known", b.variable)));
            }
            let mut values: Vec<Sign> = b.children.iter().map(|c| c.value).collect();
            values.sort();
            if values != [Sign::Neg, Sign::Zero, Sign::Pos] {
                return Err(CheckFailure::Malformed(format!("branch on {} must cover +, 0 and - once each", b.variable)));
            }
            for child in &b.children {
                let replay = match deduce_signs(state, Some((b.variable, child.value))) {
                    Ok(d) => Ok(d),
                    Err(e @ GaleError::Contradiction { .. }) => Err(e),
                    Err(e) => return Err(CheckFailure::Malformed(e.to_string())),
                };
                match (&child.outcome, replay) {
                    (Outcome::Contradiction(_), Err(_)) => {}
                    (Outcome::Contradiction(_), Ok(_)) => {
                        return Err(CheckFailure::Invalid(format!(
                            "{}={} is claimed contradictory but is consistent",
                            b.variable, child.value
                        )))
                    }
                    (Outcome::Proof(_), Err(_)) => {
                        return Err(CheckFailure::Invalid(format!(
                            "{}={} is contradictory but has a subproof",
                            b.variable, child.value
                        )))
                    }
                    (Outcome::Proof(sub), Ok(d)) => {
                        let recorded: Vec<_> = child.deductions.iter().map(|a| (a.0, a.1)).collect();
                        if recorded != d.deduced {
                            return Err(CheckFailure::Invalid(format!(
                                "deductions recorded under {}={} differ from the replay",
                                b.variable, child.value
                            )));
                        }
                        check_node(graph, rank, sub, &d.state)?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn check_leaf(graph: &DualGraph, rank: &[usize], leaf: &Leaf, state: &SignState) -> Result<(), CheckFailure> {
    if !graph.is_vertex(&leaf.zeroed) {
        return Err(CheckFailure::Invalid(format!("zeroed heights {} are not a vertex label", leaf.zeroed)));
    }
    let columns: Vec<u8> = (1..=graph.params.n as u8).filter(|&i| !leaf.zeroed.contains(i)).collect();
    if leaf.columns != columns {
        return Err(CheckFailure::Malformed("columns must be the heights that are not zeroed".into()));
    }
    if leaf.rows.is_empty() {
        return Err(CheckFailure::Malformed("leaf without rows".into()));
    }
    for row in &leaf.rows {
        let (p, q) = (row.edge.0, row.edge.1);
        let (Ok(u), Ok(v)) = (graph.index_of(&p), graph.index_of(&q)) else {
            return Err(CheckFailure::Malformed(format!("{} is not an edge", row.edge.render(false))));
        };
        if !graph.adjacent(u, v) {
            return Err(CheckFailure::Malformed(format!("{} is not an edge", row.edge.render(false))));
        }
        if rank[u] > rank[v] {
            return Err(CheckFailure::Invalid(format!("the order has {q} before {p}")));
        }
        if row.signs.len() != columns.len() {
            return Err(CheckFailure::Malformed(format!("row {} has the wrong width", row.edge.render(false))));
        }
        let fresh = row_signs(state, &p, &q, &columns)
            .ok_or_else(|| CheckFailure::Invalid(format!("row {} has undetermined signs", row.edge.render(false))))?;
        if fresh != row.signs {
            return Err(CheckFailure::Invalid(format!("row {} has the wrong signs", row.edge.render(false))));
        }
    }
    // at most one row with two or more nonzeros; every column empty or one + and one -
    let multi = leaf.rows.iter().filter(|r| r.signs.iter().filter(|&&s| s != Sign::Zero).count() > 1).count();
    if multi > 1 {
        return Err(CheckFailure::Invalid("more than one row with several nonzero entries".into()));
    }
    if leaf.rows.iter().any(|r| r.signs.iter().all(|&s| s == Sign::Zero)) {
        return Err(CheckFailure::Invalid("zero row in a cancellation".into()));
    }
    for c in 0..columns.len() {
        let entries: Vec<Sign> = leaf.rows.iter().map(|r| r.signs[c]).filter(|&s| s != Sign::Zero).collect();
        let ok = entries.is_empty() || (entries.len() == 2 && entries[0] != entries[1]);
        if !ok {
            return Err(CheckFailure::Invalid(format!("column h{} does not cancel", columns[c])));
        }
    }
    Ok(())
}

/// Signs of the coefficients of `z_p - z_q` on `columns`:
/// `h_i: <ij>[jkl][ijk][ijl]`, `h_j: <ij>[kil][ijk][ijl]`, `h_k: <ij>[ijk]`,
/// `h_l: -<ij>[ijl]`, where `{i<j} = p ∩ q`, `p = {i,j,k}`, `q = {i,j,l}`.
fn row_signs(state: &SignState, p: &VertexLabel, q: &VertexLabel, columns: &[u8]) -> Option<Vec<Sign>> {
    let common: Vec<u8> = p.0.iter().copied().filter(|x| q.0.contains(x)).collect();
    let [i, j] = common[..] else { return None };
    let k = *p.0.iter().find(|x| !q.0.contains(x))?;
    let l = *q.0.iter().find(|x| !p.0.contains(x))?;
    let s = |a, b| state.s_of(a, b).map(Sign::to_i8);
    let t = |a, b, c| state.t_of(a, b, c).map(Sign::to_i8);
    let mut out = Vec::with_capacity(columns.len());
    for &c in columns {
        let factors = if c == i {
            vec![Some(1), s(i, j), t(j, k, l), t(i, j, k), t(i, j, l)]
        } else if c == j {
            vec![Some(1), s(i, j), t(k, i, l), t(i, j, k), t(i, j, l)]
        } else if c == k {
            vec![Some(1), s(i, j), t(i, j, k)]
        } else if c == l {
            vec![Some(-1), s(i, j), t(i, j, l)]
        } else {
            vec![Some(0)]
        };
        let v = product(&factors)?;
        out.push(Sign::from_i8(v));
    }
    Some(out)
}

/// Zero if some factor is known to be zero, unknown if some factor is.
fn product(factors: &[Option<i8>]) -> Option<i8> {
    if factors.contains(&Some(0)) {
        return Some(0);
    }
    factors.iter().try_fold(1, |acc, f| f.map(|x| acc * x))
}
