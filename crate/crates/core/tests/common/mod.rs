//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use monobound::certify::{
    build_sign_matrix, Assignment, Branch, Child, DirectedEdge, Leaf, LeafRow, Outcome, ProofNode, ProofTree,
};
use monobound::galediagram::{
    deduce_signs, forced_signs, intersection_height, numeric_signs, GaleConfig, Sign, SignState, Var,
};
use monobound::orientation::{canonical_form, is_aof, is_hk, CanonicalForm, HamiltonOrder, Orientation};
use monobound::polytope::{dual_graph, face_table, symmetry_group, DualGraph, Params, VertexLabel};
use monobound::rational::{q, Q};
use num_traits::{Signed, Zero};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn det3(m: [[&Q; 3]; 3]) -> Q {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Height at the origin of the plane through the three lifted points
/// `(v_a, h_a)`, by Cramer's rule on `z = alpha x + beta y + gamma`.
pub fn plane_height(cfg: &GaleConfig, h: &[Q], label: &VertexLabel) -> Q {
    let one = q(1);
    let pts: Vec<(&Q, &Q, &Q)> = label.0.iter().map(|&a| (cfg.x(a), cfg.y(a), &h[a as usize - 1])).collect();
    let m = [
        [pts[0].0, pts[0].1, &one],
        [pts[1].0, pts[1].1, &one],
        [pts[2].0, pts[2].1, &one],
    ];
    let g = [
        [pts[0].0, pts[0].1, pts[0].2],
        [pts[1].0, pts[1].1, pts[1].2],
        [pts[2].0, pts[2].1, pts[2].2],
    ];
    det3(g) / det3(m)
}

/// Hamilton paths of `graph` by plain depth-first search, kept when the
/// induced orientation is an AOF satisfying Holt–Klee.
pub fn brute_force_classes(d: usize) -> (usize, BTreeSet<CanonicalForm>) {
    let params = Params::corank3(d).unwrap();
    let graph = dual_graph(params).unwrap();
    let faces = face_table(&graph);
    let group = symmetry_group(params).unwrap();
    let mut paths = Vec::new();
    fn extend(graph: &DualGraph, path: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if path.len() == graph.len() {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &w in &graph.adjacency[last] {
            if !used[w] {
                used[w] = true;
                path.push(w);
                extend(graph, path, used, out);
                path.pop();
                used[w] = false;
            }
        }
    }
    for s in 0..graph.len() {
        let mut used = vec![false; graph.len()];
        used[s] = true;
        extend(&graph, &mut vec![s], &mut used, &mut paths);
    }
    let mut accepted = 0;
    let mut classes = BTreeSet::new();
    for p in paths {
        let order = HamiltonOrder(p.iter().map(|&v| graph.label(v)).collect());
        let o = Orientation::from_order(&graph, &order).unwrap();
        if is_aof(&graph, &o, &faces).unwrap() && is_hk(&graph, &o, &faces).unwrap() {
            accepted += 1;
            classes.insert(canonical_form(&order, &group).unwrap());
        }
    }
    (accepted, classes)
}

/// Exact coefficients of `z_p - z_q` over all heights, read off by
/// evaluating the difference on unit height vectors.
pub fn numeric_row(cfg: &GaleConfig, p: &VertexLabel, qq: &VertexLabel) -> Vec<Q> {
    let n = cfg.len();
    (0..n)
        .map(|i| {
            let mut e = vec![Q::zero(); n];
            e[i] = q(1);
            intersection_height(cfg, &e, p).unwrap() - intersection_height(cfg, &e, qq).unwrap()
        })
        .collect()
}

/// The leaf of `tree` reached under the numeric signs of `cfg`, or `None`
/// if `cfg` falls into a contradictory branch.
pub fn leaf_for<'a>(tree: &'a ProofTree, cfg: &GaleConfig) -> Option<&'a Leaf> {
    let signs = numeric_signs(cfg).unwrap();
    let mut node = &tree.root;
    loop {
        match node {
            ProofNode::Leaf(l) => return Some(l),
            ProofNode::Branch(b) => {
                let value = signs.get(b.variable).unwrap();
                let child = b.children.iter().find(|c| c.value == value).unwrap();
                match &child.outcome {
                    Outcome::Proof(n) => node = n,
                    Outcome::Contradiction(_) => return None,
                }
            }
        }
    }
}

/// Checks that the leaf's rows, evaluated numerically on `cfg` with the
/// zeroed columns dropped, have a positive combination summing to zero:
/// the densest row gets multiplier one and every other row the ratio
/// cancelling its column against a row with known multiplier.
pub fn numeric_cancellation(cfg: &GaleConfig, leaf: &Leaf) -> Result<(), String> {
    let rows: Vec<Vec<Q>> = leaf
        .rows
        .iter()
        .map(|r| {
            let full = numeric_row(cfg, &r.edge.0, &r.edge.1);
            leaf.columns.iter().map(|&c| full[c as usize - 1].clone()).collect()
        })
        .collect();
    for (r, row) in leaf.rows.iter().zip(&rows) {
        let numeric: Vec<Sign> = row.iter().map(|x| Sign::from_i8(monobound::rational::signum(x))).collect();
        if numeric != r.signs {
            return Err(format!("row {} has numeric signs {numeric:?}", r.edge.render(false)));
        }
    }
    let width = leaf.columns.len();
    let nonzeros = |r: usize| rows[r].iter().filter(|x| !x.is_zero()).count();
    let pivot = (0..rows.len()).max_by_key(|&r| nonzeros(r)).ok_or("empty leaf")?;
    let mut mult: Vec<Option<Q>> = vec![None; rows.len()];
    mult[pivot] = Some(q(1));
    loop {
        let mut changed = false;
        for c in 0..width {
            let with: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][c].is_zero()).collect();
            if with.len() != 2 {
                continue;
            }
            let (a, b) = (with[0], with[1]);
            match (&mult[a], &mult[b]) {
                (Some(ma), None) => {
                    mult[b] = Some(-(ma * &rows[a][c]) / &rows[b][c]);
                    changed = true;
                }
                (None, Some(mb)) => {
                    mult[a] = Some(-(mb * &rows[b][c]) / &rows[a][c]);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if mult.iter().all(Option::is_none) || mult.iter().flatten().any(|m| !m.is_positive()) {
        return Err("multipliers are not positive".into());
    }
    for c in 0..width {
        let mut sum = Q::zero();
        for (r, row) in rows.iter().enumerate() {
            if let Some(m) = &mult[r] {
                sum += m * &row[c];
            }
        }
        if !sum.is_zero() {
            return Err(format!("column h{} does not vanish", leaf.columns[c]));
        }
    }
    if mult.iter().any(Option::is_none) {
        return Err("some rows get no multiplier".into());
    }
    Ok(())
}

pub fn realized_orientation_is_hk_aof(graph: &DualGraph, order: &[VertexLabel]) -> bool {
    let faces = face_table(graph);
    let rank: Vec<usize> = graph.vertices.iter().map(|l| order.iter().position(|x| x == l).unwrap()).collect();
    let o = Orientation::from_values(graph, &rank);
    is_aof(graph, &o, &faces).unwrap() && is_hk(graph, &o, &faces).unwrap()
}

/// A leaf whose rows are the given edges, with signs read from the matrix
/// under `state`.
pub fn leaf(d: usize, order: &HamiltonOrder, state: &SignState, zeroed: &str, edges: &[&str], zero_based: bool) -> Leaf {
    let graph = dual_graph(Params::corank3(d).unwrap()).unwrap();
    let zeroed = VertexLabel::parse(zeroed, zero_based).unwrap();
    let m = build_sign_matrix(&graph, order, zeroed, state).unwrap();
    let rows = edges
        .iter()
        .map(|e| {
            let edge = DirectedEdge::parse(e, zero_based).unwrap();
            let row = m.rows.iter().find(|r| r.edge == edge).unwrap_or_else(|| panic!("no row {e}"));
            LeafRow { edge, signs: row.signs().unwrap_or_else(|| panic!("row {e} is not determined")) }
        })
        .collect();
    Leaf { zeroed, columns: m.columns.clone(), rows }
}

/// Leaves of a one-branch proof as printed: zeroed label and row edges for
/// the children `+`, `0`, `-`.
pub struct PrintedProof {
    pub class: &'static str,
    pub d: usize,
    pub zero_based: bool,
    pub variable: Var,
    pub leaves: [(&'static str, &'static [&'static str]); 3],
}

pub const PRINTED_PROOFS: [PrintedProof; 3] = [
    PrintedProof {
        class: "NR1_4",
        d: 4,
        zero_based: false,
        variable: Var::T(2, 5, 7),
        leaves: [
            ("345", &["127<125", "145<345", "234<345", "345<347"]),
            ("345", &["567<256", "234<345", "345<347"]),
            ("345", &["567<256", "234<345", "345<456", "345<347"]),
        ],
    },
    PrintedProof {
        class: "NR2_4",
        d: 4,
        zero_based: false,
        variable: Var::T(1, 3, 6),
        leaves: [
            ("145", &["367<167", "145<345", "145<456", "145<147"]),
            ("236", &["367<167", "123<236"]),
            ("236", &["367<167", "123<236", "367<236"]),
        ],
    },
    PrintedProof {
        class: "NR1_6",
        d: 6,
        zero_based: true,
        variable: Var::T(1, 6, 8),
        leaves: [
            ("345", &["078<058", "034<345", "345<347", "458<345"]),
            ("345", &["567<056", "034<345", "345<347"]),
            ("345", &["567<056", "034<345", "345<456", "345<347"]),
        ],
    },
];

pub const BRANCH_VALUES: [Sign; 3] = [Sign::Pos, Sign::Zero, Sign::Neg];

/// The one-branch tree on `variable` with the given leaves, deductions
/// replayed from the forced signs.
pub fn one_branch(
    d: usize,
    order: &HamiltonOrder,
    variable: Var,
    zero_based: bool,
    leaves: &[(&str, &[&str]); 3],
) -> ProofTree {
    let state = forced_signs(Params::corank3(d).unwrap()).unwrap();
    let children = BRANCH_VALUES
        .into_iter()
        .zip(leaves)
        .map(|(value, (zeroed, edges))| match deduce_signs(&state, Some((variable, value))) {
            Err(e) => Child { value, deductions: vec![], outcome: Outcome::Contradiction(e.to_string()) },
            Ok(ded) => Child {
                value,
                deductions: ded.deduced.iter().map(|&(v, s)| Assignment(v, s)).collect(),
                outcome: Outcome::Proof(Box::new(ProofNode::Leaf(leaf(d, order, &ded.state, zeroed, edges, zero_based)))),
            },
        })
        .collect();
    ProofTree { d, order: order.clone(), root: ProofNode::Branch(Branch { variable, children }), manifest: None }
}

pub fn printed_tree(p: &PrintedProof) -> ProofTree {
    let order = monobound::classes::named_class(p.class).unwrap().order().unwrap();
    one_branch(p.d, &order, p.variable, p.zero_based, &p.leaves)
}

/// Printed leaves not found, as is, under the root branch of `tree`.
pub fn missing_printed_leaves(tree: &ProofTree, p: &PrintedProof) -> Vec<String> {
    let ProofNode::Branch(b) = &tree.root else { return vec!["root is not a branch".into()] };
    let mut missing = Vec::new();
    for (value, (zeroed, edges)) in BRANCH_VALUES.into_iter().zip(&p.leaves) {
        let want_zeroed = VertexLabel::parse(zeroed, p.zero_based).unwrap();
        let mut want: Vec<DirectedEdge> = edges.iter().map(|e| DirectedEdge::parse(e, p.zero_based).unwrap()).collect();
        want.sort();
        let found = b.children.iter().find(|c| c.value == value).and_then(|c| match &c.outcome {
            Outcome::Proof(n) => match n.as_ref() {
                ProofNode::Leaf(l) => {
                    let mut got: Vec<DirectedEdge> = l.rows.iter().map(|r| r.edge).collect();
                    got.sort();
                    Some(l.zeroed == want_zeroed && got == want)
                }
                ProofNode::Branch(_) => None,
            },
            Outcome::Contradiction(_) => None,
        });
        if found != Some(true) {
            missing.push(format!("{}={}", b.variable, value));
        }
    }
    missing
}
