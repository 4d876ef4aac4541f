use std::fmt::{self, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::galediagram::{Sign, Var};
use crate::orientation::HamiltonOrder;
use crate::polytope::VertexLabel;

/// `p -> q`, written `p<q`: `p` comes first in the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge(pub VertexLabel, pub VertexLabel);

impl DirectedEdge {
    pub fn render(&self, zero_based: bool) -> String {
        format!("{}<{}", self.0.render(zero_based), self.1.render(zero_based))
    }

    pub fn parse(text: &str, zero_based: bool) -> Option<Self> {
        let (a, b) = text.split_once('<')?;
        Some(Self(VertexLabel::parse(a.trim(), zero_based).ok()?, VertexLabel::parse(b.trim(), zero_based).ok()?))
    }
}

impl Serialize for DirectedEdge {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render(false))
    }
}

impl<'de> Deserialize<'de> for DirectedEdge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s, false).ok_or_else(|| serde::de::Error::custom(format!("bad edge {s:?}")))
    }
}

/// `var = sign`, written `[157]=-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment(pub Var, pub Sign);

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}={}", self.0, self.1))
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("bad assignment {s:?}"));
        let (v, sign) = s.split_once('=').ok_or_else(bad)?;
        match (Var::parse(v, false), Sign::parse(sign)) {
            (Some((var, 1)), Some(sign)) => Ok(Assignment(var, sign)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafRow {
    pub edge: DirectedEdge,
    #[serde(serialize_with = "ser_signs", deserialize_with = "de_signs")]
    pub signs: Vec<Sign>,
}

fn ser_signs<S: Serializer>(signs: &[Sign], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&signs.iter().map(|x| x.symbol()).collect::<String>())
}

fn de_signs<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Sign>, D::Error> {
    let s = String::deserialize(d)?;
    s.chars()
        .map(|c| Sign::parse(&c.to_string()).ok_or_else(|| serde::de::Error::custom(format!("bad sign {c:?}"))))
        .collect()
}

/// A cancellation: heights of `zeroed` set to zero, `rows` over `columns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub zeroed: VertexLabel,
    pub columns: Vec<u8>,
    pub rows: Vec<LeafRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub variable: Var,
    /// One child per value `+`, `0`, `-`.
    pub children: Vec<Child>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Child {
    pub value: Sign,
    /// What the deduction rules add to the assumption.
    pub deductions: Vec<Assignment>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The assumption contradicts the known signs.
    Contradiction(String),
    Proof(Box<ProofNode>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofNode {
    Leaf(Leaf),
    Branch(Branch),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofTree {
    pub d: usize,
    pub order: HamiltonOrder,
    pub root: ProofNode,
    /// File name of the run manifest that produced this proof.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl ProofNode {
    fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a ProofNode)) {
        f(self);
        if let ProofNode::Branch(b) = self {
            for c in &b.children {
                if let Outcome::Proof(n) = &c.outcome {
                    n.visit(f);
                }
            }
        }
    }
}

impl ProofTree {
    pub fn branch_count(&self) -> usize {
        let mut n = 0;
        self.root.visit(&mut |node| n += usize::from(matches!(node, ProofNode::Branch(_))));
        n
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        self.root.visit(&mut |node| {
            if let ProofNode::Leaf(l) = node {
                out.push(l);
            }
        });
        out
    }

    pub fn leaf_rows(&self) -> usize {
        self.leaves().iter().map(|l| l.rows.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof trees serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable tables.
    pub fn render(&self, zero_based: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "order: {}", self.order.to_text(zero_based));
        render_node(&self.root, zero_based, 0, &mut out);
        out
    }
}

fn render_node(node: &ProofNode, zero_based: bool, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let idx = |i: u8| if zero_based { i - 1 } else { i };
    match node {
        ProofNode::Leaf(leaf) => {
            let cols: Vec<String> = leaf.columns.iter().map(|&c| format!("h{}", idx(c))).collect();
            let _ = writeln!(out, "{pad}zero heights of {}; rows over {}:", leaf.zeroed.render(zero_based), cols.join(" "));
            for row in &leaf.rows {
                let signs: Vec<String> = row.signs.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "{pad}  {:>9}: {}", row.edge.render(zero_based), signs.join(" "));
            }
        }
        ProofNode::Branch(b) => {
            let _ = writeln!(out, "{pad}branch on {}", b.variable.render(zero_based));
            for c in &b.children {
                let deduced: Vec<String> =
                    c.deductions.iter().map(|a| format!("{}={}", a.0.render(zero_based), a.1)).collect();
                let extra = if deduced.is_empty() { String::new() } else { format!(" (so {})", deduced.join(", ")) };
                match &c.outcome {
                    Outcome::Contradiction(why) => {
                        let _ = writeln!(out, "{pad}{} = {}: impossible, {why}", b.variable.render(zero_based), c.value);
                    }
                    Outcome::Proof(n) => {
                        let _ = writeln!(out, "{pad}{} = {}{extra}:", b.variable.render(zero_based), c.value);
                        render_node(n, zero_based, indent + 1, out);
                    }
                }
            }
        }
    }
}

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}
