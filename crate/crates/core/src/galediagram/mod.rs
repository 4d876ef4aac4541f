//! Planar Gale configurations, extended Gale transforms, intersection
//! heights and the edge-difference coefficients of corank-3 polytopes.
//!
//! Vectors are indexed by the ground set `1..=n`. Writing `ab⊥` for
//! `x_a y_b - x_b y_a` and `[abc] = ab⊥ + bc⊥ + ca⊥`, the intersection height
//! of a vertex labelled `{i,j,k}` is
//! `(ij⊥ h_k + ki⊥ h_j + jk⊥ h_i) / [ijk]`.

pub mod signs;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{nullspace, rank, solve};
use crate::polytope::{dual_graph, Params, PolytopeError, VertexLabel};
use crate::rational::{self, Q};

pub use signs::{deduce_signs, forced_signs, numeric_signs, Deduction, Sign, SignState, SignTerm, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaleError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("triangle {0:?} is degenerate")]
    Degenerate([u8; 3]),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(VertexLabel, VertexLabel),
    #[error("sign algebra needs even d, got d={0}")]
    OddDimension(usize),
    #[error("contradiction on {var}: {had} vs {new}")]
    Contradiction { var: Var, had: Sign, new: Sign },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("transform: {0}")]
    Transform(String),
}

/// Vectors `v_1..v_n` in the plane with exact coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaleConfig {
    #[serde(serialize_with = "rational::ser_mat", deserialize_with = "rational::de_mat")]
    pub vectors: Vec<Vec<Q>>,
}

impl GaleConfig {
    pub fn new(vectors: Vec<[Q; 2]>) -> Self {
        Self { vectors: vectors.into_iter().map(|[x, y]| vec![x, y]).collect() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn x(&self, i: u8) -> &Q {
        &self.vectors[i as usize - 1][0]
    }

    pub fn y(&self, i: u8) -> &Q {
        &self.vectors[i as usize - 1][1]
    }

    /// `ab⊥ = x_a y_b - x_b y_a`.
    pub fn perp(&self, a: u8, b: u8) -> Q {
        self.x(a) * self.y(b) - self.x(b) * self.y(a)
    }

    /// `[abc] = ab⊥ + bc⊥ + ca⊥`, twice the signed area of the triangle.
    pub fn bracket(&self, a: u8, b: u8, c: u8) -> Q {
        self.perp(a, b) + self.perp(b, c) + self.perp(c, a)
    }

    /// Whether the origin lies strictly inside the triangle `abc`.
    pub fn encloses_origin(&self, a: u8, b: u8, c: u8) -> bool {
        let s = [self.perp(a, b), self.perp(b, c), self.perp(c, a)];
        s.iter().all(Signed::is_positive) || s.iter().all(Signed::is_negative)
    }

    pub fn reflected(&self) -> Self {
        Self { vectors: self.vectors.iter().map(|v| vec![-v[0].clone(), v[1].clone()]).collect() }
    }

    pub fn is_balanced(&self) -> bool {
        (0..2).all(|c| self.vectors.iter().fold(Q::zero(), |s, v| s + &v[c]).is_zero())
    }

    /// Checks that the configuration is a Gale diagram of the polar of
    /// `C_d(d+3)` in the labelling convention: general position, origin
    /// inside exactly the vertex-label triangles, each of them anticlockwise.
    pub fn validate(&self, params: Params) -> Result<(), GaleError> {
        params.require_corank3()?;
        let n = params.n as u8;
        if self.len() != params.n {
            return Err(GaleError::Invalid(format!("{} vectors for n={}", self.len(), params.n)));
        }
        if self.vectors.iter().any(|v| v.len() != 2) {
            return Err(GaleError::Invalid("vectors must be planar".into()));
        }
        let graph = dual_graph(params)?;
        for a in 1..=n {
            for b in a + 1..=n {
                if self.perp(a, b).is_zero() {
                    return Err(GaleError::Invalid(format!("vectors {a} and {b} are parallel")));
                }
                for c in b + 1..=n {
                    if self.bracket(a, b, c).is_zero() {
                        return Err(GaleError::Degenerate([a, b, c]));
                    }
                    let label = VertexLabel::new(a, b, c);
                    if self.encloses_origin(a, b, c) != graph.is_vertex(&label) {
                        return Err(GaleError::Invalid(format!("origin containment wrong for {label}")));
                    }
                    if graph.is_vertex(&label) && !self.bracket(a, b, c).is_positive() {
                        return Err(GaleError::Invalid(format!("triangle {label} is clockwise")));
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per vector: `i x y` with exact rationals.
    pub fn to_text(&self) -> String {
        self.vectors
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{} {} {}\n", i + 1, rational::to_text(&v[0]), rational::to_text(&v[1])))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self, GaleError> {
        let mut vectors = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [idx, x, y] = parts[..] else {
                return Err(GaleError::Parse(format!("expected `i x y`, got {line:?}")));
            };
            if idx.parse::<usize>().ok() != Some(vectors.len() + 1) {
                return Err(GaleError::Parse(format!("index out of sequence in {line:?}")));
            }
            let coord = |s: &str| rational::parse(s).ok_or_else(|| GaleError::Parse(format!("bad rational {s:?}")));
            vectors.push(vec![coord(x)?, coord(y)?]);
        }
        Ok(Self { vectors })
    }
}

impl fmt::Display for GaleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A planar configuration lifted by heights `h_i`; the objective vector is
/// implicitly `(0, 0, -1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedGaleConfig {
    pub base: GaleConfig,
    #[serde(serialize_with = "rational::ser_vec", deserialize_with = "rational::de_vec")]
    pub heights: Vec<Q>,
}

impl ExtendedGaleConfig {
    pub fn intersection_height(&self, label: &VertexLabel) -> Result<Q, GaleError> {
        intersection_height(&self.base, &self.heights, label)
    }
}

/// Intersection height of the vertex `{i,j,k}`: where the plane through the
/// three lifted points meets the vertical axis.
pub fn intersection_height(cfg: &GaleConfig, heights: &[Q], label: &VertexLabel) -> Result<Q, GaleError> {
    let [i, j, k] = label.0;
    let det = cfg.bracket(i, j, k);
    if det.is_zero() {
        return Err(GaleError::Degenerate(label.0));
    }
    let h = |a: u8| &heights[a as usize - 1];
    let num = cfg.perp(i, j) * h(k) + cfg.perp(k, i) * h(j) + cfg.perp(j, k) * h(i);
    Ok(num / det)
}

/// Coefficients of `z_{ijk} - z_{ijl}` in the heights `h_i, h_j, h_k, h_l`,
/// with `{i, j}` the shared pair, `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCoefficients {
    /// `[i, j, k, l]`
    pub columns: [u8; 4],
    pub values: [Q; 4],
}

impl EdgeCoefficients {
    pub fn dot(&self, heights: &[Q]) -> Q {
        self.columns.iter().zip(&self.values).fold(Q::zero(), |s, (&c, v)| s + v * &heights[c as usize - 1])
    }
}

/// Splits an edge `p -> q` into `(i, j, k, l)` with `p = {i,j,k}`,
/// `q = {i,j,l}`, `i < j`.
pub fn edge_indices(p: &VertexLabel, q: &VertexLabel) -> Result<[u8; 4], GaleError> {
    if p.shared(q) != 2 {
        return Err(GaleError::NotAdjacent(*p, *q));
    }
    let common: Vec<u8> = p.0.iter().copied().filter(|&x| q.contains(x)).collect();
    let k = p.0.iter().copied().find(|&x| !q.contains(x)).expect("labels differ");
    let l = q.0.iter().copied().find(|&x| !p.contains(x)).expect("labels differ");
    Ok([common[0], common[1], k, l])
}

pub fn edge_coefficients(cfg: &GaleConfig, p: &VertexLabel, q: &VertexLabel) -> Result<EdgeCoefficients, GaleError> {
    let [i, j, k, l] = edge_indices(p, q)?;
    let ijk = cfg.bracket(i, j, k);
    let ijl = cfg.bracket(i, j, l);
    if ijk.is_zero() {
        return Err(GaleError::Degenerate(p.0));
    }
    if ijl.is_zero() {
        return Err(GaleError::Degenerate(q.0));
    }
    let ij = cfg.perp(i, j);
    let both = &ijk * &ijl;
    let values = [
        &ij * cfg.bracket(j, k, l) / &both,
        &ij * cfg.bracket(k, i, l) / &both,
        &ij / &ijk,
        -(&ij / &ijl),
    ];
    Ok(EdgeCoefficients { columns: [i, j, k, l], values })
}

/// Extended Gale transform of facet normals `w_1..w_n` (the polytope is
/// `{x : w_i·x <= 1}`) and an objective point `g`.
///
/// Rows of the result span the affine dependencies of `(w_1, .., w_n, g)`,
/// normalised so the objective's column is `(0, .., 0, -1)`. Column `i` is
/// then `(b_i, h_i)` with base part `b_i` of dimension `n - d - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedTransform {
    pub base: Vec<Vec<Q>>,
    pub heights: Vec<Q>,
}

pub fn extended_gale_transform(normals: &[Vec<Q>], objective: &[Q]) -> Result<ExtendedTransform, GaleError> {
    let n = normals.len();
    let d = objective.len();
    if normals.iter().any(|w| w.len() != d) {
        return Err(GaleError::Transform("normals and objective differ in dimension".into()));
    }
    if n <= d + 1 {
        return Err(GaleError::Transform(format!("{n} normals in dimension {d} have no Gale dual")));
    }
    let mut homog: Vec<Vec<Q>> = (0..d)
        .map(|r| normals.iter().map(|w| w[r].clone()).chain([objective[r].clone()]).collect())
        .collect();
    homog.push(vec![Q::one(); n + 1]);
    if rank(&homog[..d].iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>()) < d {
        return Err(GaleError::Transform("normals do not span".into()));
    }
    if !origin_is_interior(normals) {
        return Err(GaleError::Transform("origin is not interior".into()));
    }
    let deps = nullspace(&homog, n + 1);
    if deps.len() != n - d {
        return Err(GaleError::Transform(format!("dependency space has dimension {}", deps.len())));
    }
    let Some(p) = deps.iter().position(|r| !r[n].is_zero()) else {
        return Err(GaleError::Transform("objective column vanishes".into()));
    };
    let pivot = &deps[p];
    let scale = -pivot[n].recip();
    let mut rows: Vec<Vec<Q>> = deps
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != p)
        .map(|(_, row)| {
            let f = &row[n] / &pivot[n];
            row.iter().zip(pivot).map(|(x, y)| x - &f * y).collect()
        })
        .collect();
    rows.push(pivot.iter().map(|x| x * &scale).collect());
    let m = rows.len() - 1;
    let base = (0..n).map(|i| rows[..m].iter().map(|r| r[i].clone()).collect()).collect();
    let heights = (0..n).map(|i| rows[m][i].clone()).collect();
    Ok(ExtendedTransform { base, heights })
}

/// The origin is interior iff the normals positively span, i.e. some strictly
/// positive combination vanishes.
fn origin_is_interior(normals: &[Vec<Q>]) -> bool {
    use crate::lp::{nonneg_solve, NonnegResult};
    // lambda_i = 1 + mu_i with mu >= 0 and sum lambda_i w_i = 0
    let d = normals[0].len();
    let m: Vec<Vec<Q>> = (0..d).map(|r| normals.iter().map(|w| w[r].clone()).collect()).collect();
    let b: Vec<Q> = (0..d).map(|r| -normals.iter().fold(Q::zero(), |s, w| s + &w[r])).collect();
    matches!(nonneg_solve(&m, &b), NonnegResult::Solution(_))
}

impl ExtendedTransform {
    /// Intersection height through the simplex of lifted points indexed by
    /// `support`: the last coordinate of its meeting point with the vertical
    /// axis.
    pub fn intersection_height(&self, support: &[u8]) -> Result<Q, GaleError> {
        let m = self.base[0].len();
        if support.len() != m + 1 {
            return Err(GaleError::Transform(format!("need {} points, got {}", m + 1, support.len())));
        }
        // barycentric weights of the origin in the base simplex
        let mut a: Vec<Vec<Q>> =
            (0..m).map(|r| support.iter().map(|&i| self.base[i as usize - 1][r].clone()).collect()).collect();
        a.push(vec![Q::one(); m + 1]);
        let mut b = vec![Q::zero(); m];
        b.push(Q::one());
        let lambda = solve(&a, &b).ok_or_else(|| GaleError::Transform(format!("degenerate simplex {support:?}")))?;
        Ok(support.iter().zip(&lambda).fold(Q::zero(), |s, (&i, l)| s + l * &self.heights[i as usize - 1]))
    }

    /// The planar configuration plus heights, for corank 3, reflected if
    /// necessary so the vertex-label triangles are anticlockwise.
    pub fn planar(&self, params: Params) -> Result<ExtendedGaleConfig, GaleError> {
        params.require_corank3()?;
        if self.base.len() != params.n || self.base.iter().any(|b| b.len() != 2) {
            return Err(GaleError::Transform("not a planar transform of matching size".into()));
        }
        let mut base = GaleConfig { vectors: self.base.clone() };
        let graph = dual_graph(params)?;
        let [a, b, c] = graph.vertices[0].0;
        if base.bracket(a, b, c).is_negative() {
            base = base.reflected();
        }
        Ok(ExtendedGaleConfig { base, heights: self.heights.clone() })
    }
}
