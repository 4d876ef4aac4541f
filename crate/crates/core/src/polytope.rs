//! Combinatorics of cyclic polytopes `C_d(n)` and of the simple duals
//! `C_d(d+3)^Δ`.
//!
//! Facets of `C_d(n)` come from Gale's evenness criterion. A vertex of the
//! dual is named by the 3-set of facet indices it does *not* lie on, so two
//! vertices span an edge exactly when their labels share two indices.
//! Indices are 1-based throughout; 0-based rendering only affects printing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Bitmask over vertex indices of a [`DualGraph`].
pub type VertexMask = u64;

/// Largest dual graph representable by [`VertexMask`].
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("invalid parameters d={d}, n={n}: need d >= 2 and n > d")]
    InvalidParameters { d: usize, n: usize },
    #[error("operation needs n = d + 3, got d={d}, n={n}")]
    NotCorankThree { d: usize, n: usize },
    #[error("dual graph with {0} vertices exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("{0:?} is not a vertex label")]
    UnknownLabel(VertexLabel),
    #[error("malformed label text {0:?}")]
    BadLabelText(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub d: usize,
    pub n: usize,
}

impl Params {
    pub fn new(d: usize, n: usize) -> Result<Self, PolytopeError> {
        // the index type is u8 and facet sets are u32 masks
        if d < 2 || n <= d || n > 31 {
            return Err(PolytopeError::InvalidParameters { d, n });
        }
        Ok(Self { d, n })
    }

    /// The main case of interest, `n = d + 3`.
    pub fn corank3(d: usize) -> Result<Self, PolytopeError> {
        Self::new(d, d + 3)
    }

    pub fn require_corank3(&self) -> Result<(), PolytopeError> {
        if self.n != self.d + 3 {
            return Err(PolytopeError::NotCorankThree { d: self.d, n: self.n });
        }
        Ok(())
    }

    pub fn indices(&self) -> impl Iterator<Item = u8> {
        1..=self.n as u8
    }
}

/// A facet of `C_d(n)`, as its sorted vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetSet {
    pub members: Vec<u8>,
}

impl FacetSet {
    pub fn mask(&self) -> u32 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }
}

impl fmt::Display for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A vertex of `C_d(d+3)^Δ`: the sorted 3-set of facets not containing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel(pub [u8; 3]);

impl VertexLabel {
    pub fn new(a: u8, b: u8, c: u8) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Self(v)
    }

    pub fn contains(&self, i: u8) -> bool {
        self.0.contains(&i)
    }

    pub fn mask(&self) -> u32 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn shared(&self, other: &VertexLabel) -> usize {
        (self.mask() & other.mask()).count_ones() as usize
    }

    /// Applies an index permutation and re-sorts.
    pub fn permuted(&self, perm: &Permutation) -> Self {
        let [a, b, c] = self.0;
        Self::new(perm.image(a), perm.image(b), perm.image(c))
    }

    /// Renders as concatenated digits (`"145"`), or braces when an index has
    /// two digits. `zero_based` shifts every index down by one.
    pub fn render(&self, zero_based: bool) -> String {
        let shift = u8::from(zero_based);
        let v: Vec<u8> = self.0.iter().map(|&i| i - shift).collect();
        if v.iter().all(|&i| i < 10) {
            v.iter().map(|i| i.to_string()).collect()
        } else {
            let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        }
    }

    /// Parses `"145"` or `"{1,4,5}"`.
    pub fn parse(text: &str, zero_based: bool) -> Result<Self, PolytopeError> {
        let t = text.trim();
        let bad = || PolytopeError::BadLabelText(text.to_string());
        let raw: Vec<u32> = if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            inner
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        if raw.len() != 3 {
            return Err(bad());
        }
        let shift = u32::from(zero_based);
        let mut v = [0u8; 3];
        for (slot, x) in v.iter_mut().zip(&raw) {
            let idx = x + shift;
            if idx == 0 || idx > 31 {
                return Err(bad());
            }
            *slot = idx as u8;
        }
        let label = Self::new(v[0], v[1], v[2]);
        if label.0[0] == label.0[1] || label.0[1] == label.0[2] {
            return Err(bad());
        }
        Ok(label)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Serialize for VertexLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render(false))
    }
}

impl<'de> Deserialize<'de> for VertexLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexLabel::parse(&s, false).map_err(serde::de::Error::custom)
    }
}

fn satisfies_evenness(mask: u32, n: usize) -> bool {
    // consecutive non-members suffice: the counts for wider pairs are sums
    let non_members: Vec<usize> = (1..=n).filter(|&i| mask & (1 << i) == 0).collect();
    non_members.windows(2).all(|w| {
        let between = (w[0] + 1..w[1]).filter(|&i| mask & (1 << i) != 0).count();
        between % 2 == 0
    })
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n {
            if n - i + 1 < left {
                break;
            }
            rec(i + 1, n, left - 1, acc | 1 << i, out);
        }
    }
    rec(1, n, k, 0, &mut out);
    out
}

fn mask_members(mask: u32) -> Vec<u8> {
    (0..32u8).filter(|&i| mask & (1 << i) != 0).collect()
}

/// All facets of `C_d(n)` in lexicographic order.
pub fn cyclic_facets(params: Params) -> Result<Vec<FacetSet>, PolytopeError> {
    let Params { d, n } = Params::new(params.d, params.n)?;
    let mut facets: Vec<FacetSet> = subsets_of_size(n, d)
        .into_iter()
        .filter(|&m| satisfies_evenness(m, n))
        .map(|m| FacetSet { members: mask_members(m) })
        .collect();
    facets.sort();
    Ok(facets)
}

/// Graph of `C_d(d+3)^Δ`.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub params: Params,
    /// Sorted vertex labels; a vertex is referred to by its position here.
    pub vertices: Vec<VertexLabel>,
    /// Edges `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub adjacency: Vec<Vec<usize>>,
    pub adjacency_mask: Vec<VertexMask>,
    index: HashMap<VertexLabel, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl DualGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn full_mask(&self) -> VertexMask {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn index_of(&self, label: &VertexLabel) -> Result<usize, PolytopeError> {
        self.index.get(label).copied().ok_or(PolytopeError::UnknownLabel(*label))
    }

    pub fn is_vertex(&self, label: &VertexLabel) -> bool {
        self.index.contains_key(label)
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.vertices[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency_mask[u] & (1 << v) != 0
    }

    /// Index into `edges` of the unordered edge `{u, v}`.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    /// One edge per line: `1,4,5 1,4,7`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            let fmt_label = |l: &VertexLabel| {
                l.0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            };
            s.push_str(&format!("{} {}\n", fmt_label(&self.vertices[u]), fmt_label(&self.vertices[v])));
        }
        s
    }
}

/// Builds the dual graph of `C_d(d+3)`.
pub fn dual_graph(params: Params) -> Result<DualGraph, PolytopeError> {
    params.require_corank3()?;
    let facets = cyclic_facets(params)?;
    let all: u32 = params.indices().fold(0, |m, i| m | 1 << i);
    let mut vertices: Vec<VertexLabel> = facets
        .iter()
        .map(|f| {
            let c = mask_members(all & !f.mask());
            VertexLabel::new(c[0], c[1], c[2])
        })
        .collect();
    vertices.sort();
    if vertices.len() > MAX_VERTICES {
        return Err(PolytopeError::TooLarge(vertices.len()));
    }
    let index: HashMap<VertexLabel, usize> = vertices.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut adjacency_mask = vec![0u64; vertices.len()];
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            if vertices[u].shared(&vertices[v]) == 2 {
                edges.push((u, v));
                adjacency[u].push(v);
                adjacency[v].push(u);
                adjacency_mask[u] |= 1 << v;
                adjacency_mask[v] |= 1 << u;
            }
        }
    }
    let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    Ok(DualGraph { params, vertices, edges, adjacency, adjacency_mask, index, edge_index })
}

/// A face of the dual polytope: the vertices avoiding every index of `defining`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub defining: Vec<u8>,
    pub vertices: Vec<usize>,
    pub mask: VertexMask,
}

/// Faces of `C_d(d+3)^Δ` of dimension 3..=d, plus the derived 2-faces.
#[derive(Debug, Clone)]
pub struct FaceTable {
    pub d: usize,
    by_dim: BTreeMap<usize, Vec<Face>>,
    two_faces: Vec<Face>,
}

impl FaceTable {
    /// Faces of dimension `k`, for `3 <= k <= d`; empty otherwise.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.by_dim.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The 2-faces, derived the same way from defining sets of size `d - 2`.
    pub fn two_faces(&self) -> &[Face] {
        &self.two_faces
    }

    /// Every stored face of dimension 2..=d.
    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.two_faces.iter().chain(self.by_dim.values().flatten())
    }
}

fn faces_of_dim(graph: &DualGraph, k: usize) -> Vec<Face> {
    let Params { d, n } = graph.params;
    let mut seen: BTreeSet<VertexMask> = BTreeSet::new();
    let mut out = Vec::new();
    for s in subsets_of_size(n, d - k) {
        let mut mask = 0u64;
        for (i, l) in graph.vertices.iter().enumerate() {
            if l.mask() & s == 0 {
                mask |= 1 << i;
            }
        }
        if mask == 0 || !seen.insert(mask) {
            continue;
        }
        let vertices = (0..graph.len()).filter(|&i| mask & (1 << i) != 0).collect();
        out.push(Face { dim: k, defining: mask_members(s), vertices, mask });
    }
    out
}

pub fn face_table(graph: &DualGraph) -> FaceTable {
    let d = graph.params.d;
    let by_dim = (3..=d).map(|k| (k, faces_of_dim(graph, k))).collect();
    let two_faces = if d >= 2 { faces_of_dim(graph, 2) } else { Vec::new() };
    FaceTable { d, by_dim, two_faces }
}

/// A permutation of the ground set `1..=n`; `map[i - 1]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { map: (1..=n as u8).collect() }
    }

    pub fn from_images(map: Vec<u8>) -> Option<Self> {
        let n = map.len();
        let mut seen = vec![false; n + 1];
        for &x in &map {
            if x == 0 || x as usize > n || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Self { map })
    }

    pub fn image(&self, i: u8) -> u8 {
        self.map[i as usize - 1]
    }

    pub fn images(&self) -> &[u8] {
        &self.map
    }

    pub fn compose(&self, then: &Permutation) -> Permutation {
        Permutation { map: self.map.iter().map(|&x| then.image(x)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            map[x as usize - 1] = i as u8 + 1;
        }
        Permutation { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }
}

/// Index permutations preserving the facet family of `C_d(n)`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    pub perms: Vec<Permutation>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// For each permutation, the induced map on vertex indices of `graph`.
    pub fn vertex_maps(&self, graph: &DualGraph) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|p| {
                graph
                    .vertices
                    .iter()
                    .map(|l| graph.index_of(&l.permuted(p)).expect("symmetry maps labels to labels"))
                    .collect()
            })
            .collect()
    }

    /// Orbits of dual-graph vertices, each sorted, ordered by least member.
    pub fn vertex_orbits(&self, graph: &DualGraph) -> Vec<Vec<usize>> {
        let maps = self.vertex_maps(graph);
        let mut seen = vec![false; graph.len()];
        let mut orbits = Vec::new();
        for v in 0..graph.len() {
            if seen[v] {
                continue;
            }
            let orbit: BTreeSet<usize> = maps.iter().map(|m| m[v]).collect();
            for &w in &orbit {
                seen[w] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }
}

/// Finds every index permutation mapping facets of `C_d(n)` to facets, by
/// backtracking: each partial assignment must keep every fully-mapped
/// co-facet (complement of a facet) inside the co-facet family.
pub fn symmetry_group(params: Params) -> Result<SymmetryGroup, PolytopeError> {
    let facets = cyclic_facets(params)?;
    let n = params.n;
    let all: u32 = params.indices().fold(0, |m, i| m | 1 << i);
    // Co-facets are smaller (n - d indices) so partial maps get tested sooner.
    let cofacets: Vec<u32> = facets.iter().map(|f| all & !f.mask()).collect();
    let family: BTreeSet<u32> = cofacets.iter().copied().collect();

    let mut perms = Vec::new();
    let mut image = vec![0u8; n + 1];
    let mut used = 0u32;
    fn rec(
        i: usize,
        n: usize,
        image: &mut [u8],
        used: &mut u32,
        cofacets: &[u32],
        family: &BTreeSet<u32>,
        out: &mut Vec<Permutation>,
    ) {
        if i > n {
            out.push(Permutation { map: image[1..].to_vec() });
            return;
        }
        for target in 1..=n as u8 {
            if *used & (1 << target) != 0 {
                continue;
            }
            image[i] = target;
            *used |= 1 << target;
            let assigned: u32 = ((1u32 << (i + 1)) - 1) & !1;
            let ok = cofacets.iter().filter(|&&c| c & !assigned == 0 && c & (1 << i) != 0).all(|&c| {
                let mapped = mask_members(c).iter().fold(0u32, |m, &x| m | 1 << image[x as usize]);
                family.contains(&mapped)
            });
            if ok {
                rec(i + 1, n, image, used, cofacets, family, out);
            }
            *used &= !(1 << target);
        }
    }
    rec(1, n, &mut image, &mut used, &cofacets, &family, &mut perms);
    perms.sort();
    Ok(SymmetryGroup { perms })
}

/// Closed-form vertex count of `C_d(n)^Δ` for `n = d + 3`.
pub fn upper_bound_vertices(d: usize) -> usize {
    // number of 3-sets {a<b<c} of [d+3] with b-a and c-b odd
    let n = d + 3;
    let mut count = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                if (b - a) % 2 == 1 && (c - b) % 2 == 1 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// One facet per line, comma-separated.
pub fn facets_to_text(facets: &[FacetSet]) -> String {
    facets.iter().map(|f| format!("{f}\n")).collect()
}
