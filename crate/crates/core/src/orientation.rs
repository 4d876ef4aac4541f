//! Orientations of the dual graph, the AOF and Holt–Klee tests, and
//! canonical forms of Hamilton orders under symmetry and reversal.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polytope::{DualGraph, Face, FaceTable, PolytopeError, SymmetryGroup, VertexLabel, VertexMask};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("orientation has {got} edge directions, graph has {expected} edges")]
    EdgeCountMismatch { expected: usize, got: usize },
    #[error("sequence of {got} labels is not a permutation of the {expected} vertices")]
    NotPermutation { expected: usize, got: usize },
    #[error("{0} and {1} are consecutive but not adjacent")]
    NotAdjacent(VertexLabel, VertexLabel),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("empty order text")]
    Empty,
    #[error("face {defining:?} has unique sinks everywhere but {sources} sources")]
    SourceAnomaly { defining: Vec<u8>, sources: u32 },
    #[error("face {defining:?} lacks a unique source and sink")]
    NoUniqueEnds { defining: Vec<u8> },
}

/// A directed Hamilton path, listed by increasing objective value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HamiltonOrder(pub Vec<VertexLabel>);

impl HamiltonOrder {
    /// Validates that `labels` is a Hamilton path of `graph`.
    pub fn new(graph: &DualGraph, labels: Vec<VertexLabel>) -> Result<Self, OrientationError> {
        let mut seen = 0u64;
        for l in &labels {
            seen |= 1 << graph.index_of(l)?;
        }
        if labels.len() != graph.len() || seen != graph.full_mask() {
            return Err(OrientationError::NotPermutation { expected: graph.len(), got: labels.len() });
        }
        for w in labels.windows(2) {
            if w[0].shared(&w[1]) != 2 {
                return Err(OrientationError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(Self(labels))
    }

    pub fn from_indices(graph: &DualGraph, seq: &[usize]) -> Self {
        Self(seq.iter().map(|&v| graph.label(v)).collect())
    }

    pub fn indices(&self, graph: &DualGraph) -> Result<Vec<usize>, OrientationError> {
        self.0.iter().map(|l| graph.index_of(l).map_err(Into::into)).collect()
    }

    /// `rank[v]` = position of vertex `v` in the order.
    pub fn ranks(&self, graph: &DualGraph) -> Result<Vec<usize>, OrientationError> {
        let mut rank = vec![0; graph.len()];
        for (pos, l) in self.0.iter().enumerate() {
            rank[graph.index_of(l)?] = pos;
        }
        Ok(rank)
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, label: &VertexLabel) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    /// `458 < 258 < 238 < ...`
    pub fn to_text(&self, zero_based: bool) -> String {
        self.0.iter().map(|l| l.render(zero_based)).collect::<Vec<_>>().join(" < ")
    }

    /// Parses the `<`-separated format; does not check the graph.
    pub fn parse(text: &str, zero_based: bool) -> Result<Self, OrientationError> {
        let labels: Vec<VertexLabel> = text
            .split('<')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| VertexLabel::parse(s, zero_based))
            .collect::<Result<_, _>>()?;
        if labels.is_empty() {
            return Err(OrientationError::Empty);
        }
        Ok(Self(labels))
    }
}

impl Serialize for HamiltonOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text(false))
    }
}

impl<'de> Deserialize<'de> for HamiltonOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        HamiltonOrder::parse(&s, false).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for HamiltonOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

/// Direction of every edge: `forward[e]` means `edges[e].0 -> edges[e].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub forward: Vec<bool>,
    out_mask: Vec<VertexMask>,
    in_mask: Vec<VertexMask>,
}

impl Orientation {
    pub fn from_directions(graph: &DualGraph, forward: Vec<bool>) -> Result<Self, OrientationError> {
        if forward.len() != graph.edges.len() {
            return Err(OrientationError::EdgeCountMismatch { expected: graph.edges.len(), got: forward.len() });
        }
        let mut out_mask = vec![0u64; graph.len()];
        let mut in_mask = vec![0u64; graph.len()];
        for (&(u, v), &f) in graph.edges.iter().zip(&forward) {
            let (a, b) = if f { (u, v) } else { (v, u) };
            out_mask[a] |= 1 << b;
            in_mask[b] |= 1 << a;
        }
        Ok(Self { forward, out_mask, in_mask })
    }

    /// Orients every edge toward the endpoint of larger value.
    pub fn from_values<T: PartialOrd>(graph: &DualGraph, value: &[T]) -> Self {
        let forward = graph.edges.iter().map(|&(u, v)| value[u] < value[v]).collect();
        Self::from_directions(graph, forward).expect("one direction per edge")
    }

    pub fn from_order(graph: &DualGraph, order: &HamiltonOrder) -> Result<Self, OrientationError> {
        Ok(Self::from_values(graph, &order.ranks(graph)?))
    }

    pub fn out_mask(&self, v: usize) -> VertexMask {
        self.out_mask[v]
    }

    pub fn in_mask(&self, v: usize) -> VertexMask {
        self.in_mask[v]
    }

    pub fn reversed(&self, graph: &DualGraph) -> Self {
        Self::from_directions(graph, self.forward.iter().map(|f| !f).collect()).expect("same edge count")
    }

    /// Sinks of the subgraph induced on `face`.
    pub fn sinks(&self, face: VertexMask) -> Vec<usize> {
        mask_iter(face).filter(|&v| self.out_mask[v] & face == 0).collect()
    }

    pub fn sources(&self, face: VertexMask) -> Vec<usize> {
        mask_iter(face).filter(|&v| self.in_mask[v] & face == 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.out_mask.len();
        let mut indeg: Vec<u32> = self.in_mask.iter().map(|m| m.count_ones()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for w in mask_iter(self.out_mask[v]) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }

    fn has_unique_global_ends(&self, graph: &DualGraph) -> bool {
        let all = graph.full_mask();
        self.sinks(all).len() == 1 && self.sources(all).len() == 1
    }
}

pub(crate) fn mask_iter(mask: VertexMask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn check_edges(graph: &DualGraph, o: &Orientation) -> Result<(), OrientationError> {
    if o.forward.len() != graph.edges.len() {
        return Err(OrientationError::EdgeCountMismatch { expected: graph.edges.len(), got: o.forward.len() });
    }
    Ok(())
}

/// AOF condition: a unique sink in every face of dimension 2..=d (faces of
/// dimension 0 and 1 always have one). Orientations that are cyclic or lack
/// a unique global source and sink are not AOFs.
///
/// Unique sources are implied by unique sinks; a face where that fails is
/// reported as [`OrientationError::SourceAnomaly`].
pub fn is_aof(graph: &DualGraph, o: &Orientation, faces: &FaceTable) -> Result<bool, OrientationError> {
    check_edges(graph, o)?;
    if !o.is_acyclic() || !o.has_unique_global_ends(graph) {
        return Ok(false);
    }
    for face in faces.all_faces() {
        if o.sinks(face.mask).len() != 1 {
            return Ok(false);
        }
    }
    for face in faces.all_faces() {
        let sources = o.sources(face.mask).len() as u32;
        if sources != 1 {
            return Err(OrientationError::SourceAnomaly { defining: face.defining.clone(), sources });
        }
    }
    Ok(true)
}

/// Holt–Klee condition: every `k`-face, `3 <= k <= d`, has `k` vertex-disjoint
/// directed paths from its source to its sink.
pub fn is_hk(graph: &DualGraph, o: &Orientation, faces: &FaceTable) -> Result<bool, OrientationError> {
    is_hk_up_to(graph, o, faces, faces.d)
}

/// [`is_hk`] restricted to faces of dimension at most `max_dim`.
pub fn is_hk_up_to(graph: &DualGraph, o: &Orientation, faces: &FaceTable, max_dim: usize) -> Result<bool, OrientationError> {
    check_edges(graph, o)?;
    for k in 3..=faces.d.min(max_dim) {
        for face in faces.faces(k) {
            if !face_is_hk(o, face)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn face_is_hk(o: &Orientation, face: &Face) -> Result<bool, OrientationError> {
    let (sources, sinks) = (o.sources(face.mask), o.sinks(face.mask));
    if sources.len() != 1 || sinks.len() != 1 {
        return Err(OrientationError::NoUniqueEnds { defining: face.defining.clone() });
    }
    let paths = vertex_disjoint_paths(&o.out_mask, face.mask, sources[0], sinks[0], face.dim);
    Ok(paths >= face.dim)
}

/// Number of internally vertex-disjoint directed `s`-`t` paths inside `face`
/// (capped at `limit`), by unit-capacity augmenting paths on the
/// vertex-split network.
pub fn vertex_disjoint_paths(out: &[VertexMask], face: VertexMask, s: usize, t: usize, limit: usize) -> usize {
    let n = out.len();
    // node 2v = v_in, 2v+1 = v_out; cap(v_in -> v_out) = 1 except s, t
    let nodes = 2 * n;
    let mut cap = vec![vec![0i32; nodes]; nodes];
    for v in mask_iter(face) {
        cap[2 * v][2 * v + 1] = if v == s || v == t { limit as i32 } else { 1 };
        for w in mask_iter(out[v] & face) {
            cap[2 * v + 1][2 * w] = 1;
        }
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit {
        let mut prev = vec![usize::MAX; nodes];
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == dst {
                break;
            }
            for y in 0..nodes {
                if prev[y] == usize::MAX && cap[x][y] > 0 {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[dst] == usize::MAX {
            break;
        }
        let mut y = dst;
        while y != src {
            let x = prev[y];
            cap[x][y] -= 1;
            cap[y][x] += 1;
            y = x;
        }
        flow += 1;
    }
    flow
}

/// The lexicographically least member of an order's orbit under the symmetry
/// group and global reversal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub HamiltonOrder);

impl CanonicalForm {
    pub fn order(&self) -> &HamiltonOrder {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn lex_cmp(a: &[VertexLabel], b: &[VertexLabel]) -> Ordering {
    a.cmp(b)
}

pub fn canonical_form(order: &HamiltonOrder, group: &SymmetryGroup) -> Result<CanonicalForm, OrientationError> {
    let mut best: Option<Vec<VertexLabel>> = None;
    for perm in &group.perms {
        let image: Vec<VertexLabel> = order.0.iter().map(|l| l.permuted(perm)).collect();
        let rev: Vec<VertexLabel> = image.iter().rev().copied().collect();
        for cand in [image, rev] {
            if best.as_ref().is_none_or(|b| lex_cmp(&cand, b) == Ordering::Less) {
                best = Some(cand);
            }
        }
    }
    let best = best.ok_or(OrientationError::Empty)?;
    Ok(CanonicalForm(HamiltonOrder(best)))
}

/// Every order in the orbit of `order` under the group and reversal, sorted.
pub fn class_members(order: &HamiltonOrder, group: &SymmetryGroup) -> Vec<HamiltonOrder> {
    let mut out: Vec<HamiltonOrder> = Vec::with_capacity(2 * group.perms.len());
    for perm in &group.perms {
        let image = HamiltonOrder(order.0.iter().map(|l| l.permuted(perm)).collect());
        out.push(image.reversed());
        out.push(image);
    }
    out.sort();
    out.dedup();
    out
}

/// Canonical form working on vertex indices with precomputed vertex maps.
/// Sorted label order coincides with vertex index order, so comparing index
/// sequences is comparing label sequences.
pub(crate) fn canonical_indices(seq: &[usize], maps: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut buf = vec![0; seq.len()];
    for map in maps {
        for reverse in [false, true] {
            for (i, slot) in buf.iter_mut().enumerate() {
                let v = if reverse { seq[seq.len() - 1 - i] } else { seq[i] };
                *slot = map[v];
            }
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{dual_graph, face_table, symmetry_group, Params};

    pub(crate) const NR1_4: &str = "145 < 147 < 127 < 125 < 123 < 236 < 234 < 345 < 347 < 367 < 167 < 567 < 256 < 456";

    fn setup(d: usize) -> (DualGraph, FaceTable, SymmetryGroup) {
        let p = Params::corank3(d).unwrap();
        let g = dual_graph(p).unwrap();
        let f = face_table(&g);
        (g, f, symmetry_group(p).unwrap())
    }

    #[test]
    fn nr1_4_is_a_hamilton_hk_aof() {
        let (g, f, _) = setup(4);
        let h = HamiltonOrder::new(&g, HamiltonOrder::parse(NR1_4, false).unwrap().0).unwrap();
        let o = Orientation::from_order(&g, &h).unwrap();
        assert!(o.is_acyclic());
        assert!(is_aof(&g, &o, &f).unwrap());
        assert!(is_hk(&g, &o, &f).unwrap());
        assert!(is_aof(&g, &o.reversed(&g), &f).unwrap());
    }

    #[test]
    fn two_sinks_on_a_two_face_fail() {
        let (g, f, _) = setup(4);
        let face = f.two_faces().iter().find(|x| x.vertices.len() == 4).expect("a quadrilateral");
        // a->b<-c->d<-a on the quadrilateral: two sinks
        let cyc = cycle_order(&g, face);
        let mut value: Vec<i64> = (0..g.len() as i64).collect();
        let base = 1000;
        value[cyc[0]] = base;
        value[cyc[1]] = base + 10;
        value[cyc[2]] = base + 1;
        value[cyc[3]] = base + 11;
        let o = Orientation::from_values(&g, &value);
        assert_eq!(o.sinks(face.mask).len(), 2);
        assert!(!is_aof(&g, &o, &f).unwrap());
    }

    fn cycle_order(g: &DualGraph, face: &Face) -> Vec<usize> {
        let mut cyc = vec![face.vertices[0]];
        while cyc.len() < face.vertices.len() {
            let last = *cyc.last().unwrap();
            let next = face
                .vertices
                .iter()
                .copied()
                .find(|&w| g.adjacent(last, w) && !cyc.contains(&w))
                .unwrap();
            cyc.push(next);
        }
        cyc
    }

    #[test]
    fn disjoint_paths_on_a_chain_is_one() {
        // 0 -> 1 -> 2 -> 3 plus 0 -> 2: every path passes through 2
        let out = vec![0b0110, 0b0100, 0b1000, 0];
        assert_eq!(vertex_disjoint_paths(&out, 0b1111, 0, 3, 3), 1);
        // two parallel routes
        let out = vec![0b0110, 0b1000, 0b1000, 0];
        assert_eq!(vertex_disjoint_paths(&out, 0b1111, 0, 3, 3), 2);
        // direct edge counts
        let out = vec![0b1110, 0b1000, 0b1000, 0];
        assert_eq!(vertex_disjoint_paths(&out, 0b1111, 0, 3, 3), 3);
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let (g, _, grp) = setup(4);
        let h = HamiltonOrder::new(&g, HamiltonOrder::parse(NR1_4, false).unwrap().0).unwrap();
        let c = canonical_form(&h, &grp).unwrap();
        for p in &grp.perms {
            let img = HamiltonOrder(h.0.iter().map(|l| l.permuted(p)).collect());
            assert_eq!(canonical_form(&img, &grp).unwrap(), c);
            assert_eq!(canonical_form(&img.reversed(), &grp).unwrap(), c);
        }
        assert_eq!(canonical_form(c.order(), &grp).unwrap(), c);
        let maps = grp.vertex_maps(&g);
        let idx = canonical_indices(&h.indices(&g).unwrap(), &maps);
        assert_eq!(HamiltonOrder::from_indices(&g, &idx), c.0);
    }

    #[test]
    fn identity_group_picks_smaller_direction() {
        let (g, _, _) = setup(4);
        let trivial = SymmetryGroup { perms: vec![crate::polytope::Permutation::identity(7)] };
        let h = HamiltonOrder::new(&g, HamiltonOrder::parse(NR1_4, false).unwrap().0).unwrap();
        let c = canonical_form(&h, &trivial).unwrap();
        assert_eq!(c.0, h.clone().min(h.reversed()));
    }

    #[test]
    fn order_validation() {
        let (g, _, _) = setup(4);
        let mut labels = HamiltonOrder::parse(NR1_4, false).unwrap().0;
        labels.swap(0, 5);
        assert!(matches!(HamiltonOrder::new(&g, labels), Err(OrientationError::NotAdjacent(..))));
        assert!(HamiltonOrder::new(&g, vec![VertexLabel::new(1, 4, 5)]).is_err());
        let zb = HamiltonOrder::parse("034 < 036", true).unwrap();
        assert_eq!(zb.0[0], VertexLabel::new(1, 4, 5));
        assert_eq!(zb.to_text(true), "034 < 036");
    }
}
