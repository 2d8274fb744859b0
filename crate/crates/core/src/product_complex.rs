//! Triangulations of the product of two graphs and their weak tropical
//! complex structure.
//!
//! Every pair (G-edge, H-edge) spans a square, split into two triangles by
//! one diagonal. Vertices of Δ are ordered lexicographically by
//! (G-vertex, H-vertex). Edges are ordered in three contiguous blocks:
//! horizontal edges (G-edge, H-vertex), vertical edges (G-vertex, H-edge)
//! and diagonal edges (G-edge, H-edge), each block lexicographic.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::multigraph::Multigraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("factor {0} has no edges, so the product has no squares")]
    EdgelessFactor(char),
    #[error("explicit policy names unknown G-edge `{0}`")]
    UnknownGEdge(String),
    #[error("explicit policy names unknown H-edge `{0}`")]
    UnknownHEdge(String),
    #[error("explicit policy chooses square ({0}, {1}) more than once")]
    DuplicateSquare(String, String),
    #[error("explicit policy does not cover square ({0}, {1})")]
    MissingSquare(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
}

/// Where an edge of Δ comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// (G-edge) × (H-vertex)
    Horizontal { g_edge: usize, h_vertex: usize },
    /// (G-vertex) × (H-edge)
    Vertical { g_vertex: usize, h_edge: usize },
    /// Diagonal of the square (G-edge) × (H-edge)
    Diagonal { g_edge: usize, h_edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEdge {
    pub id: String,
    /// Endpoints as indices into the vertex order of Δ.
    pub ends: [usize; 2],
    pub kind: EdgeKind,
}

impl ProductEdge {
    pub fn contains(&self, v: usize) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, EdgeKind::Diagonal { .. })
    }

    /// The G-edge this edge lies over, if any.
    pub fn g_edge(&self) -> Option<usize> {
        match self.kind {
            EdgeKind::Horizontal { g_edge, .. } | EdgeKind::Diagonal { g_edge, .. } => Some(g_edge),
            EdgeKind::Vertical { .. } => None,
        }
    }

    /// The H-edge this edge lies over, if any.
    pub fn h_edge(&self) -> Option<usize> {
        match self.kind {
            EdgeKind::Vertical { h_edge, .. } | EdgeKind::Diagonal { h_edge, .. } => Some(h_edge),
            EdgeKind::Horizontal { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub vertices: [usize; 3],
    /// Edge indices: the diagonal, then the horizontal, then the vertical edge.
    pub edges: [usize; 3],
    pub square: usize,
}

impl Triangle {
    pub fn diagonal(&self) -> usize {
        self.edges[0]
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.contains(&e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Square {
    pub g_edge: usize,
    pub h_edge: usize,
    /// `false`: the diagonal joins (min a, min b) to (max a, max b);
    /// `true`: it joins (min a, max b) to (max a, min b).
    pub flipped: bool,
    pub diagonal: usize,
    pub triangles: [usize; 2],
}

/// Per-square choice of diagonal in an explicit policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalChoice {
    pub g_edge: String,
    pub h_edge: String,
    pub flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum DiagonalPolicy {
    /// Every diagonal joins (min a, min b) to (max a, max b).
    #[default]
    Standard,
    /// Each square independently flipped with probability 1/2.
    SeededRandom(u64),
    /// One choice per square.
    Explicit(Vec<DiagonalChoice>),
}

impl DiagonalPolicy {
    /// Parses lines `d <G-edge-id> <H-edge-id> <0|1>` (`#` comments allowed).
    pub fn parse_explicit(text: &str) -> Result<Self, ProductError> {
        let mut choices = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| ProductError::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["d", g, h, flag] => {
                    let flipped = match *flag {
                        "0" => false,
                        "1" => true,
                        _ => return Err(err("direction must be 0 or 1")),
                    };
                    choices.push(DiagonalChoice {
                        g_edge: g.to_string(),
                        h_edge: h.to_string(),
                        flipped,
                    });
                }
                _ => return Err(err("expected `d <G-edge-id> <H-edge-id> <0|1>`")),
            }
        }
        Ok(DiagonalPolicy::Explicit(choices))
    }
}

impl fmt::Display for DiagonalPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalPolicy::Standard => write!(f, "standard"),
            DiagonalPolicy::SeededRandom(seed) => write!(f, "random:{seed}"),
            DiagonalPolicy::Explicit(c) => write!(f, "explicit:{}", c.len()),
        }
    }
}

/// Triangulation Δ of G × H with its α-weights.
#[derive(Debug, Clone)]
pub struct TriangulatedProduct {
    g: Multigraph,
    h: Multigraph,
    policy: DiagonalPolicy,
    edges: Vec<ProductEdge>,
    triangles: Vec<Triangle>,
    squares: Vec<Square>,
    /// `alpha[e][k]` is α(e, ends[k]); α vanishes off the endpoints.
    alpha: Vec<[i64; 2]>,
    edge_triangles: Vec<Vec<usize>>,
    star: Vec<Vec<usize>>,
    link: Vec<Vec<usize>>,
}

impl TriangulatedProduct {
    pub fn g(&self) -> &Multigraph {
        &self.g
    }

    pub fn h(&self) -> &Multigraph {
        &self.h
    }

    pub fn policy(&self) -> &DiagonalPolicy {
        &self.policy
    }

    pub fn vertex_count(&self) -> usize {
        self.g.vertex_count() * self.h.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a * self.h.vertex_count() + b
    }

    /// `(G-vertex, H-vertex)` of a vertex of Δ.
    pub fn coordinates(&self, v: usize) -> (usize, usize) {
        (v / self.h.vertex_count(), v % self.h.vertex_count())
    }

    pub fn vertex_label(&self, v: usize) -> String {
        let (a, b) = self.coordinates(v);
        format!("({},{})", self.g.vertex_id(a), self.h.vertex_id(b))
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<usize, ProductError> {
        (0..self.vertex_count())
            .find(|&v| self.vertex_label(v) == label)
            .ok_or_else(|| ProductError::UnknownVertex(label.to_string()))
    }

    pub fn edges(&self) -> &[ProductEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &ProductEdge {
        &self.edges[e]
    }

    pub fn edge_by_id(&self, id: &str) -> Result<usize, ProductError> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| ProductError::UnknownEdge(id.to_string()))
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn square(&self, g_edge: usize, h_edge: usize) -> &Square {
        &self.squares[g_edge * self.h.edge_count() + h_edge]
    }

    pub fn horizontal_edge(&self, g_edge: usize, h_vertex: usize) -> usize {
        g_edge * self.h.vertex_count() + h_vertex
    }

    pub fn vertical_edge(&self, g_vertex: usize, h_edge: usize) -> usize {
        self.vertical_range().start + g_vertex * self.h.edge_count() + h_edge
    }

    pub fn horizontal_range(&self) -> Range<usize> {
        0..self.g.edge_count() * self.h.vertex_count()
    }

    pub fn vertical_range(&self) -> Range<usize> {
        let start = self.horizontal_range().end;
        start..start + self.g.vertex_count() * self.h.edge_count()
    }

    pub fn diagonal_range(&self) -> Range<usize> {
        let start = self.vertical_range().end;
        start..self.edges.len()
    }

    /// α(e, v), read from the table built with the product.
    pub fn alpha(&self, e: usize, v: usize) -> i64 {
        let edge = &self.edges[e];
        if edge.ends[0] == v {
            self.alpha[e][0]
        } else if edge.ends[1] == v {
            self.alpha[e][1]
        } else {
            0
        }
    }

    /// α looked up by edge ID and vertex label such as `(a,b)`.
    pub fn alpha_by_id(&self, edge_id: &str, vertex_label: &str) -> Result<i64, ProductError> {
        let e = self.edge_by_id(edge_id)?;
        let v = self.vertex_by_label(vertex_label)?;
        Ok(self.alpha(e, v))
    }

    /// Number of triangles containing `e`.
    pub fn edge_degree(&self, e: usize) -> usize {
        self.edge_triangles[e].len()
    }

    pub fn triangles_of_edge(&self, e: usize) -> &[usize] {
        &self.edge_triangles[e]
    }

    /// Vertex of triangle `t` not on edge `e`.
    pub fn opposite_vertex(&self, t: usize, e: usize) -> usize {
        let ends = self.edges[e].ends;
        *self.triangles[t]
            .vertices
            .iter()
            .find(|v| !ends.contains(v))
            .expect("edge lies in triangle")
    }

    /// Edges containing `v`, in edge order.
    pub fn graph_star(&self, v: usize) -> &[usize] {
        &self.star[v]
    }

    /// Edges `e` with `v ∉ e` such that `e ∪ {v}` spans a triangle, in edge order.
    pub fn link_edges(&self, v: usize) -> &[usize] {
        &self.link[v]
    }

    /// Number of diagonal edges containing `v`.
    pub fn diagonal_degree(&self, v: usize) -> usize {
        self.star[v].iter().filter(|&&e| self.edges[e].is_diagonal()).count()
    }

    /// Edges on which `Σ_v α(e, v)` differs from the number of triangles
    /// containing `e`. Empty for every product built by [`build_product`].
    pub fn weak_complex_violations(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.alpha[e][0] + self.alpha[e][1] != self.edge_degree(e) as i64)
            .collect()
    }
}

fn square_flips(g: &Multigraph, h: &Multigraph, policy: &DiagonalPolicy) -> Result<Vec<bool>, ProductError> {
    let count = g.edge_count() * h.edge_count();
    match policy {
        DiagonalPolicy::Standard => Ok(vec![false; count]),
        DiagonalPolicy::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..count).map(|_| rng.gen_bool(0.5)).collect())
        }
        DiagonalPolicy::Explicit(choices) => {
            let mut flips: Vec<Option<bool>> = vec![None; count];
            for c in choices {
                let ge = g
                    .edge_index(&c.g_edge)
                    .ok_or_else(|| ProductError::UnknownGEdge(c.g_edge.clone()))?;
                let he = h
                    .edge_index(&c.h_edge)
                    .ok_or_else(|| ProductError::UnknownHEdge(c.h_edge.clone()))?;
                let slot = &mut flips[ge * h.edge_count() + he];
                if slot.is_some() {
                    return Err(ProductError::DuplicateSquare(c.g_edge.clone(), c.h_edge.clone()));
                }
                *slot = Some(c.flipped);
            }
            flips
                .into_iter()
                .enumerate()
                .map(|(s, f)| {
                    f.ok_or_else(|| {
                        ProductError::MissingSquare(
                            g.edge(s / h.edge_count()).id.clone(),
                            h.edge(s % h.edge_count()).id.clone(),
                        )
                    })
                })
                .collect()
        }
    }
}

/// Builds the triangulation of `g × h` selected by `policy`, together with
/// α(e, v) = 1 on a diagonal's endpoints and, on a non-diagonal edge, the
/// number of triangles through `e` whose diagonal avoids `v`.
pub fn build_product(g: &Multigraph, h: &Multigraph, policy: &DiagonalPolicy) -> Result<TriangulatedProduct, ProductError> {
    if g.edge_count() == 0 {
        return Err(ProductError::EdgelessFactor('G'));
    }
    if h.edge_count() == 0 {
        return Err(ProductError::EdgelessFactor('H'));
    }
    let flips = square_flips(g, h, policy)?;
    let (nvg, nvh) = (g.vertex_count(), h.vertex_count());
    let vtx = |a: usize, b: usize| a * nvh + b;

    let mut edges = Vec::new();
    for (ge, e) in g.edges().iter().enumerate() {
        let (a0, a1) = e.sorted_ends();
        for b in 0..nvh {
            edges.push(ProductEdge {
                id: format!("h:{}:{}", e.id, h.vertex_id(b)),
                ends: [vtx(a0, b), vtx(a1, b)],
                kind: EdgeKind::Horizontal { g_edge: ge, h_vertex: b },
            });
        }
    }
    let vertical_start = edges.len();
    for a in 0..nvg {
        for (he, f) in h.edges().iter().enumerate() {
            let (b0, b1) = f.sorted_ends();
            edges.push(ProductEdge {
                id: format!("v:{}:{}", g.vertex_id(a), f.id),
                ends: [vtx(a, b0), vtx(a, b1)],
                kind: EdgeKind::Vertical { g_vertex: a, h_edge: he },
            });
        }
    }
    let diagonal_start = edges.len();
    let nhe = h.edge_count();
    let mut triangles = Vec::new();
    let mut squares = Vec::new();
    for (ge, e) in g.edges().iter().enumerate() {
        let (a0, a1) = e.sorted_ends();
        for (he, f) in h.edges().iter().enumerate() {
            let (b0, b1) = f.sorted_ends();
            let s = ge * nhe + he;
            let flipped = flips[s];
            let d = diagonal_start + s;
            let h0 = ge * nvh + b0;
            let h1 = ge * nvh + b1;
            let v0 = vertical_start + a0 * nhe + he;
            let v1 = vertical_start + a1 * nhe + he;
            let (ends, t1, t2) = if flipped {
                (
                    [vtx(a0, b1), vtx(a1, b0)],
                    ([vtx(a0, b0), vtx(a1, b0), vtx(a0, b1)], [d, h0, v0]),
                    ([vtx(a1, b1), vtx(a0, b1), vtx(a1, b0)], [d, h1, v1]),
                )
            } else {
                (
                    [vtx(a0, b0), vtx(a1, b1)],
                    ([vtx(a0, b0), vtx(a1, b0), vtx(a1, b1)], [d, h0, v1]),
                    ([vtx(a0, b0), vtx(a0, b1), vtx(a1, b1)], [d, h1, v0]),
                )
            };
            edges.push(ProductEdge {
                id: format!("d:{}:{}", e.id, f.id),
                ends,
                kind: EdgeKind::Diagonal { g_edge: ge, h_edge: he },
            });
            let first = triangles.len();
            triangles.push(Triangle {
                vertices: t1.0,
                edges: t1.1,
                square: s,
            });
            triangles.push(Triangle {
                vertices: t2.0,
                edges: t2.1,
                square: s,
            });
            squares.push(Square {
                g_edge: ge,
                h_edge: he,
                flipped,
                diagonal: d,
                triangles: [first, first + 1],
            });
        }
    }

    let mut edge_triangles = vec![Vec::new(); edges.len()];
    for (t, tri) in triangles.iter().enumerate() {
        for &e in &tri.edges {
            edge_triangles[e].push(t);
        }
    }

    let alpha: Vec<[i64; 2]> = edges
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            if edge.is_diagonal() {
                return [1, 1];
            }
            let mut w = [0i64; 2];
            for &t in &edge_triangles[e] {
                let diag_ends = edges[triangles[t].diagonal()].ends;
                for (wk, end) in w.iter_mut().zip(edge.ends) {
                    if !diag_ends.contains(&end) {
                        *wk += 1;
                    }
                }
            }
            w
        })
        .collect();

    let nv = nvg * nvh;
    let mut star = vec![Vec::new(); nv];
    for (e, edge) in edges.iter().enumerate() {
        star[edge.ends[0]].push(e);
        star[edge.ends[1]].push(e);
    }
    for s in &mut star {
        s.sort_unstable();
    }
    let mut link = vec![Vec::new(); nv];
    for tri in &triangles {
        for &e in &tri.edges {
            let ends = edges[e].ends;
            let apex = *tri.vertices.iter().find(|v| !ends.contains(v)).expect("triangle apex");
            link[apex].push(e);
        }
    }
    for l in &mut link {
        l.sort_unstable();
        l.dedup();
    }

    Ok(TriangulatedProduct {
        g: g.clone(),
        h: h.clone(),
        policy: policy.clone(),
        edges,
        triangles,
        squares,
        alpha,
        edge_triangles,
        star,
        link,
    })
}

/// Map from edge ID to edge index; handy for explicit policy files and reports.
pub fn edge_index_map(tp: &TriangulatedProduct) -> HashMap<&str, usize> {
    tp.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(tp: &TriangulatedProduct) -> (usize, usize, usize, usize, usize, usize) {
        (
            tp.vertex_count(),
            tp.edge_count(),
            tp.horizontal_range().len(),
            tp.vertical_range().len(),
            tp.diagonal_range().len(),
            tp.triangles().len(),
        )
    }

    #[test]
    fn p2_times_p2_has_sixteen_edges() {
        let p2 = Multigraph::path(2);
        let tp = build_product(&p2, &p2, &DiagonalPolicy::Standard).unwrap();
        assert_eq!(counts(&tp), (9, 16, 6, 6, 4, 8));
    }

    #[test]
    fn small_products() {
        let k2 = Multigraph::path(1);
        let tp = build_product(&k2, &k2, &DiagonalPolicy::Standard).unwrap();
        assert_eq!((tp.vertex_count(), tp.edge_count(), tp.triangles().len()), (4, 5, 2));
        let tp = build_product(&Multigraph::cycle(3), &k2, &DiagonalPolicy::Standard).unwrap();
        assert_eq!(counts(&tp), (6, 12, 6, 3, 3, 6));
    }

    #[test]
    fn alpha_on_single_square() {
        // vertices 0 = (0,0), 1 = (0,1), 2 = (1,0), 3 = (1,1); diagonal 0-3
        let k2 = Multigraph::path(1);
        let tp = build_product(&k2, &k2, &DiagonalPolicy::Standard).unwrap();
        let bottom = tp.horizontal_edge(0, 0); // (0,0)-(1,0)
        assert_eq!(tp.alpha(bottom, tp.vertex(1, 0)), 1);
        assert_eq!(tp.alpha(bottom, tp.vertex(0, 0)), 0);
        let d = tp.diagonal_range().start;
        assert_eq!(tp.alpha(d, 0), 1);
        assert_eq!(tp.alpha(d, 3), 1);
        assert_eq!(tp.alpha(d, 1), 0);
        assert_eq!(tp.alpha_by_id("h:e0:0", "(1,0)"), Ok(1));
        assert!(tp.alpha_by_id("nope", "(1,0)").is_err());
        assert!(tp.alpha_by_id("h:e0:0", "(7,7)").is_err());
    }

    #[test]
    fn stars_and_links_of_single_square() {
        let k2 = Multigraph::path(1);
        let tp = build_product(&k2, &k2, &DiagonalPolicy::Standard).unwrap();
        assert_eq!(tp.graph_star(0).len(), 3);
        assert_eq!(tp.link_edges(0).len(), 2);
        assert_eq!(tp.graph_star(1).len(), 2);
        assert_eq!(tp.link_edges(1).len(), 1);
        // the flipped square swaps the roles
        let tp = build_product(&k2, &k2, &DiagonalPolicy::Explicit(vec![DiagonalChoice {
            g_edge: "e0".into(),
            h_edge: "e0".into(),
            flipped: true,
        }]))
        .unwrap();
        assert_eq!(tp.link_edges(0).len(), 1);
        assert_eq!(tp.link_edges(1).len(), 2);
    }

    #[test]
    fn stars_in_p2_times_p2() {
        let p2 = Multigraph::path(2);
        let tp = build_product(&p2, &p2, &DiagonalPolicy::Standard).unwrap();
        // (0,0) lies on the diagonal of its square, (0,2) does not
        assert_eq!(tp.graph_star(tp.vertex(0, 0)).len(), 3);
        assert_eq!(tp.graph_star(tp.vertex(0, 2)).len(), 2);
        let center = tp.vertex(1, 1);
        assert_eq!(tp.graph_star(center).len(), 4 + tp.diagonal_degree(center));
        assert_eq!(tp.diagonal_degree(center), 2);
    }

    #[test]
    fn weak_complex_axiom_holds() {
        for policy in [DiagonalPolicy::Standard, DiagonalPolicy::SeededRandom(3)] {
            let tp = build_product(&Multigraph::complete(4), &Multigraph::theta(3), &policy).unwrap();
            assert!(tp.weak_complex_violations().is_empty());
        }
    }

    #[test]
    fn explicit_policy_validation() {
        let k2 = Multigraph::path(1);
        let p2 = Multigraph::path(2);
        let missing = DiagonalPolicy::parse_explicit("d e0 e0 1\n").unwrap();
        assert_eq!(
            build_product(&k2, &p2, &missing).unwrap_err(),
            ProductError::MissingSquare("e0".into(), "e1".into())
        );
        let dup = DiagonalPolicy::parse_explicit("d e0 e0 1\nd e0 e0 0\n").unwrap();
        assert!(matches!(build_product(&k2, &k2, &dup), Err(ProductError::DuplicateSquare(..))));
        let unknown = DiagonalPolicy::parse_explicit("d zz e0 1\n").unwrap();
        assert!(matches!(build_product(&k2, &k2, &unknown), Err(ProductError::UnknownGEdge(_))));
        assert!(matches!(
            DiagonalPolicy::parse_explicit("# c\nd e0 e0 2\n"),
            Err(ProductError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn edgeless_factor_rejected() {
        let k1 = Multigraph::complete(1);
        assert_eq!(
            build_product(&k1, &Multigraph::path(1), &DiagonalPolicy::Standard).unwrap_err(),
            ProductError::EdgelessFactor('G')
        );
    }

    #[test]
    fn random_policy_is_reproducible() {
        let c4 = Multigraph::cycle(4);
        let a = build_product(&c4, &c4, &DiagonalPolicy::SeededRandom(11)).unwrap();
        let b = build_product(&c4, &c4, &DiagonalPolicy::SeededRandom(11)).unwrap();
        let flips = |tp: &TriangulatedProduct| tp.squares().iter().map(|s| s.flipped).collect::<Vec<_>>();
        assert_eq!(flips(&a), flips(&b));
        assert!(flips(&a).iter().any(|&f| f) && flips(&a).iter().any(|&f| !f));
    }
}
