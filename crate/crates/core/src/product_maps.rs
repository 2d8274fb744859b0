//! Maps between divisors on the factors and divisors on the product: the
//! embedding β, the induced map γ on Picard groups, the reduction of a
//! Cartier divisor to one vanishing on the diagonals when a factor is a
//! tree, harmonicity of the coordinate projections, and the conjecture
//! tester comparing Pic(Δ) with Pic(G) ⊕ Pic(H) ⊕ Z^{g(G) g(H)}.

use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::divisor_theory::{Divisor, DivisorSystem, PLFunction};
use crate::exact_lattice::{solve_integer, AbGroup, Int, IntMatrix, Lattice, LatticeError};
use crate::multigraph::{genus, laplacian, pic_group, GraphDivisor, Multigraph};
use crate::product_complex::{build_product, DiagonalPolicy, EdgeKind, ProductError, TriangulatedProduct};

/// One of the two factors of a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    G,
    H,
}

/// `β(C, D)`: `C(a)` on every vertical edge over `a`, `D(b)` on every
/// horizontal edge at level `b`, zero on diagonals.
pub fn beta(tp: &TriangulatedProduct, c: &GraphDivisor, d: &GraphDivisor) -> Divisor {
    assert_eq!(c.0.len(), tp.g().vertex_count(), "C not sized to G");
    assert_eq!(d.0.len(), tp.h().vertex_count(), "D not sized to H");
    Divisor(
        tp.edges()
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Horizontal { h_vertex, .. } => d.0[h_vertex].clone(),
                EdgeKind::Vertical { g_vertex, .. } => c.0[g_vertex].clone(),
                EdgeKind::Diagonal { .. } => Int::zero(),
            })
            .collect(),
    )
}

/// Matrix of β with columns ordered as `V(G)` then `V(H)`.
pub fn beta_matrix(tp: &TriangulatedProduct) -> IntMatrix {
    let nvg = tp.g().vertex_count();
    let mut m = IntMatrix::zeros(tp.edge_count(), nvg + tp.h().vertex_count());
    for (e, edge) in tp.edges().iter().enumerate() {
        match edge.kind {
            EdgeKind::Horizontal { h_vertex, .. } => m[(e, nvg + h_vertex)] = Int::from(1),
            EdgeKind::Vertical { g_vertex, .. } => m[(e, g_vertex)] = Int::from(1),
            EdgeKind::Diagonal { .. } => {}
        }
    }
    m
}

/// The pair `(C, D)` with `β(C, D) = d`, provided `d` is Cartier and
/// vanishes on every diagonal edge.
pub fn beta_image_check(sys: &DivisorSystem, d: &Divisor) -> Option<(GraphDivisor, GraphDivisor)> {
    let tp = sys.product();
    if tp.diagonal_range().any(|e| !d.0[e].is_zero()) || !sys.is_cartier(d) {
        return None;
    }
    let c = GraphDivisor(
        (0..tp.g().vertex_count())
            .map(|a| d.0[tp.vertical_edge(a, 0)].clone())
            .collect(),
    );
    let h = GraphDivisor(
        (0..tp.h().vertex_count())
            .map(|b| d.0[tp.horizontal_edge(0, b)].clone())
            .collect(),
    );
    (beta(tp, &c, &h) == *d).then_some((c, h))
}

/// Coboundary of one layer `F × ℓ`, where `ℓ` is an edge of the tree factor
/// and `F` the other factor. Rows are the edges of `F`, oriented toward the
/// endpoint that lies on the diagonal of its square at level `child`;
/// columns are the vertices of `F` at level `child`.
#[derive(Debug, Clone)]
pub struct OrientedCoboundary {
    pub matrix: IntMatrix,
    /// Diagonal edge of Δ behind each row.
    pub diagonals: Vec<usize>,
    /// Vertex of Δ behind each column.
    pub vertices: Vec<usize>,
}

impl OrientedCoboundary {
    /// Layer over `layer_edge` of the `tree` factor, with columns at level `child`.
    pub fn for_layer(tp: &TriangulatedProduct, tree: Side, layer_edge: usize, child: usize) -> Self {
        let other = match tree {
            Side::H => tp.g(),
            Side::G => tp.h(),
        };
        let at = |x: usize| match tree {
            Side::H => tp.vertex(x, child),
            Side::G => tp.vertex(child, x),
        };
        let vertices: Vec<usize> = (0..other.vertex_count()).map(at).collect();
        let mut matrix = IntMatrix::zeros(other.edge_count(), other.vertex_count());
        let mut diagonals = Vec::with_capacity(other.edge_count());
        for (k, e) in other.edges().iter().enumerate() {
            let square = match tree {
                Side::H => tp.square(k, layer_edge),
                Side::G => tp.square(layer_edge, k),
            };
            let ends = tp.edge(square.diagonal).ends;
            let (x, y) = e.ends;
            let (head, tail) = if ends.contains(&at(x)) { (x, y) } else { (y, x) };
            matrix[(k, head)] = Int::from(1);
            matrix[(k, tail)] = Int::from(-1);
            diagonals.push(square.diagonal);
        }
        OrientedCoboundary {
            matrix,
            diagonals,
            vertices,
        }
    }
}

/// Edges of a tree as `(edge, parent, child)`, rooted at vertex 0, in the
/// reverse of the order in which leaves are peeled (smallest index first).
pub fn tree_layers(tree: &Multigraph) -> Option<Vec<(usize, usize, usize)>> {
    if !tree.is_tree() {
        return None;
    }
    let n = tree.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut removed = vec![false; tree.edge_count()];
    let mut peeled = Vec::with_capacity(tree.edge_count());
    for _ in 0..tree.edge_count() {
        let leaf = (1..n).find(|&v| degree[v] == 1).expect("a tree with edges has a non-root leaf");
        let edge = *tree
            .incident_edges(leaf)
            .iter()
            .find(|&&e| !removed[e])
            .expect("leaf keeps one edge");
        let parent = tree.edge(edge).other(leaf);
        removed[edge] = true;
        degree[leaf] = 0;
        degree[parent] -= 1;
        peeled.push((edge, parent, leaf));
    }
    peeled.reverse();
    Some(peeled)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("neither factor is a tree")]
    NoTreeFactor,
    #[error("divisor is not Cartier")]
    NotCartier,
    #[error("no integer solution on the layer over tree edge {layer_edge}; this contradicts the surjectivity theorem")]
    InternalInconsistency { layer_edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// `d − div(phi)`, zero on every diagonal edge.
    pub reduced: Divisor,
    pub phi: PLFunction,
}

/// Subtracts a principal divisor from the Cartier divisor `d` so that the
/// result vanishes on all diagonals, working layer by layer from the root of
/// the tree factor outward.
pub fn diagonal_reduce(sys: &DivisorSystem, d: &Divisor) -> Result<Reduction, ReduceError> {
    let tp = sys.product();
    let tree = if tp.h().is_tree() {
        Side::H
    } else if tp.g().is_tree() {
        Side::G
    } else {
        return Err(ReduceError::NoTreeFactor);
    };
    if !sys.is_cartier(d) {
        return Err(ReduceError::NotCartier);
    }
    let layers = match tree {
        Side::H => tree_layers(tp.h()),
        Side::G => tree_layers(tp.g()),
    }
    .expect("checked to be a tree");
    let p = sys.principal_matrix();
    let mut current = d.clone();
    let mut phi = PLFunction::zero(tp.vertex_count());
    for (edge, _parent, child) in layers {
        let layer = OrientedCoboundary::for_layer(tp, tree, edge, child);
        let sub = p.select_rows(&layer.diagonals).select_columns(&layer.vertices);
        let target: Vec<Int> = layer.diagonals.iter().map(|&e| current.0[e].clone()).collect();
        let k = solve_integer(&sub, &target).ok_or(ReduceError::InternalInconsistency { layer_edge: edge })?;
        for (j, &v) in layer.vertices.iter().enumerate() {
            if k[j].is_zero() {
                continue;
            }
            phi.0[v] += &k[j];
            for e in 0..tp.edge_count() {
                let m = &p[(e, v)];
                if !m.is_zero() {
                    current.0[e] -= &k[j] * m;
                }
            }
        }
    }
    if tp.diagonal_range().any(|e| !current.0[e].is_zero()) {
        return Err(ReduceError::InternalInconsistency { layer_edge: usize::MAX });
    }
    Ok(Reduction { reduced: current, phi })
}

fn block_laplacian(tp: &TriangulatedProduct) -> IntMatrix {
    let (lg, lh) = (laplacian(tp.g()), laplacian(tp.h()));
    let (ng, nh) = (lg.rows(), lh.rows());
    let mut m = IntMatrix::zeros(ng + nh, ng + nh);
    for i in 0..ng {
        for j in 0..ng {
            m[(i, j)] = lg[(i, j)].clone();
        }
    }
    for i in 0..nh {
        for j in 0..nh {
            m[(ng + i, ng + j)] = lh[(i, j)].clone();
        }
    }
    m
}

/// Checks that `{(C, D) : β(C, D) principal}` is exactly `Prin(G) × Prin(H)`,
/// i.e. that γ: Pic(G) × Pic(H) → Pic(Δ) is injective.
pub fn gamma_injectivity_check(sys: &DivisorSystem) -> bool {
    let tp = sys.product();
    let pulled = sys
        .prin_lattice()
        .preimage(&beta_matrix(tp))
        .expect("β lands in Div(Δ)");
    pulled == Lattice::from_generators(&block_laplacian(tp))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("β of the unit divisor at vertex {vertex} of factor {side:?} is not Cartier, so γ is undefined")]
    BetaNotCartier { side: Side, vertex: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// First unit divisor of a factor whose image under β is not Cartier.
/// `None` for simple factors; parallel edges can make β leave Cart(Δ).
pub fn beta_cartier_obstruction(sys: &DivisorSystem) -> Option<(Side, usize)> {
    let tp = sys.product();
    let (ng, nh) = (tp.g().vertex_count(), tp.h().vertex_count());
    let unit = |n: usize, k: usize| {
        let mut d = GraphDivisor::zero(n);
        d.0[k] = Int::from(1);
        d
    };
    (0..ng)
        .map(|a| (Side::G, a, beta(tp, &unit(ng, a), &GraphDivisor::zero(nh))))
        .chain((0..nh).map(|b| (Side::H, b, beta(tp, &GraphDivisor::zero(ng), &unit(nh, b)))))
        .find(|(_, _, d)| !sys.is_cartier(d))
        .map(|(side, k, _)| (side, k))
}

/// `Pic(Δ) / im(γ)`, computed as `Cart(Δ) / (im β + Prin(Δ))`.
pub fn gamma_cokernel(sys: &DivisorSystem) -> Result<AbGroup, GammaError> {
    if let Some((side, vertex)) = beta_cartier_obstruction(sys) {
        return Err(GammaError::BetaNotCartier { side, vertex });
    }
    let tp = sys.product();
    let image = Lattice::from_generators(&beta_matrix(tp).hstack(sys.principal_matrix()));
    Ok(sys.cart_lattice().quotient(&image)?)
}

/// Image of an edge of the 1-skeleton of Δ under a coordinate projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionImage {
    Vertex(usize),
    Edge(usize),
}

/// The graph morphism from the 1-skeleton of Δ to one factor that is the
/// coordinate projection on vertices.
#[derive(Debug, Clone)]
pub struct HarmonicProjection {
    pub target: Side,
    pub images: Vec<ProjectionImage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarmonicError {
    #[error("factor {0:?} is not a simple graph")]
    NotSimple(Side),
}

impl HarmonicProjection {
    pub fn new(tp: &TriangulatedProduct, target: Side) -> Self {
        let images = tp
            .edges()
            .iter()
            .map(|e| match (target, e.kind) {
                (Side::G, EdgeKind::Vertical { g_vertex, .. }) => ProjectionImage::Vertex(g_vertex),
                (Side::H, EdgeKind::Horizontal { h_vertex, .. }) => ProjectionImage::Vertex(h_vertex),
                (Side::G, _) => ProjectionImage::Edge(e.g_edge().expect("lies over a G-edge")),
                (Side::H, _) => ProjectionImage::Edge(e.h_edge().expect("lies over an H-edge")),
            })
            .collect();
        HarmonicProjection { target, images }
    }

    /// At every vertex `x` of Δ, the number of edges at `x` mapping to an
    /// edge `e'` at the image of `x` does not depend on `e'`.
    pub fn is_harmonic(&self, tp: &TriangulatedProduct) -> bool {
        let factor = match self.target {
            Side::G => tp.g(),
            Side::H => tp.h(),
        };
        (0..tp.vertex_count()).all(|x| {
            let (a, b) = tp.coordinates(x);
            let y = if self.target == Side::G { a } else { b };
            let counts: Vec<usize> = factor
                .incident_edges(y)
                .iter()
                .map(|&target| {
                    tp.graph_star(x)
                        .iter()
                        .filter(|&&e| self.images[e] == ProjectionImage::Edge(target))
                        .count()
                })
                .collect();
            counts.windows(2).all(|w| w[0] == w[1])
        })
    }
}

/// Harmonicity of the projections to G and to H; both factors must be simple.
pub fn harmonic_check(tp: &TriangulatedProduct) -> Result<(bool, bool), HarmonicError> {
    if !tp.g().is_simple() {
        return Err(HarmonicError::NotSimple(Side::G));
    }
    if !tp.h().is_simple() {
        return Err(HarmonicError::NotSimple(Side::H));
    }
    Ok((
        HarmonicProjection::new(tp, Side::G).is_harmonic(tp),
        HarmonicProjection::new(tp, Side::H).is_harmonic(tp),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub label: String,
    pub vertices: usize,
    pub edges: usize,
    pub genus: usize,
}

impl GraphSummary {
    pub fn new(label: impl Into<String>, g: &Multigraph) -> Self {
        GraphSummary {
            label: label.into(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            genus: genus(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub build: f64,
    pub pic_delta: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub g: GraphSummary,
    pub h: GraphSummary,
    pub policy: String,
    pub pic_delta: AbGroup,
    pub pic_g: AbGroup,
    pub pic_h: AbGroup,
    pub genus_product: usize,
    pub predicted: AbGroup,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

/// Computes Pic(Δ) and the predicted `Pic(G) ⊕ Pic(H) ⊕ Z^{g(G) g(H)}`.
/// Graph labels default to their sizes; callers may overwrite them.
pub fn conjecture_report(g: &Multigraph, h: &Multigraph, policy: &DiagonalPolicy) -> Result<ConjectureReport, ProductError> {
    let start = Instant::now();
    let tp = build_product(g, h, policy)?;
    let sys = DivisorSystem::new(tp);
    let built = start.elapsed();
    let pic_delta = sys.pic();
    let computed = start.elapsed();
    let (pic_g, pic_h) = (pic_group(g), pic_group(h));
    let genus_product = genus(g) * genus(h);
    let predicted = pic_g.direct_sum(&pic_h).direct_sum(&AbGroup::free(genus_product));
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let label = |x: &Multigraph| format!("V{}E{}", x.vertex_count(), x.edge_count());
    Ok(ConjectureReport {
        g: GraphSummary::new(label(g), g),
        h: GraphSummary::new(label(h), h),
        policy: policy.to_string(),
        matches: pic_delta == predicted,
        pic_delta,
        pic_g,
        pic_h,
        genus_product,
        predicted,
        timings_ms: Some(Timings {
            build: ms(built),
            pic_delta: ms(computed - built),
            total: ms(start.elapsed()),
        }),
    })
}
