//! Loopless connected multigraphs with fixed vertex and edge orders, their
//! Laplacians, and the divisor theory of graphs: principal divisors, the
//! Picard group `Z ⊕ K(G)` and the genus.
//!
//! The Laplacian follows the sign convention in which the diagonal holds
//! `-deg(v)`, so column `j` is exactly the divisor of the indicator
//! function of vertex `j`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_lattice::{cokernel, AbGroup, Int, IntMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphEdge {
    pub id: String,
    /// Endpoint indices into the vertex order.
    pub ends: (usize, usize),
}

impl GraphEdge {
    pub fn contains(&self, v: usize) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }

    /// Endpoint opposite to `v`. `v` must be an endpoint.
    pub fn other(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            debug_assert_eq!(self.ends.1, v);
            self.ends.0
        }
    }

    /// Endpoints sorted by vertex order.
    pub fn sorted_ends(&self) -> (usize, usize) {
        (self.ends.0.min(self.ends.1), self.ends.0.max(self.ends.1))
    }
}

/// Loopless connected multigraph. Vertex and edge orders are fixed at
/// construction and determine every matrix layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
    incident: Vec<Vec<usize>>,
}

/// Orders IDs numerically when both parse as integers, lexicographically otherwise.
pub fn natural_id_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl Multigraph {
    /// Builds a graph with exactly the given vertex and edge orders.
    pub fn new<V, E, A, B>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut out_edges = Vec::new();
        for (id, a, b) in edges {
            let (a, b): (String, String) = (a.into(), b.into());
            if !seen.insert(id.clone()) {
                return Err(GraphError::DuplicateEdge(id));
            }
            let lookup = |v: &String| {
                index.get(v).copied().ok_or_else(|| GraphError::UnknownVertex {
                    edge: id.clone(),
                    vertex: v.clone(),
                })
            };
            let (u, w) = (lookup(&a)?, lookup(&b)?);
            if u == w {
                return Err(GraphError::Loop(id));
            }
            out_edges.push(GraphEdge { id, ends: (u, w) });
        }
        let mut incident = vec![Vec::new(); vertices.len()];
        for (k, e) in out_edges.iter().enumerate() {
            incident[e.ends.0].push(k);
            incident[e.ends.1].push(k);
        }
        let g = Multigraph {
            vertices,
            edges: out_edges,
            incident,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Builds a graph with vertices and edges sorted by [`natural_id_order`].
    pub fn new_sorted(vertices: Vec<String>, mut edges: Vec<(String, String, String)>) -> Result<Self, GraphError> {
        let mut vertices = vertices;
        vertices.sort_by(|a, b| natural_id_order(a, b));
        edges.sort_by(|a, b| natural_id_order(&a.0, &b.0));
        Multigraph::new(vertices, edges)
    }

    /// Parses the line format `v <id>` / `e <id> <u> <w>`, with `#` comments.
    /// Orders are sorted by ID.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| GraphError::Parse { line: n + 1, message };
            match fields.as_slice() {
                ["v", id] => vertices.push(id.to_string()),
                ["e", id, u, w] => edges.push((id.to_string(), u.to_string(), w.to_string())),
                ["v", ..] => return Err(err("expected `v <id>`".into())),
                ["e", ..] => return Err(err("expected `e <id> <u> <w>`".into())),
                [tag, ..] => return Err(err(format!("unknown record `{tag}`"))),
                [] => unreachable!(),
            }
        }
        Multigraph::new_sorted(vertices, edges)
    }

    /// Inverse of [`Multigraph::parse`] (up to comments and whitespace).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("v {v}\n"));
        }
        for e in &self.edges {
            s.push_str(&format!("e {} {} {}\n", e.id, self.vertices[e.ends.0], self.vertices[e.ends.1]));
        }
        s
    }

    /// Graph on vertices `"0".."n-1"` with edges `"e0", "e1", …` in the given
    /// order. Panics on loops or if the result is disconnected.
    pub fn from_index_edges(n: usize, pairs: &[(usize, usize)]) -> Self {
        let vertices: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| (format!("e{k}"), a.to_string(), b.to_string()));
        Multigraph::new(vertices, edges).expect("generated graph is valid")
    }

    /// Path with `edges` edges (`edges + 1` vertices).
    pub fn path(edges: usize) -> Self {
        let pairs: Vec<_> = (0..edges).map(|i| (i, i + 1)).collect();
        Multigraph::from_index_edges(edges + 1, &pairs)
    }

    /// Cycle on `n >= 2` vertices; `n = 2` gives two parallel edges.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a cycle needs at least two vertices");
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_index_edges(n, &pairs)
    }

    pub fn complete(n: usize) -> Self {
        assert!(n >= 1, "complete graph needs a vertex");
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        Multigraph::from_index_edges(n, &pairs)
    }

    /// Two vertices joined by `n` parallel edges.
    pub fn theta(n: usize) -> Self {
        Multigraph::from_index_edges(2, &vec![(0, 1); n])
    }

    /// Uniformly random labelled tree on `n` vertices, decoded from a random
    /// Prüfer sequence drawn from `seed`.
    pub fn random_tree(n: usize, seed: u64) -> Self {
        assert!(n >= 1, "a tree needs a vertex");
        if n <= 2 {
            return Multigraph::path(n - 1);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &c in &code {
            degree[c] += 1;
        }
        let mut pairs = Vec::with_capacity(n - 1);
        for &c in &code {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
            pairs.push((leaf.min(c), leaf.max(c)));
            degree[leaf] -= 1;
            degree[c] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        pairs.push((rest[0], rest[1]));
        Multigraph::from_index_edges(n, &pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &GraphEdge {
        &self.edges[k]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Edges incident to `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Degree counting parallel edges.
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Distinct neighbours of `v`, in vertex order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.incident[v].iter().map(|&k| self.edges[k].other(v)).collect();
        set.into_iter().collect()
    }

    /// Number of edges joining `a` and `b`.
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.incident[a].iter().filter(|&&k| self.edges[k].other(a) == b).count()
    }

    pub fn is_simple(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.neighbors(v).len() == self.degree(v))
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.vertex_count()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &k in &self.incident[v] {
                let w = self.edges[k].other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(|V|={}, |E|={})", self.vertex_count(), self.edge_count())
    }
}

/// Integer coefficient per vertex, in the graph's vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphDivisor(pub Vec<Int>);

impl GraphDivisor {
    pub fn zero(n: usize) -> Self {
        GraphDivisor(vec![Int::from(0); n])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        GraphDivisor(values.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn degree(&self) -> Int {
        self.0.iter().sum()
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.0
    }
}

/// Laplacian with `-deg(v_i)` on the diagonal and the edge multiplicity
/// `adj(v_i, v_j)` off the diagonal.
pub fn laplacian(g: &Multigraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut l = IntMatrix::zeros(n, n);
    for e in g.edges() {
        let (a, b) = e.ends;
        l[(a, a)] -= 1;
        l[(b, b)] -= 1;
        l[(a, b)] += 1;
        l[(b, a)] += 1;
    }
    l
}

/// Divisor of the piecewise-linear function with vertex values `phi`:
/// the sum of outgoing slopes at each vertex, i.e. `L(g) * phi`.
pub fn graph_div(g: &Multigraph, phi: &[Int]) -> GraphDivisor {
    assert_eq!(phi.len(), g.vertex_count(), "one value per vertex expected");
    GraphDivisor(laplacian(g).mul_vec(phi))
}

/// Lattice of principal divisors, the integer column span of the Laplacian.
pub fn principal_lattice(g: &Multigraph) -> Lattice {
    Lattice::from_generators(&laplacian(g))
}

pub fn is_graph_principal(g: &Multigraph, d: &GraphDivisor) -> bool {
    assert_eq!(d.0.len(), g.vertex_count(), "divisor not indexed by this graph");
    principal_lattice(g).contains(&d.0)
}

/// `Pic(G) = Div(G) / Prin(G) ≅ Z ⊕ K(G)`.
pub fn pic_group(g: &Multigraph) -> AbGroup {
    cokernel(&laplacian(g))
}

/// Torsion part `K(G)` of the Picard group.
pub fn critical_group(g: &Multigraph) -> AbGroup {
    AbGroup::new(0, pic_group(g).torsion().to_vec())
}

/// Number of spanning trees, as the determinant of the Laplacian with the
/// first row and column removed.
pub fn spanning_tree_count(g: &Multigraph) -> Int {
    let n = g.vertex_count();
    let keep: Vec<usize> = (1..n).collect();
    laplacian(g).select_rows(&keep).select_columns(&keep).determinant().abs()
}

/// `|E| - |V| + 1`.
pub fn genus(g: &Multigraph) -> usize {
    g.edge_count() + 1 - g.vertex_count()
}
