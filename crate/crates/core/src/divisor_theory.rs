//! Ridge divisors on a triangulated product: divisors of PL functions, the
//! principal and balancing matrices, the principal / Cartier / Q-Cartier
//! predicates, and the groups Pic(Δ) and Cl(Δ).

use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::exact_lattice::{kernel, smith_with_row_transform, AbGroup, Int, IntMatrix, Lattice};
use crate::product_complex::TriangulatedProduct;

/// Integer coefficient per edge of Δ, in the global edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor(pub Vec<Int>);

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Divisor(vec![Int::zero(); n])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Divisor(values.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn unit(n: usize, e: usize) -> Self {
        let mut d = Divisor::zero(n);
        d.0[e] = Int::one();
        d
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        assert_eq!(self.0.len(), other.0.len(), "divisor lengths differ");
        Divisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        assert_eq!(self.0.len(), other.0.len(), "divisor lengths differ");
        Divisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// JSON view: a map edge-ID → coefficient with zero entries omitted.
    pub fn view<'a>(&'a self, tp: &'a TriangulatedProduct) -> DivisorView<'a> {
        DivisorView { tp, divisor: self }
    }
}

pub struct DivisorView<'a> {
    tp: &'a TriangulatedProduct,
    divisor: &'a Divisor,
}

impl Serialize for DivisorView<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let nonzero: Vec<(usize, &Int)> = self
            .divisor
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut map = serializer.serialize_map(Some(nonzero.len()))?;
        for (e, c) in nonzero {
            map.serialize_entry(&self.tp.edge(e).id, &crate::exact_lattice::IntValue(c))?;
        }
        map.end()
    }
}

/// Integer value per vertex of Δ; the PL function is linear on each simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLFunction(pub Vec<Int>);

impl PLFunction {
    pub fn zero(n: usize) -> Self {
        PLFunction(vec![Int::zero(); n])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        PLFunction(values.iter().map(|&x| Int::from(x)).collect())
    }

    /// Indicator function of vertex `v`.
    pub fn indicator(n: usize, v: usize) -> Self {
        let mut f = PLFunction::zero(n);
        f.0[v] = Int::one();
        f
    }

    pub fn values(&self) -> &[Int] {
        &self.0
    }
}

/// `Div(φ)(r) = Σ_{triangles f ⊇ r} φ(f ∖ r) − Σ_{v ∈ r} α(r, v) φ(v)`.
pub fn div(tp: &TriangulatedProduct, phi: &PLFunction) -> Divisor {
    assert_eq!(phi.0.len(), tp.vertex_count(), "one value per vertex expected");
    let coeffs = (0..tp.edge_count())
        .map(|r| {
            let mut c = Int::zero();
            for &t in tp.triangles_of_edge(r) {
                c += &phi.0[tp.opposite_vertex(t, r)];
            }
            for v in tp.edge(r).ends {
                c -= tp.alpha(r, v) * &phi.0[v];
            }
            c
        })
        .collect();
    Divisor(coeffs)
}

/// `|E(Δ)| × |V(Δ)|` matrix whose column `v` is `div(φ_v)`: entry `−α(e, v)`
/// for `v ∈ e`, plus one for each triangle through `e` with apex `v`.
pub fn principal_matrix(tp: &TriangulatedProduct) -> IntMatrix {
    let mut m = IntMatrix::zeros(tp.edge_count(), tp.vertex_count());
    for (e, edge) in tp.edges().iter().enumerate() {
        for v in edge.ends {
            m[(e, v)] -= tp.alpha(e, v);
        }
    }
    for tri in tp.triangles() {
        for &e in &tri.edges {
            let ends = tp.edge(e).ends;
            for &v in &tri.vertices {
                if !ends.contains(&v) {
                    m[(e, v)] += 1;
                }
            }
        }
    }
    m
}

/// Rows of the principal matrix indexed by `graph_star(v)`, all columns kept.
pub fn local_matrix(tp: &TriangulatedProduct, v: usize) -> IntMatrix {
    principal_matrix(tp).select_rows(tp.graph_star(v))
}

/// Balancing conditions at every vertex `(a, b)`: for the G-edges
/// `x_1, …, x_k` at `a`, rows `Ξ(x_1) − Ξ(x_i)`, where `Ξ(x)` sums the
/// coefficients of the Δ-edges at `(a, b)` lying over `x`; then the same
/// for the H-edges at `b` with `Υ`.
pub fn balancing_matrix(tp: &TriangulatedProduct) -> IntMatrix {
    type Over = fn(&crate::product_complex::ProductEdge) -> Option<usize>;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for v in 0..tp.vertex_count() {
        let (a, b) = tp.coordinates(v);
        let star = tp.graph_star(v);
        let g_inc = tp.g().incident_edges(a);
        let h_inc = tp.h().incident_edges(b);
        let sides: [(&[usize], Over); 2] = [(g_inc, |e| e.g_edge()), (h_inc, |e| e.h_edge())];
        for (incident, over) in sides {
            let Some((&first, rest)) = incident.split_first() else {
                continue;
            };
            for &x in rest {
                let mut row = vec![0i64; tp.edge_count()];
                for &e in star {
                    let o = over(tp.edge(e));
                    if o == Some(first) {
                        row[e] += 1;
                    }
                    if o == Some(x) {
                        row[e] -= 1;
                    }
                }
                rows.push(row);
            }
        }
    }
    IntMatrix::from_rows(&rows, tp.edge_count())
}

/// Integer conditions for `π_v(d)` to lie in the column lattice of `M_v`.
///
/// With `S M_v T = diag(d_i)`, `y = S π_v(d)` must satisfy `y_i ≡ 0 mod d_i`
/// for `i < rank` and `y_i = 0` beyond the rank. Rows with modulus 1 are
/// dropped; modulus 0 marks an equation.
#[derive(Clone, Debug)]
pub struct LocalConditions {
    pub star: Vec<usize>,
    pub rank: usize,
    pub rows: Vec<Vec<Int>>,
    pub moduli: Vec<Int>,
}

impl LocalConditions {
    fn new(star: &[usize], local: &IntMatrix) -> Self {
        let nonzero: Vec<usize> = (0..local.cols())
            .filter(|&j| (0..local.rows()).any(|i| !local[(i, j)].is_zero()))
            .collect();
        let compact = local.select_columns(&nonzero);
        let smith = smith_with_row_transform(&compact);
        let s = smith.s.as_ref().expect("row transform tracked");
        let diag = smith.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let mut rows = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..compact.rows() {
            let m = diag.get(i).filter(|_| i < rank).cloned().unwrap_or_else(Int::zero);
            if m.is_one() {
                continue;
            }
            rows.push(s.row(i).to_vec());
            moduli.push(m);
        }
        LocalConditions {
            star: star.to_vec(),
            rank,
            rows,
            moduli,
        }
    }

    /// Row over the star, extended by zeros to all `n` edges.
    pub fn lift(&self, row: &[Int], n: usize) -> Vec<Int> {
        let mut full = vec![Int::zero(); n];
        for (k, &e) in self.star.iter().enumerate() {
            full[e] = row[k].clone();
        }
        full
    }

    pub fn accepts(&self, d: &Divisor) -> bool {
        self.rows.iter().zip(&self.moduli).all(|(row, m)| {
            let mut y = Int::zero();
            for (k, &e) in self.star.iter().enumerate() {
                if !row[k].is_zero() {
                    y += &row[k] * &d.0[e];
                }
            }
            if m.is_zero() {
                y.is_zero()
            } else {
                y.mod_floor(m).is_zero()
            }
        })
    }
}

/// A product together with its principal and balancing matrices, local
/// Cartier conditions and lazily computed lattices.
#[derive(Debug)]
pub struct DivisorSystem {
    tp: TriangulatedProduct,
    principal: IntMatrix,
    balancing: IntMatrix,
    local: Vec<LocalConditions>,
    equations: IntMatrix,
    prin: OnceLock<Lattice>,
    cart: OnceLock<Lattice>,
    qcart: OnceLock<Lattice>,
}

impl DivisorSystem {
    pub fn new(tp: TriangulatedProduct) -> Self {
        let principal = principal_matrix(&tp);
        let balancing = balancing_matrix(&tp);
        let local = (0..tp.vertex_count())
            .map(|v| {
                let star = tp.graph_star(v);
                LocalConditions::new(star, &principal.select_rows(star))
            })
            .collect::<Vec<LocalConditions>>();
        let n = tp.edge_count();
        let mut eq_rows: Vec<Vec<Int>> = Vec::new();
        for lc in &local {
            for (row, m) in lc.rows.iter().zip(&lc.moduli) {
                if m.is_zero() {
                    eq_rows.push(lc.lift(row, n));
                }
            }
        }
        let equations = IntMatrix::from_rows(&eq_rows, n);
        DivisorSystem {
            tp,
            principal,
            balancing,
            local,
            equations,
            prin: OnceLock::new(),
            cart: OnceLock::new(),
            qcart: OnceLock::new(),
        }
    }

    pub fn product(&self) -> &TriangulatedProduct {
        &self.tp
    }

    pub fn principal_matrix(&self) -> &IntMatrix {
        &self.principal
    }

    pub fn balancing_matrix(&self) -> &IntMatrix {
        &self.balancing
    }

    pub fn local_matrix(&self, v: usize) -> IntMatrix {
        self.principal.select_rows(self.tp.graph_star(v))
    }

    pub fn local_conditions(&self, v: usize) -> &LocalConditions {
        &self.local[v]
    }

    pub fn div(&self, phi: &PLFunction) -> Divisor {
        Divisor(self.principal.mul_vec(&phi.0))
    }

    pub fn prin_lattice(&self) -> &Lattice {
        self.prin.get_or_init(|| Lattice::from_generators(&self.principal))
    }

    /// Rational local equations at all vertices: `d` is Q-Cartier iff
    /// `equations · d == 0`.
    pub fn local_equations(&self) -> &IntMatrix {
        &self.equations
    }

    /// Divisors with a Cartier multiple. For simple factors this is the
    /// kernel of the balancing matrix.
    pub fn qcart_lattice(&self) -> &Lattice {
        self.qcart.get_or_init(|| kernel(&self.equations))
    }

    /// Cartier lattice as the preimage of `0 ⊕ ⊕_i d_i Z` under the stacked
    /// local condition rows.
    pub fn cart_lattice(&self) -> &Lattice {
        self.cart.get_or_init(|| {
            let n = self.tp.edge_count();
            let mut rows: Vec<Vec<Int>> = Vec::new();
            let mut moduli: Vec<Int> = Vec::new();
            for lc in &self.local {
                for (row, m) in lc.rows.iter().zip(&lc.moduli) {
                    rows.push(lc.lift(row, n));
                    moduli.push(m.clone());
                }
            }
            if rows.is_empty() {
                return Lattice::full(n);
            }
            let a = IntMatrix::from_rows(&rows, n);
            let targets: Vec<Vec<Int>> = moduli
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(i, m)| {
                    let mut col = vec![Int::zero(); moduli.len()];
                    col[i] = m.clone();
                    col
                })
                .collect();
            Lattice::from_vectors(moduli.len(), &targets)
                .preimage(&a)
                .expect("row count matches")
        })
    }

    pub fn is_principal(&self, d: &Divisor) -> bool {
        self.check_len(d);
        self.prin_lattice().contains(&d.0)
    }

    pub fn is_cartier(&self, d: &Divisor) -> bool {
        self.check_len(d);
        self.local.iter().all(|lc| lc.accepts(d))
    }

    pub fn is_q_cartier(&self, d: &Divisor) -> bool {
        self.check_len(d);
        self.equations.mul_vec(&d.0).iter().all(Zero::is_zero)
    }

    /// `balancing_matrix · d == 0`. Equivalent to Q-Cartier when both
    /// factors are simple; weaker otherwise.
    pub fn is_balanced(&self, d: &Divisor) -> bool {
        self.check_len(d);
        self.balancing.mul_vec(&d.0).iter().all(Zero::is_zero)
    }

    pub fn pic(&self) -> AbGroup {
        self.cart_lattice()
            .quotient(self.prin_lattice())
            .expect("principal divisors are Cartier")
    }

    pub fn cl(&self) -> AbGroup {
        self.qcart_lattice()
            .quotient(self.prin_lattice())
            .expect("principal divisors are Q-Cartier")
    }

    fn check_len(&self, d: &Divisor) {
        assert_eq!(d.0.len(), self.tp.edge_count(), "divisor not sized to this product");
    }
}

pub fn is_principal(tp: &TriangulatedProduct, d: &Divisor) -> bool {
    assert_eq!(d.0.len(), tp.edge_count(), "divisor not sized to this product");
    Lattice::from_generators(&principal_matrix(tp)).contains(&d.0)
}

pub fn is_cartier(tp: &TriangulatedProduct, d: &Divisor) -> bool {
    DivisorSystem::new(tp.clone()).is_cartier(d)
}

pub fn is_q_cartier(tp: &TriangulatedProduct, d: &Divisor) -> bool {
    DivisorSystem::new(tp.clone()).is_q_cartier(d)
}

pub fn is_balanced(tp: &TriangulatedProduct, d: &Divisor) -> bool {
    assert_eq!(d.0.len(), tp.edge_count(), "divisor not sized to this product");
    balancing_matrix(tp).mul_vec(&d.0).iter().all(Zero::is_zero)
}

pub fn cart_lattice(tp: &TriangulatedProduct) -> Lattice {
    DivisorSystem::new(tp.clone()).cart_lattice().clone()
}

/// Cartier lattice as the intersection over all vertices of the preimage of
/// the local lattice under restriction to the star. Slower than
/// [`cart_lattice`]; kept as an independent route.
pub fn cart_lattice_by_intersection(tp: &TriangulatedProduct) -> Lattice {
    let n = tp.edge_count();
    let m = principal_matrix(tp);
    let mut acc = Lattice::full(n);
    for v in 0..tp.vertex_count() {
        let star = tp.graph_star(v);
        let local = Lattice::from_generators(&m.select_rows(star));
        let mut gens: Vec<Vec<Int>> = Vec::new();
        for b in local.basis_vectors() {
            let mut lift = vec![Int::zero(); n];
            for (k, &e) in star.iter().enumerate() {
                lift[e] = b[k].clone();
            }
            gens.push(lift);
        }
        for e in (0..n).filter(|e| !star.contains(e)) {
            let mut unit = vec![Int::zero(); n];
            unit[e] = Int::one();
            gens.push(unit);
        }
        acc = acc
            .intersect(&Lattice::from_vectors(n, &gens))
            .expect("same ambient dimension");
    }
    acc
}

pub fn pic(tp: &TriangulatedProduct) -> AbGroup {
    DivisorSystem::new(tp.clone()).pic()
}

pub fn cl(tp: &TriangulatedProduct) -> AbGroup {
    DivisorSystem::new(tp.clone()).cl()
}
