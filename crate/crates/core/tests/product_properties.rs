mod common;

use proptest::prelude::*;
use tropic_pic::divisor_theory::DivisorSystem;
use tropic_pic::multigraph::Multigraph;
use tropic_pic::product_complex::{build_product, DiagonalChoice, DiagonalPolicy, EdgeKind, TriangulatedProduct};

use common::{connected_graph, policy};

/// Same graph with its vertex order permuted; IDs and edges unchanged.
fn permuted(g: &Multigraph, perm: &[usize]) -> Multigraph {
    let vertices: Vec<String> = perm.iter().map(|&i| g.vertex_id(i).to_string()).collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.id.clone(), g.vertex_id(e.ends.0).to_string(), g.vertex_id(e.ends.1).to_string()));
    Multigraph::new(vertices, edges).unwrap()
}

/// Explicit policy on `(g2, h)` reproducing the diagonals of `tp`, matched by vertex IDs.
fn transported(tp: &TriangulatedProduct, g2: &Multigraph) -> DiagonalPolicy {
    let choices = tp
        .squares()
        .iter()
        .map(|s| {
            let ge = tp.g().edge(s.g_edge);
            let he = tp.h().edge(s.h_edge);
            let [p, _] = tp.edge(s.diagonal).ends;
            let (pa, pb) = tp.coordinates(p);
            let a = g2.vertex_index(tp.g().vertex_id(pa)).unwrap();
            let (a0, _) = g2.edge(g2.edge_index(&ge.id).unwrap()).sorted_ends();
            let (b0, _) = he.sorted_ends();
            // standard diagonals pair the smaller ends of both edges
            let flipped = (a == a0) != (pb == b0);
            DiagonalChoice {
                g_edge: ge.id.clone(),
                h_edge: he.id.clone(),
                flipped,
            }
        })
        .collect();
    DiagonalPolicy::Explicit(choices)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weights_sum_to_edge_degree(g in connected_graph(4, 2), h in connected_graph(4, 2), p in policy()) {
        let tp = build_product(&g, &h, &p).unwrap();
        prop_assert!(tp.weak_complex_violations().is_empty());
        for e in 0..tp.edge_count() {
            let ends = tp.edge(e).ends;
            prop_assert_eq!(tp.alpha(e, ends[0]) + tp.alpha(e, ends[1]), tp.edge_degree(e) as i64);
            prop_assert!(tp.alpha(e, ends[0]) >= 0 && tp.alpha(e, ends[1]) >= 0);
        }
    }

    #[test]
    fn cell_counts(g in connected_graph(5, 2), h in connected_graph(4, 2), p in policy()) {
        let tp = build_product(&g, &h, &p).unwrap();
        let (vg, eg, vh, eh) = (g.vertex_count(), g.edge_count(), h.vertex_count(), h.edge_count());
        prop_assert_eq!(tp.vertex_count(), vg * vh);
        prop_assert_eq!(tp.edge_count(), eg * vh + vg * eh + eg * eh);
        prop_assert_eq!(tp.triangles().len(), 2 * eg * eh);
        for v in 0..tp.vertex_count() {
            let (a, b) = tp.coordinates(v);
            prop_assert_eq!(tp.graph_star(v).len(), g.degree(a) + h.degree(b) + tp.diagonal_degree(v));
        }
        let diagonal_ends: usize = (0..tp.vertex_count()).map(|v| tp.diagonal_degree(v)).sum();
        prop_assert_eq!(diagonal_ends, 2 * eg * eh);
    }

    #[test]
    fn horizontal_weight_formula(g in connected_graph(4, 2), h in connected_graph(4, 2), p in policy()) {
        // α((a,b)–(x,b), (a,b)) = deg_H(b) − #{diagonals at (a,b) over the same G-edge}
        let tp = build_product(&g, &h, &p).unwrap();
        for e in tp.horizontal_range() {
            let EdgeKind::Horizontal { g_edge, h_vertex } = tp.edge(e).kind else { unreachable!() };
            for v in tp.edge(e).ends {
                let diagonals = tp
                    .graph_star(v)
                    .iter()
                    .filter(|&&d| matches!(tp.edge(d).kind, EdgeKind::Diagonal { g_edge: x, .. } if x == g_edge))
                    .count();
                prop_assert_eq!(tp.alpha(e, v), (h.degree(h_vertex) - diagonals) as i64);
            }
        }
    }

    #[test]
    fn links_close_triangles(g in connected_graph(4, 1), h in connected_graph(4, 1), p in policy()) {
        let tp = build_product(&g, &h, &p).unwrap();
        for v in 0..tp.vertex_count() {
            for &e in tp.link_edges(v) {
                prop_assert!(!tp.edge(e).contains(v));
                prop_assert!(tp.triangles_of_edge(e).iter().any(|&t| tp.triangles()[t].vertices.contains(&v)));
            }
        }
    }

    #[test]
    fn relabeling_preserves_groups(
        g in connected_graph(4, 1),
        h in connected_graph(3, 1),
        seed in any::<u64>(),
        shuffle in any::<u64>(),
    ) {
        let tp = build_product(&g, &h, &DiagonalPolicy::SeededRandom(seed)).unwrap();
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.sort_by_key(|&i| (i as u64 + 1).wrapping_mul(shuffle | 1).rotate_left(17));
        let g2 = permuted(&g, &perm);
        let tp2 = build_product(&g2, &h, &transported(&tp, &g2)).unwrap();
        let mut w1: Vec<i64> = (0..tp.edge_count()).flat_map(|e| tp.edge(e).ends.map(|v| tp.alpha(e, v))).collect();
        let mut w2: Vec<i64> = (0..tp2.edge_count()).flat_map(|e| tp2.edge(e).ends.map(|v| tp2.alpha(e, v))).collect();
        w1.sort_unstable();
        w2.sort_unstable();
        prop_assert_eq!(w1, w2);
        let (s1, s2) = (DivisorSystem::new(tp), DivisorSystem::new(tp2));
        prop_assert_eq!(s1.pic(), s2.pic());
        prop_assert_eq!(s1.cl(), s2.cl());
    }
}

#[test]
fn explicit_policy_round_trips_random_choices() {
    let (g, h) = (Multigraph::cycle(4), Multigraph::complete(4));
    let tp = build_product(&g, &h, &DiagonalPolicy::SeededRandom(77)).unwrap();
    let text: String = tp
        .squares()
        .iter()
        .map(|s| format!("d {} {} {}\n", g.edge(s.g_edge).id, h.edge(s.h_edge).id, u8::from(s.flipped)))
        .collect();
    let again = build_product(&g, &h, &DiagonalPolicy::parse_explicit(&text).unwrap()).unwrap();
    assert_eq!(tp.edges(), again.edges());
    assert_eq!(tp.triangles(), again.triangles());
}
