mod common;

use num_traits::Zero;
use proptest::prelude::*;
use tropic_pic::divisor_theory::{Divisor, DivisorSystem, PLFunction};
use tropic_pic::exact_lattice::{Int, IntMatrix};
use tropic_pic::multigraph::{is_graph_principal, laplacian, GraphDivisor, Multigraph};
use tropic_pic::product_complex::{build_product, DiagonalPolicy};
use tropic_pic::product_maps::{
    beta, beta_image_check, beta_matrix, diagonal_reduce, gamma_cokernel, gamma_injectivity_check, harmonic_check,
    OrientedCoboundary, Side,
};

use common::{connected_graph, policy, random_member, rng, simple_graph, tree};

fn ints(values: &[i64]) -> Vec<Int> {
    values.iter().map(|&v| Int::from(v)).collect()
}

/// Every square minor of order at most `k` lies in {-1, 0, 1}.
fn minors_are_unimodular(m: &IntMatrix, k: usize) -> bool {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    (1..=k.min(m.rows()).min(m.cols())).all(|size| {
        subsets(m.rows(), size).iter().all(|rows| {
            subsets(m.cols(), size).iter().all(|cols| {
                let d = m.select_rows(rows).select_columns(cols).determinant();
                d >= Int::from(-1) && d <= Int::from(1)
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn beta_is_linear_and_injective(
        g in simple_graph(4, 3),
        h in simple_graph(4, 3),
        p in policy(),
        a in prop::collection::vec(-4i64..=4, 8),
        b in prop::collection::vec(-4i64..=4, 8),
    ) {
        let tp = build_product(&g, &h, &p).unwrap();
        let (ng, nh) = (g.vertex_count(), h.vertex_count());
        let bm = beta_matrix(&tp);
        prop_assert_eq!(bm.rank(), ng + nh);
        let c = GraphDivisor(ints(&a[..ng]));
        let d = GraphDivisor(ints(&b[..nh]));
        let image = beta(&tp, &c, &d);
        prop_assert_eq!(&image.0, &bm.mul_vec(&[c.0.clone(), d.0.clone()].concat()));
        let twice = beta(&tp, &GraphDivisor(c.0.iter().map(|x| x * 2).collect()), &GraphDivisor::zero(nh));
        prop_assert_eq!(twice, beta(&tp, &c, &GraphDivisor::zero(nh)).add(&beta(&tp, &c, &GraphDivisor::zero(nh))));
        prop_assert!(tp.diagonal_range().all(|e| image.0[e].is_zero()));
        let sys = DivisorSystem::new(tp);
        prop_assert!(sys.is_cartier(&image));
        prop_assert_eq!(beta_image_check(&sys, &image), Some((c, d)));
    }

    #[test]
    fn beta_is_injective_on_multigraphs(g in connected_graph(4, 2), h in connected_graph(4, 2), p in policy()) {
        let tp = build_product(&g, &h, &p).unwrap();
        prop_assert_eq!(beta_matrix(&tp).rank(), g.vertex_count() + h.vertex_count());
    }

    #[test]
    fn beta_preserves_principal_divisors(g in connected_graph(4, 2), h in connected_graph(4, 2), p in policy()) {
        let sys = DivisorSystem::new(build_product(&g, &h, &p).unwrap());
        let tp = sys.product();
        let (lg, lh) = (laplacian(&g), laplacian(&h));
        let (ng, nh) = (g.vertex_count(), h.vertex_count());
        for u in 0..ng {
            let d = beta(tp, &GraphDivisor(lg.column(u)), &GraphDivisor::zero(nh));
            prop_assert!(sys.is_principal(&d));
            let mut level = Divisor::zero(tp.edge_count());
            for w in 0..nh {
                level = level.add(&sys.div(&PLFunction::indicator(tp.vertex_count(), tp.vertex(u, w))));
            }
            prop_assert_eq!(d, level);
        }
        for v in 0..nh {
            let d = beta(tp, &GraphDivisor::zero(ng), &GraphDivisor(lh.column(v)));
            prop_assert!(sys.is_principal(&d));
        }
    }

    #[test]
    fn injectivity_holds(g in connected_graph(4, 2), h in connected_graph(3, 2), p in policy()) {
        let sys = DivisorSystem::new(build_product(&g, &h, &p).unwrap());
        prop_assert!(gamma_injectivity_check(&sys));
    }

    #[test]
    fn tree_factor_reduces(g in simple_graph(4, 3), t in tree(4), p in policy(), seed in any::<u64>(), swap in any::<bool>()) {
        let (g, h) = if swap { (t, g) } else { (g, t) };
        let sys = DivisorSystem::new(build_product(&g, &h, &p).unwrap());
        prop_assert!(gamma_cokernel(&sys).unwrap().is_trivial());
        let mut r = rng(seed);
        for _ in 0..5 {
            let d = random_member(sys.cart_lattice(), &mut r);
            let red = diagonal_reduce(&sys, &d).unwrap();
            prop_assert!(sys.product().diagonal_range().all(|e| red.reduced.0[e].is_zero()));
            prop_assert_eq!(d.sub(&red.reduced), sys.div(&red.phi));
            prop_assert!(sys.is_cartier(&red.reduced));
            let (c, dh) = beta_image_check(&sys, &red.reduced).unwrap();
            prop_assert_eq!(beta(sys.product(), &c, &dh), red.reduced);
        }
    }

    #[test]
    fn harmonic_matches_all_ones(g in simple_graph(4, 3), h in simple_graph(4, 3), p in policy()) {
        let sys = DivisorSystem::new(build_product(&g, &h, &p).unwrap());
        let (hg, hh) = harmonic_check(sys.product()).unwrap();
        let ones = Divisor(vec![Int::from(1); sys.product().edge_count()]);
        prop_assert_eq!(hg && hh, sys.is_q_cartier(&ones));
    }

    #[test]
    fn coboundary_is_totally_unimodular(g in simple_graph(5, 3), p in policy()) {
        let tp = build_product(&g, &Multigraph::path(1), &p).unwrap();
        let o = OrientedCoboundary::for_layer(&tp, Side::H, 0, 1);
        prop_assert_eq!(o.matrix.rank(), g.vertex_count() - 1);
        prop_assert!(minors_are_unimodular(&o.matrix, 4));
    }
}

#[test]
fn coboundary_cycle_relations() {
    for n in 3..=6 {
        for seed in 0..4 {
            let g = Multigraph::cycle(n);
            let tp = build_product(&g, &Multigraph::path(1), &DiagonalPolicy::SeededRandom(seed)).unwrap();
            let o = OrientedCoboundary::for_layer(&tp, Side::H, 0, 1);
            // walk 0 -> 1 -> ... -> n-1 -> 0; edge i joins i and i+1
            let mut sum = vec![Int::zero(); n];
            for i in 0..n {
                let next = (i + 1) % n;
                let sign = o.matrix[(i, next)].clone();
                for (s, x) in sum.iter_mut().zip(o.matrix.row(i)) {
                    *s += &sign * x;
                }
            }
            assert!(sum.iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn reduced_divisors_split_into_graph_divisors() {
    let sys = DivisorSystem::new(build_product(&Multigraph::cycle(3), &Multigraph::path(2), &DiagonalPolicy::Standard).unwrap());
    let mut r = rng(5);
    for _ in 0..20 {
        let phi = PLFunction((0..9).map(|_| Int::from(rand::Rng::gen_range(&mut r, -3i64..=3))).collect());
        let d = sys.div(&phi);
        let red = diagonal_reduce(&sys, &d).unwrap();
        let (c, h) = beta_image_check(&sys, &red.reduced).unwrap();
        assert!(is_graph_principal(sys.product().g(), &c));
        assert!(is_graph_principal(sys.product().h(), &h));
    }
}
