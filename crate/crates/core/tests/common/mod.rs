#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropic_pic::divisor_theory::{Divisor, DivisorSystem};
use tropic_pic::exact_lattice::{Int, Lattice};
use tropic_pic::multigraph::Multigraph;
use tropic_pic::product_complex::{build_product, DiagonalPolicy};

/// Paths, cycles, complete graphs and theta graphs with at most five vertices.
pub fn battery_graphs() -> Vec<(String, Multigraph)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("P{n}"), Multigraph::path(n)));
    }
    for n in 3..=5 {
        out.push((format!("C{n}"), Multigraph::cycle(n)));
    }
    for n in 4..=5 {
        out.push((format!("K{n}"), Multigraph::complete(n)));
    }
    for n in 2..=3 {
        out.push((format!("theta{n}"), Multigraph::theta(n)));
    }
    out
}

pub struct BatteryProduct {
    pub name: String,
    pub sys: DivisorSystem,
}

/// Every unordered pair of battery graphs under the standard policy and
/// one seeded random policy.
pub fn battery() -> &'static [BatteryProduct] {
    static BATTERY: OnceLock<Vec<BatteryProduct>> = OnceLock::new();
    BATTERY.get_or_init(|| {
        let graphs = battery_graphs();
        let mut out = Vec::new();
        for i in 0..graphs.len() {
            for j in i..graphs.len() {
                let seed = 1000 + (i * graphs.len() + j) as u64;
                for policy in [DiagonalPolicy::Standard, DiagonalPolicy::SeededRandom(seed)] {
                    let tp = build_product(&graphs[i].1, &graphs[j].1, &policy).unwrap();
                    out.push(BatteryProduct {
                        name: format!("{}x{} [{}]", graphs[i].0, graphs[j].0, policy),
                        sys: DivisorSystem::new(tp),
                    });
                }
            }
        }
        out
    })
}

/// Random integer combination of lattice basis vectors, coefficients in [-3, 3].
pub fn random_member(l: &Lattice, rng: &mut ChaCha8Rng) -> Divisor {
    let mut v = vec![Int::from(0); l.ambient_dim()];
    for b in l.basis_vectors() {
        let c = Int::from(rng.gen_range(-3i64..=3));
        for (x, y) in v.iter_mut().zip(&b) {
            *x += &c * y;
        }
    }
    Divisor(v)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on 2..=max_n vertices: a random tree plus up to
/// `max_extra` additional edges (possibly parallel).
pub fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            let extra = prop::collection::vec((0..n, 0..n), 0..=max_extra);
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut pairs: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            pairs.extend(extra.into_iter().filter(|(a, b)| a != b));
            Multigraph::from_index_edges(n, &pairs)
        })
}

/// As [`connected_graph`] but without parallel edges.
pub fn simple_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    connected_graph(max_n, max_extra).prop_map(|g| {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for e in g.edges() {
            let p = e.sorted_ends();
            if !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        Multigraph::from_index_edges(g.vertex_count(), &pairs)
    })
}

pub fn tree(max_n: usize) -> impl Strategy<Value = Multigraph> {
    connected_graph(max_n, 0)
}

pub fn policy() -> impl Strategy<Value = DiagonalPolicy> {
    prop_oneof![Just(DiagonalPolicy::Standard), any::<u64>().prop_map(DiagonalPolicy::SeededRandom)]
}
