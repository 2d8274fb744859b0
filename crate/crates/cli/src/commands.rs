//! The four subcommands and the records they emit.

use std::io::Write;
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use tropic_pic::divisor_theory::{DivisorSystem, PLFunction};
use tropic_pic::exact_lattice::{kernel, AbGroup, Int, IntMatrix, IntValue};
use tropic_pic::multigraph::{critical_group, genus, laplacian, pic_group, spanning_tree_count, GraphDivisor};
use tropic_pic::product_complex::{build_product, DiagonalPolicy};
use tropic_pic::product_maps::{
    beta, conjecture_report, gamma_cokernel, gamma_injectivity_check, harmonic_check, ConjectureReport, GammaError,
};

use crate::input::{self, NamedGraph};
use crate::{Format, Options};

/// Whether a command found a result contradicting a proven statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    Violation,
}

fn int<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
    IntValue(x).serialize(s)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn render<T: Serialize>(report: &T, format: Format, text: impl FnOnce(&T) -> String) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => text(report),
    })
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value.as_deref().with_context(|| format!("{flag} is required"))
}

#[derive(Serialize)]
struct Input {
    g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct GraphReport {
    command: &'static str,
    input: Input,
    vertices: usize,
    edges: usize,
    genus: usize,
    #[serde(serialize_with = "int")]
    spanning_trees: Int,
    pic: AbGroup,
    critical_group: AbGroup,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn pic_graph(opts: &Options) -> Result<(String, Verdict)> {
    let start = Instant::now();
    let NamedGraph { label, graph } = input::graph(required(&opts.g, "--g")?)?;
    let report = GraphReport {
        command: "pic-graph",
        input: Input {
            g: label,
            h: None,
            policy: None,
            seed: None,
        },
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        genus: genus(&graph),
        spanning_trees: spanning_tree_count(&graph),
        pic: pic_group(&graph),
        critical_group: critical_group(&graph),
        timing_ms: opts.timings.then(|| ms(start)),
    };
    let out = render(&report, opts.format, |r| {
        let mut rows = vec![
            ("graph", format!("{} ({} vertices, {} edges)", r.input.g, r.vertices, r.edges)),
            ("genus", r.genus.to_string()),
            ("spanning trees", r.spanning_trees.to_string()),
            ("Pic", r.pic.to_string()),
            ("critical group", r.critical_group.to_string()),
        ];
        if let Some(t) = r.timing_ms {
            rows.push(("time (ms)", format!("{t:.1}")));
        }
        table(&rows)
    })?;
    Ok((out, Verdict::Clean))
}

/// Both factors, the policy and the divisor system of their product.
struct ProductInput {
    input: Input,
    g: NamedGraph,
    h: NamedGraph,
    sys: DivisorSystem,
}

fn product_input(opts: &Options) -> Result<ProductInput> {
    let g = input::graph(required(&opts.g, "--g")?)?;
    let h = input::graph(required(&opts.h, "--h")?)?;
    let policy = input::policy(&opts.policy, opts.seed)?;
    let tp = build_product(&g.graph, &h.graph, &policy)?;
    Ok(ProductInput {
        input: Input {
            g: g.label.clone(),
            h: Some(h.label.clone()),
            policy: Some(policy.to_string()),
            seed: opts.seed,
        },
        g,
        h,
        sys: DivisorSystem::new(tp),
    })
}

#[derive(Serialize)]
struct ProductShape {
    vertices: usize,
    edges: usize,
    diagonals: usize,
    triangles: usize,
}

#[derive(Serialize)]
struct Ranks {
    principal: usize,
    cartier: usize,
    q_cartier: usize,
    balancing_kernel: usize,
}

#[derive(Serialize)]
struct Matrices<'a> {
    principal: &'a IntMatrix,
    balancing: &'a IntMatrix,
}

#[derive(Serialize)]
struct ProductReport<'a> {
    command: &'static str,
    input: &'a Input,
    product: ProductShape,
    balancing_shape: [usize; 2],
    ranks: Ranks,
    pic: AbGroup,
    cl: AbGroup,
    pic_g: AbGroup,
    pic_h: AbGroup,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Matrices<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

pub fn pic_product(opts: &Options) -> Result<(String, Verdict)> {
    let start = Instant::now();
    let p = product_input(opts)?;
    let (sys, tp) = (&p.sys, p.sys.product());
    let b = sys.balancing_matrix();
    let report = ProductReport {
        command: "pic-product",
        input: &p.input,
        product: ProductShape {
            vertices: tp.vertex_count(),
            edges: tp.edge_count(),
            diagonals: tp.diagonal_range().len(),
            triangles: tp.triangles().len(),
        },
        balancing_shape: [b.rows(), b.cols()],
        ranks: Ranks {
            principal: sys.prin_lattice().rank(),
            cartier: sys.cart_lattice().rank(),
            q_cartier: sys.qcart_lattice().rank(),
            balancing_kernel: kernel(b).rank(),
        },
        pic: sys.pic(),
        cl: sys.cl(),
        pic_g: pic_group(&p.g.graph),
        pic_h: pic_group(&p.h.graph),
        matrices: opts.matrices.then(|| Matrices {
            principal: sys.principal_matrix(),
            balancing: b,
        }),
        timing_ms: opts.timings.then(|| ms(start)),
    };
    let out = render(&report, opts.format, |r| {
        let mut rows = vec![
            ("G", r.input.g.clone()),
            ("H", r.input.h.clone().unwrap_or_default()),
            ("policy", r.input.policy.clone().unwrap_or_default()),
            (
                "product",
                format!(
                    "{} vertices, {} edges ({} diagonal), {} triangles",
                    r.product.vertices, r.product.edges, r.product.diagonals, r.product.triangles
                ),
            ),
            ("balancing matrix", format!("{}x{}", r.balancing_shape[0], r.balancing_shape[1])),
            (
                "ranks",
                format!(
                    "principal {}, Cartier {}, Q-Cartier {}, balancing kernel {}",
                    r.ranks.principal, r.ranks.cartier, r.ranks.q_cartier, r.ranks.balancing_kernel
                ),
            ),
            ("Pic(Δ)", r.pic.to_string()),
            ("Cl(Δ)", r.cl.to_string()),
            ("Pic(G)", r.pic_g.to_string()),
            ("Pic(H)", r.pic_h.to_string()),
        ];
        if let Some(t) = r.timing_ms {
            rows.push(("time (ms)", format!("{t:.1}")));
        }
        let mut s = table(&rows);
        if let Some(m) = &r.matrices {
            s += &format!("principal matrix\n{}balancing matrix\n{}", m.principal, m.balancing);
        }
        s
    })?;
    Ok((out, Verdict::Clean))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    /// Computed and reported; no statement constrains the value.
    Info,
    /// The check does not apply to these factors.
    Skipped,
    /// The map under test is not defined on these factors.
    Undefined,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

#[derive(Serialize)]
struct CheckReport<'a> {
    command: &'static str,
    input: &'a Input,
    checks: Vec<Check>,
    violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

fn pass_fail(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn checks(p: &ProductInput) -> Vec<Check> {
    let (sys, tp) = (&p.sys, p.sys.product());
    let (ng, nh) = (tp.g().vertex_count(), tp.h().vertex_count());
    let mut out = Vec::new();

    let bad_edges = tp.weak_complex_violations().len();
    out.push(Check {
        name: "weight_axiom",
        status: pass_fail(bad_edges == 0),
        detail: format!("{bad_edges} of {} edges violate Σ_v α(r,v) = deg(r)", tp.edge_count()),
    });

    // β of a graph Laplacian column equals div of the level indicator
    let mut bad_levels = 0;
    let (lg, lh) = (laplacian(tp.g()), laplacian(tp.h()));
    for v in 0..nh {
        let lhs = beta(tp, &GraphDivisor::zero(ng), &GraphDivisor(lh.column(v)));
        let level = PLFunction((0..tp.vertex_count()).map(|x| Int::from(u8::from(tp.coordinates(x).1 == v))).collect());
        bad_levels += usize::from(lhs != sys.div(&level));
    }
    for u in 0..ng {
        let lhs = beta(tp, &GraphDivisor(lg.column(u)), &GraphDivisor::zero(nh));
        let level = PLFunction((0..tp.vertex_count()).map(|x| Int::from(u8::from(tp.coordinates(x).0 == u))).collect());
        bad_levels += usize::from(lhs != sys.div(&level));
    }
    out.push(Check {
        name: "level_sum_identity",
        status: pass_fail(bad_levels == 0),
        detail: format!("{bad_levels} of {} levels disagree", ng + nh),
    });

    let injective = gamma_injectivity_check(sys);
    out.push(Check {
        name: "gamma_injective",
        status: pass_fail(injective),
        detail: format!("β⁻¹(Prin(Δ)) {} Prin(G) × Prin(H)", if injective { "=" } else { "≠" }),
    });

    let tree_factor = tp.g().is_tree() || tp.h().is_tree();
    out.push(match gamma_cokernel(sys) {
        Ok(q) if tree_factor => Check {
            name: "gamma_cokernel",
            status: pass_fail(q.is_trivial()),
            detail: format!("coker γ = {q} with a tree factor"),
        },
        Ok(q) => Check {
            name: "gamma_cokernel",
            status: Status::Info,
            detail: format!("coker γ = {q}"),
        },
        Err(GammaError::BetaNotCartier { side, vertex }) => Check {
            name: "gamma_cokernel",
            status: Status::Undefined,
            detail: format!("β of the unit divisor at vertex {vertex} of {side:?} is not Cartier"),
        },
        Err(e) => Check {
            name: "gamma_cokernel",
            status: Status::Fail,
            detail: e.to_string(),
        },
    });

    out.push(match harmonic_check(tp) {
        Ok((hg, hh)) => {
            let ones = tropic_pic::divisor_theory::Divisor(vec![Int::from(1); tp.edge_count()]);
            let q = sys.is_q_cartier(&ones);
            Check {
                name: "harmonic_equivalence",
                status: pass_fail((hg && hh) == q),
                detail: format!("φ_G harmonic {hg}, φ_H harmonic {hh}, all-ones Q-Cartier {q}"),
            }
        }
        Err(e) => Check {
            name: "harmonic_equivalence",
            status: Status::Skipped,
            detail: e.to_string(),
        },
    });
    out
}

pub fn check(opts: &Options) -> Result<(String, Verdict)> {
    let start = Instant::now();
    let p = product_input(opts)?;
    let checks = checks(&p);
    let violations = checks.iter().filter(|c| c.status == Status::Fail).count();
    let report = CheckReport {
        command: "check",
        input: &p.input,
        checks,
        violations,
        timing_ms: opts.timings.then(|| ms(start)),
    };
    let out = render(&report, opts.format, |r| {
        let mut rows: Vec<(&str, String)> = r
            .checks
            .iter()
            .map(|c| {
                let status = serde_json::to_value(c.status).expect("status serializes");
                (c.name, format!("{:<9} {}", status.as_str().unwrap_or_default(), c.detail))
            })
            .collect();
        rows.push(("violations", r.violations.to_string()));
        if let Some(t) = r.timing_ms {
            rows.push(("time (ms)", format!("{t:.1}")));
        }
        format!("G {} x H {} [{}]\n", r.input.g, r.input.h.as_deref().unwrap_or(""), r.input.policy.as_deref().unwrap_or(""))
            + &table(&rows)
    })?;
    let verdict = if violations == 0 {
        Verdict::Clean
    } else {
        Verdict::Violation
    };
    Ok((out, verdict))
}

fn sweep_item(g: &NamedGraph, h: &NamedGraph, policy: &DiagonalPolicy, timings: bool) -> Result<(ConjectureReport, bool)> {
    let mut report = conjecture_report(&g.graph, &h.graph, policy)?;
    report.g.label = g.label.clone();
    report.h.label = h.label.clone();
    if !timings {
        report.timings_ms = None;
    }
    // with a tree factor and no parallel edges the isomorphism is a theorem
    let proven = (g.graph.is_tree() || h.graph.is_tree()) && g.graph.is_simple() && h.graph.is_simple();
    let violation = proven && !report.matches;
    Ok((report, violation))
}

fn sweep_line(report: &ConjectureReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string(report)?,
        Format::Text => {
            let mut s = format!(
                "{} x {} [{}]: Pic(Δ) = {}, predicted {}, {}",
                report.g.label,
                report.h.label,
                report.policy,
                report.pic_delta,
                report.predicted,
                if report.matches { "match" } else { "differs" }
            );
            if let Some(t) = &report.timings_ms {
                s += &format!(" ({:.1} ms)", t.total);
            }
            s
        }
    })
}

/// Runs the cross product in parallel and writes one line per item, in input order, as soon as
/// every earlier item is done.
pub fn sweep(opts: &Options, out: &mut dyn Write) -> Result<Verdict> {
    let gs = input::graphs(required(&opts.g, "--g")?)?;
    let hs = input::graphs(required(&opts.h, "--h")?)?;
    let policies = input::policies(&opts.policy, opts.seed)?;
    let mut items = Vec::new();
    for g in &gs {
        for h in &hs {
            for p in &policies {
                items.push((g, h, p));
            }
        }
    }
    let (tx, rx) = mpsc::channel();
    let mut verdict = Verdict::Clean;
    std::thread::scope(|scope| -> Result<()> {
        let items = &items;
        scope.spawn(move || {
            items.par_iter().enumerate().for_each_with(tx, |tx, (k, (g, h, p))| {
                let _ = tx.send((k, sweep_item(g, h, p, opts.timings)));
            });
        });
        let mut pending: Vec<Option<Result<(ConjectureReport, bool)>>> = (0..items.len()).map(|_| None).collect();
        let mut next = 0;
        for (k, result) in rx {
            pending[k] = Some(result);
            while let Some(slot) = pending.get_mut(next).and_then(Option::take) {
                let (report, violation) = slot?;
                if violation {
                    verdict = Verdict::Violation;
                }
                writeln!(out, "{}", sweep_line(&report, opts.format)?)?;
                out.flush()?;
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(verdict)
}
