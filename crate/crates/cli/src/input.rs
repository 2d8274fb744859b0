//! Graph and policy arguments: family specs, graph files and policy files.

use std::fs;
use std::ops::RangeInclusive;

use anyhow::{bail, ensure, Context, Result};
use tropic_pic::multigraph::Multigraph;
use tropic_pic::product_complex::DiagonalPolicy;

/// A parsed graph together with the label it is reported under.
#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub label: String,
    pub graph: Multigraph,
}

const FAMILIES: &[&str] = &["path", "cycle", "complete", "theta", "tree"];

/// `a` or `a..b` (inclusive).
fn sizes(text: &str) -> Result<RangeInclusive<usize>> {
    let parse = |s: &str| s.parse::<usize>().with_context(|| format!("invalid size `{s}`"));
    let range = match text.split_once("..") {
        Some((lo, hi)) => parse(lo)?..=parse(hi)?,
        None => parse(text)?..=parse(text)?,
    };
    ensure!(!range.is_empty(), "empty size range `{text}`");
    Ok(range)
}

fn family_member(family: &str, n: usize, seed: Option<u64>) -> Result<NamedGraph> {
    let min = match family {
        "cycle" => 3,
        _ => 1,
    };
    ensure!(n >= min, "{family}:{n}: size must be at least {min}");
    let graph = match family {
        "path" => Multigraph::path(n),
        "cycle" => Multigraph::cycle(n),
        "complete" => Multigraph::complete(n),
        "theta" => Multigraph::theta(n),
        "tree" => Multigraph::random_tree(n, seed.expect("tree specs carry a seed")),
        _ => unreachable!("family names are checked by the caller"),
    };
    let label = match seed {
        Some(s) => format!("tree:random:{n}:{s}"),
        None => format!("{family}:{n}"),
    };
    Ok(NamedGraph { label, graph })
}

/// Expands a family spec (`cycle:3`, `cycle:3..5`, `tree:random:4:7`, …) or
/// reads a graph file.
pub fn graphs(spec: &str) -> Result<Vec<NamedGraph>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 2 || !FAMILIES.contains(&parts[0]) {
        let text = fs::read_to_string(spec).with_context(|| format!("cannot read graph file `{spec}`"))?;
        let graph = Multigraph::parse(&text).with_context(|| format!("in graph file `{spec}`"))?;
        return Ok(vec![NamedGraph {
            label: spec.to_string(),
            graph,
        }]);
    }
    let (family, size, seed) = match parts.as_slice() {
        ["tree", "random", n, s] => {
            let seed = s.parse::<u64>().with_context(|| format!("invalid seed `{s}`"))?;
            ("tree", *n, Some(seed))
        }
        ["tree", ..] => bail!("tree specs have the form tree:random:N:SEED, got `{spec}`"),
        [family, n] => (*family, *n, None),
        _ => bail!("malformed graph spec `{spec}`"),
    };
    sizes(size)?.map(|n| family_member(family, n, seed)).collect()
}

/// A spec that must denote exactly one graph.
pub fn graph(spec: &str) -> Result<NamedGraph> {
    let mut all = graphs(spec)?;
    ensure!(all.len() == 1, "`{spec}` names {} graphs; this command takes one", all.len());
    Ok(all.remove(0))
}

/// `standard`, `random` (needs a seed) or a file of explicit choices.
pub fn policy(spec: &str, seed: Option<u64>) -> Result<DiagonalPolicy> {
    match spec {
        "standard" => Ok(DiagonalPolicy::Standard),
        "random" => match seed {
            Some(s) => Ok(DiagonalPolicy::SeededRandom(s)),
            None => bail!("--policy random needs --seed"),
        },
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read policy file `{path}`"))?;
            DiagonalPolicy::parse_explicit(&text).with_context(|| format!("in policy file `{path}`"))
        }
    }
}

/// Comma-separated list of policies.
pub fn policies(spec: &str, seed: Option<u64>) -> Result<Vec<DiagonalPolicy>> {
    spec.split(',').map(|p| policy(p.trim(), seed)).collect()
}
