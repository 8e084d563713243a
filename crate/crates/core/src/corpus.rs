//! Seeded random diagrams of sets with at most two elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::diagram::{Budget, Diagram};
use crate::error::{Error, Result};
use crate::finset::{FinSet, SetMap, SetObj};
use crate::report::{Anchor, Report};
use crate::set_density::{reduce_set3, verify_power_of_two, Verdict};

pub const DEFAULT_MAX_NODES: usize = 6;
pub const DEFAULT_MAX_EDGES: usize = 12;

/// Probability that a node is empty.
const EMPTY_NODE_RATE: f64 = 0.05;

/// A random diagram with `1..=max_nodes` nodes and `0..=max_edges` edges.
/// Nodes are empty with probability 5%, otherwise of size 1 or 2 with equal
/// odds; endpoints and tables are uniform. An edge that would need a map out
/// of a nonempty set into an empty one is redirected to its own source.
pub fn random_set3_diagram(seed: u64, max_nodes: usize, max_edges: usize) -> Result<Diagram<FinSet>> {
    if max_nodes == 0 {
        return Err(Error::InvalidArgument("max_nodes must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_nodes);
    let mut b = Diagram::<FinSet>::builder(());
    let sizes: Vec<usize> = (0..n)
        .map(|_| {
            if rng.gen_bool(EMPTY_NODE_RATE) {
                0
            } else {
                rng.gen_range(1..=2)
            }
        })
        .collect();
    for (i, &s) in sizes.iter().enumerate() {
        b.node(format!("d{i}"), SetObj::new(s));
    }
    let m = rng.gen_range(0..=max_edges);
    for e in 0..m {
        let src = rng.gen_range(0..n);
        let mut dst = rng.gen_range(0..n);
        if sizes[dst] == 0 && sizes[src] > 0 {
            dst = src;
        }
        let table = (0..sizes[src]).map(|_| rng.gen_range(0..sizes[dst])).collect();
        b.edge(format!("e{e}"), src, dst, SetMap::new(SetObj::new(sizes[src]), SetObj::new(sizes[dst]), table)?);
    }
    b.build()
}

/// Runs [`verify_power_of_two`] on the diagrams for seeds
/// `seed, seed + 1, …, seed + count - 1`.
pub fn power_of_two_corpus(
    count: usize,
    seed: u64,
    max_nodes: usize,
    max_edges: usize,
    budget: Budget,
) -> Result<Report> {
    let mut report = Report::new(
        "power-of-two",
        Anchor::new(
            "power-of-two limits",
            "a limit of sets with at most two elements has 0 or 2^k elements, and the \
             reduction predicts which",
        ),
    )
    .seed(seed)
    .metric("count", count)
    .metric("max_nodes", max_nodes)
    .metric("max_edges", max_edges);
    let mut empty = 0usize;
    let mut largest_k = 0u32;
    for i in 0..count {
        let s = seed.wrapping_add(i as u64);
        let d = random_set3_diagram(s, max_nodes, max_edges)?;
        let r = verify_power_of_two(&d, budget)?;
        if let crate::report::Status::Fail { counterexample } = &r.status {
            report.fail(json!({ "seed": s, "detail": counterexample }));
        }
        match reduce_set3(&d)?.verdict {
            Verdict::Empty => empty += 1,
            Verdict::PowerOfTwo(k) => largest_k = largest_k.max(k),
        }
    }
    report.set_metric("empty_limits", empty);
    report.set_metric("largest_exponent", largest_k);
    Ok(report)
}
