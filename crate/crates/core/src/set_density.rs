//! Limits of diagrams of tiny sets.
//!
//! Two facts are checked here. Every finite set with at least three elements
//! is the limit of a diagram whose objects all have exactly three elements.
//! And a diagram whose objects have at most two elements always has a limit
//! of size `0` or `2^k`; [`reduce_set3`] computes which one without
//! enumerating families.

use std::collections::{HashSet, VecDeque};

use serde_json::json;

use crate::diagram::{compute_limit, mediating_morphism, Budget, Carrier, Cone, Diagram};
use crate::error::{Error, Result};
use crate::finset::{all_maps, equalizer, FinSet, SetMap, SetObj};
use crate::io::DiagramFile;
use crate::report::{Anchor, Report};

/// Largest `n` [`verify_three_point_density`] accepts by default.
pub const DEFAULT_THREE_POINT_BOUND: usize = 6;

/// Local element order inside every `K_x` node: `(t, x, s)`.
pub const LOCAL_T: usize = 0;
pub const LOCAL_X: usize = 1;
pub const LOCAL_S: usize = 2;

/// Node bookkeeping for the three-point diagram over `X = {0, …, n-1}` with
/// distinguished point `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePointInstance {
    pub n: usize,
    pub t_index: usize,
    /// `(x, node)` for each `K_x = {t, x, s}`, `x ≠ t`.
    pub k_nodes: Vec<(usize, usize)>,
    /// `((x, x'), node)` for each `Y = {t, x, x'}` with `t < x < x'`; local
    /// order `(t, x, x')`.
    pub y_nodes: Vec<((usize, usize), usize)>,
}

impl ThreePointInstance {
    /// The compatible family selected by `v ∈ X`: `v` wherever it occurs,
    /// `t` everywhere else.
    pub fn family_of(&self, v: usize, node_count: usize) -> Vec<usize> {
        let mut fam = vec![LOCAL_T; node_count];
        for &(x, node) in &self.k_nodes {
            if x == v {
                fam[node] = LOCAL_X;
            }
        }
        for &((x, x2), node) in &self.y_nodes {
            if x == v {
                fam[node] = 1;
            } else if x2 == v {
                fam[node] = 2;
            }
        }
        fam
    }
}

/// Builds the diagram of three-element sets whose limit is `{0, …, n-1}`,
/// together with the canonical cone out of it.
///
/// Edges are `f_{Y,x}: Y → K_x` for the two non-`t` points of each `Y`
/// (`x ↦ x`, rest `↦ t`) and one endomap `p_x` of each `K_x` fixing `t` and
/// `x` with `s ↦ t`.
pub fn three_point_diagram(n: usize) -> Result<(Diagram<FinSet>, Cone<FinSet>, ThreePointInstance)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "three-point diagram needs at least 3 elements, got {n}; smaller sets are equalizers"
        )));
    }
    let three = SetObj::new(3);
    let x_set = SetObj::new(n);
    let mut b = Diagram::<FinSet>::builder(());
    let mut legs = Vec::new();
    let mut inst = ThreePointInstance {
        n,
        t_index: 0,
        k_nodes: Vec::new(),
        y_nodes: Vec::new(),
    };

    let mut k_node = vec![usize::MAX; n];
    for (x, slot) in k_node.iter_mut().enumerate().skip(1) {
        let node = b.node(format!("K{x}"), three);
        *slot = node;
        inst.k_nodes.push((x, node));
        let table = (0..n).map(|z| if z == x { LOCAL_X } else { LOCAL_T }).collect();
        legs.push(SetMap::new(x_set, three, table)?);
    }
    for x in 1..n {
        for x2 in x + 1..n {
            let node = b.node(format!("Y{x}_{x2}"), three);
            inst.y_nodes.push(((x, x2), node));
            let table = (0..n)
                .map(|z| match z {
                    _ if z == x => 1,
                    _ if z == x2 => 2,
                    _ => 0,
                })
                .collect();
            legs.push(SetMap::new(x_set, three, table)?);
        }
    }
    for &((x, x2), node) in &inst.y_nodes {
        b.edge(format!("f_Y{x}_{x2}->K{x}"), node, k_node[x], SetMap::from_table(3, vec![0, 1, 0])?);
        b.edge(format!("f_Y{x}_{x2}->K{x2}"), node, k_node[x2], SetMap::from_table(3, vec![0, 0, 1])?);
    }
    for &(x, node) in &inst.k_nodes {
        b.edge(format!("p{x}"), node, node, SetMap::from_table(3, vec![LOCAL_T, LOCAL_X, LOCAL_T])?);
    }
    let cone = Cone { apex: x_set, legs };
    Ok((b.build()?, cone, inst))
}

fn three_point_anchor() -> Anchor {
    Anchor::new(
        "three-point limit density",
        "every set with at least three elements is the limit of a diagram of three-element sets",
    )
}

/// Checks that the canonical cone over [`three_point_diagram`] is a limit
/// cone and that its mediating map sends each `v` to the family that picks `v`
/// wherever possible and `t` elsewhere.
pub fn verify_three_point_density(n: usize, bound: usize, budget: Budget) -> Result<Report> {
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "three-point ground size",
            value: n,
            bound,
        });
    }
    let (d, cone, inst) = three_point_diagram(n)?;
    let lim = compute_limit(&d, budget)?;
    let mut report = Report::new("three-point", three_point_anchor())
        .metric("n", n)
        .metric("nodes", d.node_count())
        .metric("edges", d.edge_count())
        .metric("carrier_size", lim.apex.size());
    let m = match mediating_morphism(&d, &lim, &cone) {
        Ok(m) => m,
        Err(e) => return Ok(report.failed_with(json!({ "n": n, "error": e.to_string() }))),
    };
    if !m.is_bijective() {
        report.fail(json!({ "n": n, "mediating_map": m.table() }));
    }
    let Carrier::Families(families) = &lim.carrier else {
        unreachable!("finite-set limits carry families")
    };
    for v in 0..n {
        let expected = inst.family_of(v, d.node_count());
        if families.get(m.apply(v)) != Some(&expected) {
            report.fail(json!({ "n": n, "element": v, "expected_family": expected }));
        }
    }
    Ok(report)
}

/// Searches all pairs of endomaps of `{0, 1, 2}` for one whose equalizer has
/// exactly `m` elements.
pub fn equalizer_witness(m: usize) -> Result<(Option<(SetMap, SetMap)>, Report)> {
    if m > 2 {
        return Err(Error::InvalidArgument(format!(
            "equalizer witnesses exist for sizes 0, 1, 2; got {m}"
        )));
    }
    let three = SetObj::new(3);
    let endos = all_maps(three, three);
    let mut report = Report::new(
        "equalizer-witness",
        Anchor::new(
            "small sets as equalizers",
            "every set with at most two elements is the equalizer of two endomaps of a \
             three-element set",
        ),
    )
    .metric("target_size", m);
    let mut scanned = 0usize;
    let mut witness = None;
    'outer: for f in &endos {
        for g in &endos {
            scanned += 1;
            if equalizer(f, g)?.0.size() == m {
                witness = Some((f.clone(), g.clone()));
                break 'outer;
            }
        }
    }
    report.set_metric("pairs_scanned", scanned);
    match &witness {
        Some((f, g)) => {
            report.set_metric("f", f.table().to_vec());
            report.set_metric("g", g.table().to_vec());
        }
        None => report.fail(json!({ "target_size": m, "pairs_scanned": scanned })),
    }
    Ok((witness, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Empty,
    PowerOfTwo(u32),
}

impl Verdict {
    pub fn cardinality(self) -> u64 {
        match self {
            Verdict::Empty => 0,
            Verdict::PowerOfTwo(k) => 1u64 << k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub verdict: Verdict,
    /// Nodes that receive no constant map.
    pub surviving_nodes: Vec<usize>,
    /// Connected components of the surviving nodes.
    pub components: Vec<Vec<usize>>,
}

/// Decides the size of the limit of a diagram of sets with at most two
/// elements.
///
/// 1. An empty node makes the limit empty.
/// 2. Every edge carrying a bijection gets a reverse edge with the inverse.
/// 3. For each node, all composites of paths ending there are collected
///    (identities included); nodes reached by a constant map are dropped.
///    Their value is pinned by that constant, and edges touching them are
///    checked against the pinned values.
/// 4. The surviving nodes have two elements and are joined by bijections.
///    Each connected component either admits exactly two compatible families
///    or none; the limit has `2^k` elements for `k` components, or is empty.
pub fn reduce_set3(d: &Diagram<FinSet>) -> Result<ReductionResult> {
    for (node, x) in d.objects().iter().enumerate() {
        if x.size() > 2 {
            return Err(Error::OversizedNode {
                node: d.shape().nodes()[node].clone(),
                size: x.size(),
            });
        }
    }
    let empty = ReductionResult {
        verdict: Verdict::Empty,
        surviving_nodes: Vec::new(),
        components: Vec::new(),
    };
    if d.objects().iter().any(|x| x.size() == 0) {
        return Ok(empty);
    }
    let n = d.node_count();

    let mut arrows: Vec<(usize, usize, SetMap)> = Vec::new();
    for (e, f) in d.arrows() {
        arrows.push((e.src, e.dst, f.clone()));
        if let Some(inv) = f.inverse() {
            arrows.push((e.dst, e.src, inv));
        }
    }

    // pinned[v] = value forced by some constant composite ending at v
    let mut pinned: Vec<Option<usize>> = vec![None; n];
    for s in 0..n {
        let mut seen: HashSet<(usize, SetMap)> = HashSet::new();
        let mut queue = VecDeque::new();
        let start = (s, SetMap::identity(*d.object(s)));
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some((v, path)) = queue.pop_front() {
            if path.is_constant() && pinned[v].is_none() {
                pinned[v] = Some(path.apply(0));
            }
            for (src, dst, g) in &arrows {
                if *src != v {
                    continue;
                }
                let next = (*dst, g.after(&path)?);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }

    let surviving: Vec<usize> = (0..n).filter(|&v| pinned[v].is_none()).collect();
    let alive = |v: usize| pinned[v].is_none();
    for (src, dst, g) in &arrows {
        if alive(*src) && alive(*dst) {
            assert!(
                d.object(*src).size() == 2 && g.is_bijective(),
                "surviving nodes must be joined by bijections of two-element sets"
            );
        }
    }

    let mut components = Vec::new();
    let mut value = vec![usize::MAX; n];
    for &root in &surviving {
        if value[root] != usize::MAX {
            continue;
        }
        value[root] = 0;
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (src, dst, g) in &arrows {
                if *src == v && alive(*dst) && value[*dst] == usize::MAX {
                    value[*dst] = g.apply(value[v]);
                    comp.push(*dst);
                    queue.push_back(*dst);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    let mut consistent = true;
    for (e, f) in d.arrows() {
        let (s, t) = (e.src, e.dst);
        match (pinned[s], pinned[t]) {
            (None, None) => consistent &= f.apply(value[s]) == value[t],
            (Some(cs), Some(ct)) => consistent &= f.apply(cs) == ct,
            // a live source into a pinned target: the edge is constant
            (None, Some(ct)) => consistent &= f.is_constant() && f.apply(0) == ct,
            (Some(_), None) => unreachable!("a pinned node only maps into pinned nodes"),
        }
    }

    let verdict = if consistent {
        Verdict::PowerOfTwo(components.len() as u32)
    } else {
        Verdict::Empty
    };
    Ok(ReductionResult {
        verdict,
        surviving_nodes: surviving,
        components,
    })
}

/// Compares the brute-force limit size of `d` with [`reduce_set3`].
pub fn verify_power_of_two(d: &Diagram<FinSet>, budget: Budget) -> Result<Report> {
    let lim = compute_limit(d, budget)?;
    let reduced = reduce_set3(d)?;
    let size = lim.apex.size() as u64;
    let mut report = Report::new(
        "power-of-two",
        Anchor::new(
            "power-of-two limits",
            "a limit of sets with at most two elements has 0 or 2^k elements, k counting the \
             components that survive after inverting bijections and dropping nodes reached by \
             constant maps",
        ),
    )
    .metric("nodes", d.node_count())
    .metric("edges", d.edge_count())
    .metric("limit_size", size)
    .metric("predicted_size", reduced.verdict.cardinality());
    let power_of_two = size == 0 || size.is_power_of_two();
    if !power_of_two || size != reduced.verdict.cardinality() {
        report.fail(json!({
            "diagram": DiagramFile::from_set_diagram(d),
            "limit_size": size,
            "verdict": format!("{:?}", reduced.verdict),
        }));
    }
    Ok(report)
}
