//! Codensity monads of skeletal full subcategories, computed from the limit
//! of the comma diagram `K/𝒢 → 𝒦`.
//!
//! `T(K)` is the limit of the diagram with one node per morphism `g: K → G`
//! into a probe `G` and one edge `g → h∘g` per probe morphism `h`. The unit,
//! the action on maps and the multiplication are all mediating morphisms of
//! explicit cones into such limits.

use std::collections::{HashMap, HashSet};

use serde_json::json;

use crate::diagram::{
    compute_limit, mediating_morphism, Budget, Category, Cone, Diagram, FiniteHoms, FiniteLimits,
    LimitData,
};
use crate::error::{Error, Result};
use crate::finset::{all_maps, pushforward_ultrafilter, FinSet, FinUltrafilter, SetObj};
use crate::finvec::dual::mult_component;
use crate::finvec::{dd_on_map, Field, FinVec, LinMap, VecObj};
use crate::report::{Anchor, Report};

/// Default bound on the number of comma-diagram nodes.
pub const DEFAULT_COMMA_NODES: usize = 2000;

/// Default bound on the number of comma-diagram edges.
pub const DEFAULT_COMMA_EDGES: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodensityBudget {
    pub nodes: usize,
    pub edges: usize,
    pub steps: Budget,
}

impl Default for CodensityBudget {
    fn default() -> Self {
        CodensityBudget {
            nodes: DEFAULT_COMMA_NODES,
            edges: DEFAULT_COMMA_EDGES,
            steps: Budget::from_env(),
        }
    }
}

/// Size of a set or dimension of a space, for reports.
pub trait Measure {
    fn measure(&self) -> usize;
}

impl Measure for SetObj {
    fn measure(&self) -> usize {
        self.size()
    }
}

impl Measure for VecObj {
    fn measure(&self) -> usize {
        self.dim()
    }
}

/// One object per isomorphism class of the subcategory.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet<C: Category> {
    tag: C::Tag,
    probes: Vec<C::Obj>,
}

impl<C: Category> ProbeSet<C> {
    pub fn new(tag: C::Tag, probes: Vec<C::Obj>) -> Result<Self> {
        for (i, p) in probes.iter().enumerate() {
            C::check_object(&tag, p)?;
            if probes[..i].contains(p) {
                return Err(Error::InvalidArgument(format!("probe {p:?} listed twice")));
            }
        }
        Ok(ProbeSet { tag, probes })
    }

    pub fn tag(&self) -> &C::Tag {
        &self.tag
    }

    pub fn probes(&self) -> &[C::Obj] {
        &self.probes
    }
}

impl ProbeSet<FinSet> {
    /// Sets of size `1..=max`. The empty set only receives maps from the
    /// empty set, so it is left out.
    pub fn sets(max: usize) -> Self {
        ProbeSet {
            tag: (),
            probes: (1..=max).map(SetObj::new).collect(),
        }
    }
}

impl ProbeSet<FinVec> {
    /// Coordinate spaces of dimension `0..=max_dim`.
    pub fn spaces(field: Field, max_dim: usize) -> Self {
        ProbeSet {
            tag: field,
            probes: (0..=max_dim).map(|d| VecObj::new(field, d)).collect(),
        }
    }
}

/// The comma diagram of `K` together with the morphism behind each node.
#[derive(Debug, Clone)]
pub struct CommaDiagram<C: Category> {
    pub diagram: Diagram<C>,
    /// `nodes[i]` is the morphism `g: K → G` at node `i`.
    pub nodes: Vec<C::Mor>,
    index: HashMap<C::Mor, usize>,
}

impl<C: Category> CommaDiagram<C> {
    pub fn node_of(&self, g: &C::Mor) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// Builds `K/𝒢`. Identity edges impose nothing and are left out; repeated
/// `(source, target, morphism)` triples are merged.
pub fn build_comma_diagram<C: FiniteHoms>(
    k: &C::Obj,
    probes: &ProbeSet<C>,
    budget: CodensityBudget,
) -> Result<CommaDiagram<C>> {
    C::check_object(&probes.tag, k)?;
    let total: u128 = probes.probes.iter().map(|g| C::hom_count(k, g)).sum();
    if total > budget.nodes as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("building a comma diagram with {total} nodes"),
            budget: budget.nodes as u64,
        });
    }
    // upper bound: identities are dropped later
    let edges: u128 = probes
        .probes
        .iter()
        .map(|g| {
            let out: u128 = probes.probes.iter().map(|h| C::hom_count(g, h)).sum();
            C::hom_count(k, g) * out
        })
        .sum();
    if edges > budget.edges as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("building a comma diagram with up to {edges} edges"),
            budget: budget.edges as u64,
        });
    }
    let mut b = Diagram::<C>::builder(probes.tag.clone());
    let mut nodes = Vec::new();
    let mut index = HashMap::new();
    for (pi, p) in probes.probes.iter().enumerate() {
        for (i, g) in C::hom(k, p).into_iter().enumerate() {
            let node = b.node(format!("g{pi}_{i}"), p.clone());
            index.insert(g.clone(), node);
            nodes.push(g);
        }
    }
    let probe_homs: Vec<Vec<Vec<C::Mor>>> = probes
        .probes
        .iter()
        .map(|a| probes.probes.iter().map(|b| C::hom(a, b)).collect())
        .collect();
    let probe_index = |x: &C::Obj| probes.probes.iter().position(|p| p == x);
    let mut seen = HashSet::new();
    for (src, g) in nodes.iter().enumerate() {
        let from = probe_index(&C::cod(g)).expect("node lands in a probe");
        for homs in &probe_homs[from] {
            for h in homs {
                if *h == C::identity(&C::cod(g)) {
                    continue;
                }
                let dst = index[&C::compose(h, g)?];
                if seen.insert((src, dst, h.clone())) {
                    b.edge(format!("h{}", seen.len() - 1), src, dst, h.clone());
                }
            }
        }
    }
    Ok(CommaDiagram {
        diagram: b.build()?,
        nodes,
        index,
    })
}

/// `T(K)` with its limit projections and unit.
#[derive(Debug, Clone)]
pub struct CodensityValue<C: FiniteLimits> {
    pub k: C::Obj,
    pub comma: CommaDiagram<C>,
    pub limit: LimitData<C>,
    /// `η_K: K → T(K)`.
    pub unit: C::Mor,
}

impl<C: FiniteLimits> CodensityValue<C> {
    pub fn object(&self) -> &C::Obj {
        &self.limit.apex
    }

    /// `π_g: T(K) → G`.
    pub fn projection(&self, g: &C::Mor) -> Option<&C::Mor> {
        self.comma.node_of(g).map(|n| &self.limit.projections[n])
    }
}

/// Computes `T(K)` and checks `π_g ∘ η = g` and `h ∘ π_g = π_{h∘g}`.
pub fn codensity_value<C: FiniteLimits + FiniteHoms>(
    k: &C::Obj,
    probes: &ProbeSet<C>,
    budget: CodensityBudget,
) -> Result<CodensityValue<C>> {
    let comma = build_comma_diagram(k, probes, budget)?;
    let limit = compute_limit(&comma.diagram, budget.steps)?;
    let cone = Cone {
        apex: k.clone(),
        legs: comma.nodes.clone(),
    };
    let unit = mediating_morphism(&comma.diagram, &limit, &cone)?;
    for (g, p) in comma.nodes.iter().zip(&limit.projections) {
        if &C::compose(p, &unit)? != g {
            return Err(Error::Incoherent(format!("π_g ∘ η ≠ g at {g:?}")));
        }
    }
    for (e, h) in comma.diagram.arrows() {
        if C::compose(h, &limit.projections[e.src])? != limit.projections[e.dst] {
            return Err(Error::Incoherent(format!(
                "projections do not commute along `{}`",
                e.id
            )));
        }
    }
    Ok(CodensityValue {
        k: k.clone(),
        comma,
        limit,
        unit,
    })
}

/// `T(f): T(K) → T(L)`, the unique map with `π_g ∘ T(f) = π_{g∘f}`.
pub fn codensity_on_map<C: FiniteLimits + FiniteHoms>(
    f: &C::Mor,
    source: &CodensityValue<C>,
    target: &CodensityValue<C>,
) -> Result<C::Mor> {
    if C::dom(f) != source.k || C::cod(f) != target.k {
        return Err(Error::MismatchedEndpoints);
    }
    let legs = target
        .comma
        .nodes
        .iter()
        .map(|g| {
            let gf = C::compose(g, f)?;
            source
                .projection(&gf)
                .cloned()
                .ok_or_else(|| Error::Incoherent(format!("{gf:?} is not a node of the source")))
        })
        .collect::<Result<Vec<_>>>()?;
    let cone = Cone {
        apex: source.object().clone(),
        legs,
    };
    mediating_morphism(&target.comma.diagram, &target.limit, &cone)
}

/// `μ_K: T(T(K)) → T(K)`. Each `π_g` of `T(K)` is a node of the comma diagram
/// of `T(K)`; the leg at `g` is the projection of `T(T(K))` at that node.
pub fn codensity_mult<C: FiniteLimits + FiniteHoms>(
    tk: &CodensityValue<C>,
    ttk: &CodensityValue<C>,
) -> Result<C::Mor> {
    if &ttk.k != tk.object() {
        return Err(Error::MismatchedEndpoints);
    }
    let legs = tk
        .limit
        .projections
        .iter()
        .map(|p| {
            ttk.projection(p)
                .cloned()
                .ok_or_else(|| Error::Incoherent(format!("{p:?} is not a node over T(K)")))
        })
        .collect::<Result<Vec<_>>>()?;
    let cone = Cone {
        apex: ttk.object().clone(),
        legs,
    };
    mediating_morphism(&tk.comma.diagram, &tk.limit, &cone)
}

const UNIT_EQUATION_NOTE: &str =
    "unit equation used: π_g ∘ η_K = g for every comma node g (the form π_g ∘ η_K = id only \
     typechecks when G = K)";

/// Unit laws, and associativity when `T³(K)` fits the budget.
pub fn codensity_monad_check<C: FiniteLimits + FiniteHoms>(
    k: &C::Obj,
    probes: &ProbeSet<C>,
    budget: CodensityBudget,
) -> Result<Report>
where
    C::Obj: Measure,
{
    let tk = codensity_value(k, probes, budget)?;
    let ttk = codensity_value(tk.object(), probes, budget)?;
    let mu = codensity_mult(&tk, &ttk)?;
    let id_tk = C::identity(tk.object());
    let mut report = Report::new(
        "codensity-monad",
        Anchor::new(
            "codensity monad laws",
            "the unit, action on maps and multiplication read off the comma-diagram limits form \
             a monad",
        ),
    )
    .metric("k", k.measure())
    .metric("t_size", tk.limit.carrier.size())
    .metric("tt_size", ttk.limit.carrier.size())
    .note(UNIT_EQUATION_NOTE);

    if C::compose(&mu, &ttk.unit)? != id_tk {
        report.fail(json!({ "law": "mu . eta_T = id", "k": k.measure() }));
    }
    let t_eta = codensity_on_map(&tk.unit, &tk, &ttk)?;
    if C::compose(&mu, &t_eta)? != id_tk {
        report.fail(json!({ "law": "mu . T(eta) = id", "k": k.measure() }));
    }
    match codensity_value(ttk.object(), probes, budget) {
        Ok(tttk) => {
            let mu_t = codensity_mult(&ttk, &tttk)?;
            let t_mu = codensity_on_map(&mu, &tttk, &ttk)?;
            if C::compose(&mu, &mu_t)? != C::compose(&mu, &t_mu)? {
                report.fail(json!({ "law": "mu . mu_T = mu . T(mu)", "k": k.measure() }));
            }
            report.set_metric("associativity", true);
        }
        Err(e) if e.is_budget() => {
            report.set_metric("associativity", false);
            report = report.note(format!("associativity not checked: {e}"));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Computes `T(K)` and reports its size without comparing it to anything.
pub fn codensity_value_check<C: FiniteLimits + FiniteHoms>(
    k: &C::Obj,
    probes: &ProbeSet<C>,
    budget: CodensityBudget,
) -> Result<Report>
where
    C::Obj: Measure,
{
    let tk = codensity_value(k, probes, budget)?;
    Ok(Report::new(
        "codensity-value",
        Anchor::new(
            "codensity value",
            "T(K) is the limit of the comma diagram of K over the probes",
        ),
    )
    .metric("k", k.measure())
    .metric("probes", probes.probes().len())
    .metric("comma_nodes", tk.comma.diagram.node_count())
    .metric("comma_edges", tk.comma.diagram.edge_count())
    .metric("t_size", tk.limit.carrier.size())
    .metric("unit_invertible", C::is_iso(&tk.unit))
    .note(UNIT_EQUATION_NOTE))
}

fn codensity_anchor(label: &str, statement: &str) -> Anchor {
    Anchor::new(label, statement)
}

/// Compares the codensity monad of `{1, …, m} ↪ FinSet` at `K` with the
/// ultrafilter monad: the unit must be a bijection and `T(f)` must act as
/// pushforward of principal ultrafilters, for every `f: K → L`, `|L| ≤ |K|`.
pub fn compare_ultrafilter(k_size: usize, m: usize, budget: CodensityBudget) -> Result<Report> {
    if k_size > 4 {
        return Err(Error::BoundExceeded {
            what: "ultrafilter comparison ground size",
            value: k_size,
            bound: 4,
        });
    }
    let probes = ProbeSet::sets(m);
    let k = SetObj::new(k_size);
    let tk = codensity_value(&k, &probes, budget)?;
    let mut report = Report::new(
        "codensity-set",
        codensity_anchor(
            "codensity of small sets",
            "the codensity monad of the inclusion of small finite sets agrees with the \
             ultrafilter monad, which on finite sets is the identity",
        ),
    )
    .metric("k", k_size)
    .metric("probe_max", m)
    .metric("comma_nodes", tk.comma.diagram.node_count())
    .metric("comma_edges", tk.comma.diagram.edge_count())
    .metric("t_size", tk.object().size())
    .note(UNIT_EQUATION_NOTE);

    if !tk.unit.is_bijective() {
        report.fail(json!({ "k": k_size, "probe_max": m, "unit": tk.unit.table() }));
        return Ok(report);
    }
    let mut maps_checked = 0usize;
    for l_size in 1..=k_size {
        let l = SetObj::new(l_size);
        let tl = codensity_value(&l, &probes, budget)?;
        for f in all_maps(k, l) {
            let tf = codensity_on_map(&f, &tk, &tl)?;
            for x in k.elements() {
                let pushed = pushforward_ultrafilter(&f, &FinUltrafilter::principal(k, x)?)?;
                let expected = tl.unit.apply(pushed.principal_at());
                if tf.apply(tk.unit.apply(x)) != expected {
                    report.fail(json!({
                        "k": k_size,
                        "probe_max": m,
                        "map": f.table(),
                        "point": x,
                    }));
                }
            }
            maps_checked += 1;
        }
    }
    report.set_metric("maps_checked", maps_checked);
    Ok(report)
}

/// `φ: X** → T(X)`, the mediating map of the cone with leg `a**` at each
/// comma node `a`. Duals are identified through the dual basis, so `X**` is
/// `X` as a coordinate space.
pub fn double_dual_comparison(tx: &CodensityValue<FinVec>) -> Result<LinMap> {
    let cone = Cone {
        apex: tx.k,
        legs: tx.comma.nodes.iter().map(dd_on_map).collect(),
    };
    mediating_morphism(&tx.comma.diagram, &tx.limit, &cone)
}

/// Compares `T(X)` for probes of dimension `0..=m` with `X**`: the comparison
/// map must exist, be invertible and carry `η` to the codensity unit. When
/// `m ≥ dim X` the codensity multiplication is also compared with the dual
/// of `η` on `X*`.
pub fn compare_double_dual(x: VecObj, m: usize, budget: CodensityBudget) -> Result<Report> {
    if x.dim() > 3 || m > 3 {
        return Err(Error::BoundExceeded {
            what: "double-dual comparison dimension",
            value: x.dim().max(m),
            bound: 3,
        });
    }
    let field = x.field();
    let probes = ProbeSet::spaces(field, m);
    let tx = codensity_value(&x, &probes, budget)?;
    let mut report = Report::new(
        "codensity-vec",
        codensity_anchor(
            "codensity of small spaces",
            "the codensity monad of the inclusion of small spaces is double dualization, with \
             limit projections a** and unit the evaluation map",
        ),
    )
    .metric("q", field.q())
    .metric("dim", x.dim())
    .metric("probe_max", m)
    .metric("comma_nodes", tx.comma.diagram.node_count())
    .metric("comma_edges", tx.comma.diagram.edge_count())
    .metric("t_dim", tx.object().dim())
    .note(UNIT_EQUATION_NOTE);
    let ctx = json!({ "q": field.q(), "dim": x.dim(), "probe_max": m });

    let phi = match double_dual_comparison(&tx) {
        Ok(phi) => phi,
        Err(Error::NoFactorization) => {
            return Ok(report.failed_with(json!({ "instance": ctx, "reason": "no comparison map" })))
        }
        Err(e) => return Err(e),
    };
    if !phi.is_invertible() {
        report.fail(json!({ "instance": ctx, "comparison": phi.matrix().to_rows() }));
        return Ok(report);
    }
    let eta = crate::finvec::dual::unit_component(x);
    if phi.after(&eta)? != tx.unit {
        report.fail(json!({ "instance": ctx, "reason": "unit does not match evaluation" }));
    }

    // T(X) ≅ X has the same comma diagram size, so T(T(X)) fits when T(X) did
    let cross_check = m >= x.dim();
    report.set_metric("mult_cross_checked", cross_check);
    if cross_check {
        let ttx = codensity_value(tx.object(), &probes, budget)?;
        let mu_t = codensity_mult(&tx, &ttx)?;
        let phi_t = double_dual_comparison(&ttx)?;
        let lhs = mu_t.after(&phi_t)?.after(&dd_on_map(&phi))?;
        let rhs = phi.after(&mult_component(x))?;
        if lhs != rhs {
            report.fail(json!({
                "instance": ctx,
                "reason": "codensity multiplication differs from the dual of the unit",
                "codensity": lhs.matrix().to_rows(),
                "dual": rhs.matrix().to_rows(),
            }));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::SetMap;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn comma_node_counts() {
        let b = CodensityBudget::default();
        let c = build_comma_diagram(&SetObj::new(2), &ProbeSet::sets(2), b).unwrap();
        assert_eq!(c.diagram.node_count(), 5);
        let c = build_comma_diagram(&SetObj::new(3), &ProbeSet::sets(3), b).unwrap();
        assert_eq!(c.diagram.node_count(), 36);
        let c = build_comma_diagram(&VecObj::new(f(2), 1), &ProbeSet::spaces(f(2), 1), b).unwrap();
        assert_eq!(c.diagram.node_count(), 3);
        let tight = CodensityBudget { nodes: 35, ..b };
        assert!(build_comma_diagram(&SetObj::new(3), &ProbeSet::sets(3), tight).unwrap_err().is_budget());
        let big = build_comma_diagram(&VecObj::new(f(2), 3), &ProbeSet::spaces(f(2), 3), b);
        assert!(big.unwrap_err().is_budget());
    }

    #[test]
    fn values() {
        let budget = CodensityBudget::default();
        let t4 = codensity_value(&SetObj::new(4), &ProbeSet::sets(3), budget).unwrap();
        assert_eq!(t4.object().size(), 4);
        assert!(t4.unit.is_bijective());

        let tv = codensity_value(&VecObj::new(f(2), 2), &ProbeSet::spaces(f(2), 2), budget).unwrap();
        assert_eq!(tv.object().dim(), 2);
    }

    #[test]
    fn identity_and_constant_maps() {
        let budget = CodensityBudget::default();
        let probes = ProbeSet::sets(3);
        let k = SetObj::new(3);
        let l = SetObj::new(2);
        let tk = codensity_value(&k, &probes, budget).unwrap();
        let tl = codensity_value(&l, &probes, budget).unwrap();
        let id = codensity_on_map(&SetMap::identity(k), &tk, &tk).unwrap();
        assert_eq!(id, SetMap::identity(*tk.object()));
        let c = codensity_on_map(&SetMap::constant(k, l, 1), &tk, &tl).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.apply(0), tl.unit.apply(1));
    }

    #[test]
    fn set_monad_laws() {
        for n in 0..=2 {
            let r = codensity_monad_check(&SetObj::new(n), &ProbeSet::sets(2), CodensityBudget::default())
                .unwrap();
            assert!(r.is_pass(), "{r}");
        }
    }

    #[test]
    fn ultrafilter_comparison() {
        for n in [1, 3] {
            let r = compare_ultrafilter(n, 3, CodensityBudget::default()).unwrap();
            assert!(r.is_pass(), "{r}");
        }
    }

    #[test]
    fn double_dual_comparison_small() {
        for (q, n) in [(2, 1), (2, 2), (3, 1)] {
            let r = compare_double_dual(VecObj::new(f(q), n), n, CodensityBudget::default()).unwrap();
            assert!(r.is_pass(), "{r}");
        }
    }
}
