//! Graph-shaped diagrams, cones and the limit contract shared by both target
//! categories.
//!
//! A diagram is a functor from the free category on a finite multigraph, so a
//! cone only has to commute with the listed edges.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::finvec::Matrix;

/// Default number of candidate partial assignments an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "CODENSE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads the override from `CODENSE_BUDGET`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }

    pub fn steps(self) -> u64 {
        self.0
    }

    pub(crate) fn meter(self, what: &'static str) -> StepMeter {
        StepMeter {
            used: 0,
            budget: self,
            what,
        }
    }
}

pub(crate) struct StepMeter {
    used: u64,
    budget: Budget,
    what: &'static str,
}

impl StepMeter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget.0 {
            return Err(Error::BudgetExceeded {
                what: self.what.to_string(),
                budget: self.budget.0,
            });
        }
        Ok(())
    }
}

/// A category whose objects and morphisms are concrete finite data.
pub trait Category: Sized {
    /// Extra data fixed for a whole diagram (the field for linear targets).
    type Tag: Clone + fmt::Debug + PartialEq;
    type Obj: Clone + fmt::Debug + PartialEq + Eq + Hash;
    type Mor: Clone + fmt::Debug + PartialEq + Eq + Hash;

    fn dom(f: &Self::Mor) -> Self::Obj;
    fn cod(f: &Self::Mor) -> Self::Obj;
    fn identity(x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn check_object(tag: &Self::Tag, x: &Self::Obj) -> Result<()>;
}

pub trait FiniteLimits: Category {
    fn limit(d: &Diagram<Self>, budget: Budget) -> Result<LimitData<Self>>;

    /// The morphism `m: apex → lim` with `π_n ∘ m = leg_n`, or
    /// [`Error::NoFactorization`].
    fn factor(lim: &LimitData<Self>, cone: &Cone<Self>) -> Result<Self::Mor>;

    fn is_iso(f: &Self::Mor) -> bool;
}

/// Categories whose hom-sets can be listed.
pub trait FiniteHoms: Category {
    fn hom_count(a: &Self::Obj, b: &Self::Obj) -> u128;
    fn hom(a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShapeGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

impl ShapeGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &nodes {
            if !seen.insert(n.as_str()) {
                return Err(Error::MalformedDiagram(format!("duplicate node id `{n}`")));
            }
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::MalformedDiagram(format!("duplicate edge id `{}`", e.id)));
            }
            if e.src >= nodes.len() || e.dst >= nodes.len() {
                return Err(Error::MalformedDiagram(format!(
                    "edge `{}` references a missing node",
                    e.id
                )));
            }
        }
        Ok(ShapeGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }
}

/// A graph-shaped diagram in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagram<C: Category> {
    tag: C::Tag,
    shape: ShapeGraph,
    objects: Vec<C::Obj>,
    morphisms: Vec<C::Mor>,
}

impl<C: Category> Diagram<C> {
    pub fn new(
        tag: C::Tag,
        shape: ShapeGraph,
        objects: Vec<C::Obj>,
        morphisms: Vec<C::Mor>,
    ) -> Result<Self> {
        if objects.len() != shape.node_count() {
            return Err(Error::MalformedDiagram(format!(
                "{} objects for {} nodes",
                objects.len(),
                shape.node_count()
            )));
        }
        if morphisms.len() != shape.edges().len() {
            return Err(Error::MalformedDiagram(format!(
                "{} morphisms for {} edges",
                morphisms.len(),
                shape.edges().len()
            )));
        }
        for x in &objects {
            C::check_object(&tag, x)?;
        }
        for (e, f) in shape.edges().iter().zip(&morphisms) {
            if C::dom(f) != objects[e.src] || C::cod(f) != objects[e.dst] {
                return Err(Error::MalformedDiagram(format!(
                    "edge `{}` carries a morphism {:?} -> {:?} but connects {:?} -> {:?}",
                    e.id,
                    C::dom(f),
                    C::cod(f),
                    objects[e.src],
                    objects[e.dst]
                )));
            }
        }
        Ok(Diagram {
            tag,
            shape,
            objects,
            morphisms,
        })
    }

    pub fn builder(tag: C::Tag) -> DiagramBuilder<C> {
        DiagramBuilder {
            tag,
            nodes: Vec::new(),
            objects: Vec::new(),
            edges: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    pub fn tag(&self) -> &C::Tag {
        &self.tag
    }

    pub fn shape(&self) -> &ShapeGraph {
        &self.shape
    }

    pub fn objects(&self) -> &[C::Obj] {
        &self.objects
    }

    pub fn object(&self, node: usize) -> &C::Obj {
        &self.objects[node]
    }

    pub fn morphisms(&self) -> &[C::Mor] {
        &self.morphisms
    }

    pub fn node_count(&self) -> usize {
        self.objects.len()
    }

    pub fn edge_count(&self) -> usize {
        self.morphisms.len()
    }

    /// Edges paired with the morphism each one carries.
    pub fn arrows(&self) -> impl Iterator<Item = (&Edge, &C::Mor)> {
        self.shape.edges().iter().zip(&self.morphisms)
    }
}

pub struct DiagramBuilder<C: Category> {
    tag: C::Tag,
    nodes: Vec<String>,
    objects: Vec<C::Obj>,
    edges: Vec<Edge>,
    morphisms: Vec<C::Mor>,
}

impl<C: Category> DiagramBuilder<C> {
    pub fn node(&mut self, id: impl Into<String>, object: C::Obj) -> usize {
        self.nodes.push(id.into());
        self.objects.push(object);
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, id: impl Into<String>, src: usize, dst: usize, morphism: C::Mor) {
        self.edges.push(Edge {
            id: id.into(),
            src,
            dst,
        });
        self.morphisms.push(morphism);
    }

    pub fn build(self) -> Result<Diagram<C>> {
        let shape = ShapeGraph::new(self.nodes, self.edges)?;
        Diagram::new(self.tag, shape, self.objects, self.morphisms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone<C: Category> {
    pub apex: C::Obj,
    pub legs: Vec<C::Mor>,
}

/// Concrete description of a limit object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    /// Every compatible family, one element index per node, sorted
    /// lexicographically in node order.
    Families(Vec<Vec<usize>>),
    /// Columns span the solution space inside the direct sum of the node
    /// spaces (node blocks stacked in node order).
    Subspace(Matrix),
}

impl Carrier {
    /// Number of elements for explicit carriers, dimension for subspaces.
    pub fn size(&self) -> usize {
        match self {
            Carrier::Families(f) => f.len(),
            Carrier::Subspace(b) => b.cols(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitData<C: Category> {
    pub apex: C::Obj,
    pub carrier: Carrier,
    pub projections: Vec<C::Mor>,
}

impl<C: Category> LimitData<C> {
    pub fn cone(&self) -> Cone<C> {
        Cone {
            apex: self.apex.clone(),
            legs: self.projections.clone(),
        }
    }
}

pub fn compute_limit<C: FiniteLimits>(d: &Diagram<C>, budget: Budget) -> Result<LimitData<C>> {
    C::limit(d, budget)
}

fn check_cone_types<C: Category>(d: &Diagram<C>, c: &Cone<C>) -> Result<()> {
    if c.legs.len() != d.node_count() {
        return Err(Error::TypeMismatch(format!(
            "cone has {} legs for {} nodes",
            c.legs.len(),
            d.node_count()
        )));
    }
    for (n, leg) in c.legs.iter().enumerate() {
        if C::dom(leg) != c.apex || &C::cod(leg) != d.object(n) {
            return Err(Error::TypeMismatch(format!(
                "leg at node `{}` is {:?} -> {:?}, expected {:?} -> {:?}",
                d.shape().nodes()[n],
                C::dom(leg),
                C::cod(leg),
                c.apex,
                d.object(n)
            )));
        }
    }
    Ok(())
}

/// True iff `morphism(e) ∘ leg(src e) = leg(dst e)` for every edge.
pub fn check_cone<C: Category>(d: &Diagram<C>, c: &Cone<C>) -> Result<bool> {
    check_cone_types(d, c)?;
    for (e, f) in d.arrows() {
        if C::compose(f, &c.legs[e.src])? != c.legs[e.dst] {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn mediating_morphism<C: FiniteLimits>(
    d: &Diagram<C>,
    lim: &LimitData<C>,
    c: &Cone<C>,
) -> Result<C::Mor> {
    check_cone_types(d, c)?;
    let m = C::factor(lim, c)?;
    for (p, leg) in lim.projections.iter().zip(&c.legs) {
        if &C::compose(p, &m)? != leg {
            return Err(Error::NoFactorization);
        }
    }
    Ok(m)
}

/// True iff the mediating morphism from `c` into the computed limit is an
/// isomorphism. A non-commuting cone is reported as `false`.
pub fn is_limit_cone<C: FiniteLimits>(d: &Diagram<C>, c: &Cone<C>, budget: Budget) -> Result<bool> {
    if !check_cone(d, c)? {
        return Ok(false);
    }
    let lim = compute_limit(d, budget)?;
    let m = mediating_morphism(d, &lim, c)?;
    Ok(C::is_iso(&m))
}
