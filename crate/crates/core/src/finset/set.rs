use serde::Serialize;

use crate::diagram::{
    Budget, Carrier, Category, Cone, Diagram, FiniteHoms, FiniteLimits, LimitData, StepMeter,
};
use crate::error::{Error, Result};

/// The finite set `{0, …, size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetObj {
    size: usize,
}

impl SetObj {
    pub const fn new(size: usize) -> Self {
        SetObj { size }
    }

    pub const fn size(self) -> usize {
        self.size
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// A function between finite sets stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetMap {
    dom: SetObj,
    cod: SetObj,
    table: Vec<usize>,
}

impl SetMap {
    pub fn new(dom: SetObj, cod: SetObj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::TypeMismatch(format!(
                "table has {} entries for a domain of {} elements",
                table.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= cod.size()) {
            return Err(Error::TypeMismatch(format!(
                "image {bad} outside a codomain of {} elements",
                cod.size()
            )));
        }
        Ok(SetMap { dom, cod, table })
    }

    /// Map with domain `table.len()` into a set of `cod` elements.
    pub fn from_table(cod: usize, table: Vec<usize>) -> Result<Self> {
        SetMap::new(SetObj::new(table.len()), SetObj::new(cod), table)
    }

    pub fn identity(x: SetObj) -> Self {
        SetMap {
            dom: x,
            cod: x,
            table: x.elements().collect(),
        }
    }

    /// Panics if `value` is outside `cod`.
    pub fn constant(dom: SetObj, cod: SetObj, value: usize) -> Self {
        assert!(value < cod.size(), "constant value outside codomain");
        SetMap {
            dom,
            cod,
            table: vec![value; dom.size()],
        }
    }

    pub fn dom(&self) -> SetObj {
        self.dom
    }

    pub fn cod(&self) -> SetObj {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &SetMap) -> Result<SetMap> {
        if f.cod != self.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {:?} after a map into {:?}",
                self.dom, f.cod
            )));
        }
        Ok(SetMap {
            dom: f.dom,
            cod: self.cod,
            table: f.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod.size()];
        for &y in &self.table {
            hit[y] = true;
        }
        (0..self.cod.size()).filter(|&y| hit[y]).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.dom.size()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.cod.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    /// Image is a single point. Maps out of the empty set are not constant.
    pub fn is_constant(&self) -> bool {
        self.image().len() == 1
    }

    pub fn inverse(&self) -> Option<SetMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.dom.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(SetMap {
            dom: self.cod,
            cod: self.dom,
            table,
        })
    }
}

/// All functions `a → b`, tables in lexicographic order.
pub fn all_maps(a: SetObj, b: SetObj) -> Vec<SetMap> {
    let n = a.size();
    let m = b.size();
    if n > 0 && m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    loop {
        out.push(SetMap {
            dom: a,
            cod: b,
            table: table.clone(),
        });
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
        }
    }
}

/// The subset where `f` and `g` agree, with its inclusion.
pub fn equalizer(f: &SetMap, g: &SetMap) -> Result<(SetObj, SetMap)> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::MismatchedEndpoints);
    }
    let agree: Vec<usize> = f.dom.elements().filter(|&i| f.apply(i) == g.apply(i)).collect();
    let obj = SetObj::new(agree.len());
    let incl = SetMap::new(obj, f.dom, agree)?;
    Ok((obj, incl))
}

/// Category tag for finite sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FinSet;

impl Category for FinSet {
    type Tag = ();
    type Obj = SetObj;
    type Mor = SetMap;

    fn dom(f: &SetMap) -> SetObj {
        f.dom
    }

    fn cod(f: &SetMap) -> SetObj {
        f.cod
    }

    fn identity(x: &SetObj) -> SetMap {
        SetMap::identity(*x)
    }

    fn compose(g: &SetMap, f: &SetMap) -> Result<SetMap> {
        g.after(f)
    }

    fn check_object(_: &(), _: &SetObj) -> Result<()> {
        Ok(())
    }
}

impl FiniteHoms for FinSet {
    fn hom_count(a: &SetObj, b: &SetObj) -> u128 {
        (b.size() as u128).saturating_pow(a.size() as u32)
    }

    fn hom(a: &SetObj, b: &SetObj) -> Vec<SetMap> {
        all_maps(*a, *b)
    }
}

impl FiniteLimits for FinSet {
    fn limit(d: &Diagram<FinSet>, budget: Budget) -> Result<LimitData<FinSet>> {
        let sizes: Vec<usize> = d.objects().iter().map(|x| x.size()).collect();
        let arrows: Vec<(usize, usize, &[usize])> = d
            .arrows()
            .map(|(e, f)| (e.src, e.dst, f.table()))
            .collect();
        let mut meter = budget.meter("enumerating compatible families");
        let families = compatible_families(&sizes, &arrows, &mut meter)?;
        let apex = SetObj::new(families.len());
        let projections = d
            .objects()
            .iter()
            .enumerate()
            .map(|(n, &x)| SetMap {
                dom: apex,
                cod: x,
                table: families.iter().map(|fam| fam[n]).collect(),
            })
            .collect();
        Ok(LimitData {
            apex,
            carrier: Carrier::Families(families),
            projections,
        })
    }

    fn factor(lim: &LimitData<FinSet>, cone: &Cone<FinSet>) -> Result<SetMap> {
        let Carrier::Families(families) = &lim.carrier else {
            return Err(Error::TypeMismatch("finite-set limit without families".into()));
        };
        let table = cone
            .apex
            .elements()
            .map(|i| {
                let family: Vec<usize> = cone.legs.iter().map(|l| l.apply(i)).collect();
                families.binary_search(&family).map_err(|_| Error::NoFactorization)
            })
            .collect::<Result<Vec<_>>>()?;
        SetMap::new(cone.apex, lim.apex, table)
    }

    fn is_iso(f: &SetMap) -> bool {
        f.is_bijective()
    }
}

struct Step<'a> {
    node: usize,
    /// Edge from an earlier node into this one; pins the value.
    forced_by: Option<(usize, &'a [usize])>,
    /// Edges between this node and earlier nodes (or self-loops):
    /// `(src, dst, table)`.
    checks: Vec<(usize, usize, &'a [usize])>,
}

/// Greedy visiting order: next node has the most edges into already placed
/// nodes; ties go to higher degree, then lower index.
fn visiting_order(n: usize, arrows: &[(usize, usize, &[usize])]) -> Vec<usize> {
    let mut degree = vec![0usize; n];
    for &(s, t, _) in arrows {
        degree[s] += 1;
        degree[t] += 1;
    }
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a], degree[a])
                    .cmp(&(links[b], degree[b]))
                    .then(b.cmp(&a))
            })
            .expect("unplaced node exists");
        placed[next] = true;
        order.push(next);
        for &(s, t, _) in arrows {
            if s == next && t != next {
                links[t] += 1;
            } else if t == next && s != next {
                links[s] += 1;
            }
        }
    }
    order
}

/// Every assignment of one element per node that commutes with all arrows,
/// sorted lexicographically in node order.
pub(crate) fn compatible_families(
    sizes: &[usize],
    arrows: &[(usize, usize, &[usize])],
    meter: &mut StepMeter,
) -> Result<Vec<Vec<usize>>> {
    if sizes.contains(&0) {
        return Ok(Vec::new());
    }
    let n = sizes.len();
    let order = visiting_order(n, arrows);
    let mut position = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let steps: Vec<Step> = order
        .iter()
        .map(|&v| {
            let p = position[v];
            let earlier = |u: usize| position[u] < p;
            let forced_by = arrows
                .iter()
                .find(|&&(s, t, _)| t == v && s != v && earlier(s))
                .map(|&(s, _, tab)| (s, tab));
            let checks = arrows
                .iter()
                .filter(|&&(s, t, _)| {
                    (s == v && (t == v || earlier(t))) || (t == v && earlier(s))
                })
                .copied()
                .collect();
            Step {
                node: v,
                forced_by,
                checks,
            }
        })
        .collect();

    let mut out = Vec::new();
    let mut current = vec![usize::MAX; n];
    search(&steps, 0, sizes, &mut current, &mut out, meter)?;
    out.sort_unstable();
    Ok(out)
}

fn search(
    steps: &[Step],
    depth: usize,
    sizes: &[usize],
    current: &mut [usize],
    out: &mut Vec<Vec<usize>>,
    meter: &mut StepMeter,
) -> Result<()> {
    let Some(step) = steps.get(depth) else {
        out.push(current.to_vec());
        return Ok(());
    };
    let candidates = match step.forced_by {
        Some((src, table)) => {
            let v = table[current[src]];
            v..v + 1
        }
        None => 0..sizes[step.node],
    };
    for value in candidates {
        meter.tick()?;
        current[step.node] = value;
        let ok = step
            .checks
            .iter()
            .all(|&(s, t, table)| table[current[s]] == current[t]);
        if ok {
            search(steps, depth + 1, sizes, current, out, meter)?;
        }
    }
    current[step.node] = usize::MAX;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{compute_limit, Budget};

    fn set_diagram(sizes: &[usize], edges: &[(usize, usize, Vec<usize>)]) -> Diagram<FinSet> {
        let mut b = Diagram::<FinSet>::builder(());
        for (i, &s) in sizes.iter().enumerate() {
            b.node(format!("d{i}"), SetObj::new(s));
        }
        for (i, (s, t, tab)) in edges.iter().enumerate() {
            let f = SetMap::from_table(sizes[*t], tab.clone()).unwrap();
            b.edge(format!("e{i}"), *s, *t, f);
        }
        b.build().unwrap()
    }

    #[test]
    fn maps_validate_tables() {
        assert!(SetMap::from_table(2, vec![0, 2]).is_err());
        assert!(SetMap::new(SetObj::new(3), SetObj::new(2), vec![0, 1]).is_err());
        let f = SetMap::from_table(3, vec![2, 2, 0]).unwrap();
        let g = SetMap::from_table(2, vec![1, 0, 0]).unwrap();
        assert_eq!(g.after(&f).unwrap().table(), &[0, 0, 1]);
        assert!(f.after(&f).is_ok());
        assert!(g.after(&g).is_err());
    }

    #[test]
    fn empty_domain_is_not_constant() {
        let f = SetMap::from_table(2, vec![]).unwrap();
        assert!(!f.is_constant());
        assert!(SetMap::from_table(2, vec![1, 1]).unwrap().is_constant());
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(all_maps(SetObj::new(3), SetObj::new(2)).len(), 8);
        assert_eq!(all_maps(SetObj::new(0), SetObj::new(0)).len(), 1);
        assert_eq!(all_maps(SetObj::new(2), SetObj::new(0)).len(), 0);
        let maps = all_maps(SetObj::new(2), SetObj::new(3));
        assert_eq!(maps[0].table(), &[0, 0]);
        assert_eq!(maps[1].table(), &[0, 1]);
        assert_eq!(maps.last().unwrap().table(), &[2, 2]);
    }

    #[test]
    fn equalizer_examples() {
        let id = SetMap::identity(SetObj::new(3));
        let (obj, incl) = equalizer(&id, &id).unwrap();
        assert_eq!(obj.size(), 3);
        assert_eq!(incl.table(), &[0, 1, 2]);

        let cycle = SetMap::from_table(3, vec![1, 2, 0]).unwrap();
        assert_eq!(equalizer(&id, &cycle).unwrap().0.size(), 0);

        let g = SetMap::from_table(3, vec![0, 1, 0]).unwrap();
        let (obj, incl) = equalizer(&id, &g).unwrap();
        assert_eq!(obj.size(), 2);
        assert_eq!(incl.table(), &[0, 1]);

        let h = SetMap::from_table(2, vec![0, 1, 0]).unwrap();
        assert_eq!(equalizer(&id, &h), Err(Error::MismatchedEndpoints));
    }

    #[test]
    fn limit_of_empty_shape_is_terminal() {
        let d = set_diagram(&[], &[]);
        let lim = compute_limit(&d, Budget::default()).unwrap();
        assert_eq!(lim.carrier, Carrier::Families(vec![vec![]]));
        assert!(lim.projections.is_empty());
    }

    #[test]
    fn limit_of_discrete_shape_is_product() {
        let d = set_diagram(&[2, 3], &[]);
        let lim = compute_limit(&d, Budget::default()).unwrap();
        assert_eq!(lim.apex.size(), 6);
        let Carrier::Families(f) = &lim.carrier else { unreachable!() };
        assert_eq!(f[0], vec![0, 0]);
        assert_eq!(f[1], vec![0, 1]);
        assert_eq!(f[5], vec![1, 2]);
    }

    #[test]
    fn swap_against_identity_has_empty_limit() {
        let d = set_diagram(&[2, 2], &[(0, 1, vec![1, 0]), (1, 0, vec![0, 1])]);
        assert_eq!(compute_limit(&d, Budget::default()).unwrap().apex.size(), 0);
    }

    #[test]
    fn empty_node_forces_empty_carrier() {
        let d = set_diagram(&[2, 0, 3], &[]);
        assert_eq!(compute_limit(&d, Budget::default()).unwrap().apex.size(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let d = set_diagram(&[3, 3, 3, 3], &[]);
        let err = compute_limit(&d, Budget(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let d = set_diagram(
            &[2, 3, 2],
            &[(0, 1, vec![2, 0]), (2, 1, vec![0, 2]), (1, 1, vec![0, 1, 2])],
        );
        let a = compute_limit(&d, Budget::default()).unwrap();
        let b = compute_limit(&d, Budget::default()).unwrap();
        assert_eq!(a, b);
    }
}
