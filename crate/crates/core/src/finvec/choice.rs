//! Linear partitions, coherent vector choices, and their correspondence with
//! vectors of the double dual.

use std::collections::BTreeSet;

use serde_json::json;

use super::dual::{dd_on_map, eval_functional, unit_component};
use super::field::Field;
use super::matrix::{all_vectors, Matrix};
use super::space::{LinMap, VecObj};
use crate::diagram::Budget;
use crate::error::{Error, Result};
use crate::report::{Anchor, Report};

/// A surjective linear map `X ↠ F^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearPartition {
    map: LinMap,
}

impl LinearPartition {
    pub fn new(map: LinMap) -> Result<Self> {
        if !map.is_surjective() {
            return Err(Error::InvalidArgument("linear partition must be surjective".into()));
        }
        Ok(LinearPartition { map })
    }

    pub fn map(&self) -> &LinMap {
        &self.map
    }

    pub fn rank(&self) -> usize {
        self.map.cod().dim()
    }
}

/// All surjections `x ↠ F^r` for `1 ≤ r ≤ max_cod`, ordered by `r` and then
/// lexicographically by matrix entries.
pub fn enumerate_linear_partitions(
    x: VecObj,
    max_cod: usize,
    budget: Budget,
) -> Result<Vec<LinearPartition>> {
    let field = x.field();
    let candidates: u128 = (1..=max_cod).map(|r| Matrix::count(field, r, x.dim())).sum();
    if candidates > budget.steps() as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("enumerating {candidates} candidate linear partitions"),
            budget: budget.steps(),
        });
    }
    Ok((1..=max_cod.min(x.dim()))
        .flat_map(|r| Matrix::all(field, r, x.dim()))
        .filter(|m| m.rank() == m.rows())
        .map(|m| LinearPartition {
            map: LinMap::new(x, VecObj::new(field, m.rows()), m).expect("shape"),
        })
        .collect())
}

/// One vector of `F^r` per linear partition, indexed like the partition
/// list it was built against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualChoice {
    pub alpha: Vec<Vec<u8>>,
}

/// `(a, b, u)` with `parts[a] = u ∘ parts[b]`.
type Factorization = (usize, usize, Matrix);

/// The linear partitions of a space together with every factorization
/// between them.
#[derive(Debug, Clone)]
pub struct PartitionSystem {
    space: VecObj,
    parts: Vec<LinearPartition>,
    factorizations: Vec<Factorization>,
}

impl PartitionSystem {
    pub fn new(space: VecObj, max_cod: usize, budget: Budget) -> Result<Self> {
        let parts = enumerate_linear_partitions(space, max_cod, budget)?;
        let mut factorizations = Vec::new();
        for (a, pa) in parts.iter().enumerate() {
            for (b, pb) in parts.iter().enumerate() {
                if a == b {
                    continue;
                }
                // u ∘ b = a  ⟺  bᵀ uᵀ = aᵀ
                let bt = pb.map.matrix().transpose();
                if let Some(ut) = bt.solve(&pa.map.matrix().transpose()) {
                    let u = ut.transpose();
                    debug_assert_eq!(&u.mul(pb.map.matrix()), pa.map.matrix());
                    factorizations.push((a, b, u));
                }
            }
        }
        Ok(PartitionSystem {
            space,
            parts,
            factorizations,
        })
    }

    pub fn space(&self) -> VecObj {
        self.space
    }

    pub fn parts(&self) -> &[LinearPartition] {
        &self.parts
    }

    pub fn factorization_count(&self) -> usize {
        self.factorizations.len()
    }

    fn field(&self) -> Field {
        self.space.field()
    }

    /// `α(a) = u(α(b))` for every factorization `a = u ∘ b`.
    pub fn is_coherent(&self, c: &DualChoice) -> bool {
        c.alpha.len() == self.parts.len()
            && self
                .factorizations
                .iter()
                .all(|(a, b, u)| u.apply(&c.alpha[*b]) == c.alpha[*a])
    }

    /// The choice induced by `t ∈ X**`: `α(a) = (t(a_1), …, t(a_r))` where
    /// `a_i` are the component functionals of `a`.
    pub fn alpha_from_vector(&self, t: &[u8]) -> Result<DualChoice> {
        if t.len() != self.space.dim() {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} in a double dual of dimension {}",
                t.len(),
                self.space.dim()
            )));
        }
        let field = self.field();
        let alpha = self
            .parts
            .iter()
            .map(|p| {
                let m = p.map.matrix();
                (0..m.rows())
                    .map(|i| eval_functional(field, t, m.row(i)))
                    .collect()
            })
            .collect();
        let c = DualChoice { alpha };
        if !self.is_coherent(&c) {
            return Err(Error::Incoherent(format!("choice induced by {t:?}")));
        }
        Ok(c)
    }

    /// Every coherent choice, by backtracking from the highest-rank
    /// partitions down with forced propagation along factorizations.
    pub fn coherent_choices(&self, budget: Budget) -> Result<Vec<DualChoice>> {
        let n = self.parts.len();
        if n == 0 {
            return Ok(vec![DualChoice { alpha: Vec::new() }]);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.parts[i].rank()));
        let mut position = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            position[i] = p;
        }
        let mut forced: Vec<Option<usize>> = vec![None; n];
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, (a, b, _)) in self.factorizations.iter().enumerate() {
            if position[*b] < position[*a] && forced[position[*a]].is_none() {
                forced[position[*a]] = Some(k);
            }
            checks[position[*a].max(position[*b])].push(k);
        }

        let mut meter = budget.meter("enumerating coherent vector choices");
        let mut current: Vec<Vec<u8>> = vec![Vec::new(); n];
        let mut out = Vec::new();
        self.search(0, &order, &forced, &checks, &mut current, &mut out, &mut meter)?;
        out.sort();
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        depth: usize,
        order: &[usize],
        forced: &[Option<usize>],
        checks: &[Vec<usize>],
        current: &mut Vec<Vec<u8>>,
        out: &mut Vec<DualChoice>,
        meter: &mut crate::diagram::StepMeter,
    ) -> Result<()> {
        let Some(&idx) = order.get(depth) else {
            out.push(DualChoice {
                alpha: current.clone(),
            });
            return Ok(());
        };
        let candidates: Vec<Vec<u8>> = match forced[depth] {
            Some(k) => {
                let (_, b, u) = &self.factorizations[k];
                vec![u.apply(&current[*b])]
            }
            None => all_vectors(self.field(), self.parts[idx].rank()).collect(),
        };
        for v in candidates {
            meter.tick()?;
            current[idx] = v;
            let ok = checks[depth].iter().all(|&k| {
                let (a, b, u) = &self.factorizations[k];
                u.apply(&current[*b]) == current[*a]
            });
            if ok {
                self.search(depth + 1, order, forced, checks, current, out, meter)?;
            }
        }
        current[idx] = Vec::new();
        Ok(())
    }
}

/// Largest dimension the coherent-choice bijection check accepts for `q`.
pub fn dual_choice_bound(field: Field) -> usize {
    if field.q() == 2 {
        3
    } else {
        2
    }
}

/// Checks that `t ↦ α` is a bijection from `(F_q^n)**` onto the coherent
/// choices over all linear partitions of `F_q^n`.
pub fn dual_choice_check(field: Field, n: usize, budget: Budget) -> Result<Report> {
    let bound = dual_choice_bound(field);
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "double-dual choice dimension",
            value: n,
            bound,
        });
    }
    let system = PartitionSystem::new(VecObj::new(field, n), n, budget)?;
    let choices = system.coherent_choices(budget)?;
    let mut report = Report::new(
        "dual-choice",
        Anchor::new(
            "double-dual vectors as coherent choices",
            "vectors of X** correspond bijectively to coherent choices of one vector of F^r for \
             every surjection X ↠ F^r, via t ↦ (t(a_1), …, t(a_r))",
        ),
    )
    .metric("q", field.q())
    .metric("dim", n)
    .metric("linear_partitions", system.parts().len())
    .metric("factorizations", system.factorization_count())
    .metric("coherent_choices", choices.len());

    let mut induced = BTreeSet::new();
    let mut double_dual = 0usize;
    for t in all_vectors(field, n) {
        double_dual += 1;
        match system.alpha_from_vector(&t) {
            Ok(c) => {
                if !induced.insert(c) {
                    report.fail(json!({ "q": field.q(), "dim": n, "non_injective_at": t }));
                }
            }
            Err(_) => report.fail(json!({ "q": field.q(), "dim": n, "incoherent_at": t })),
        }
    }
    report.set_metric("double_dual_size", double_dual);
    let all: BTreeSet<DualChoice> = choices.into_iter().collect();
    if let Some(missed) = all.difference(&induced).next() {
        report.fail(json!({ "q": field.q(), "dim": n, "unreached_choice": missed.alpha }));
    }
    if induced.len() != all.len() {
        report.fail(json!({ "q": field.q(), "dim": n, "induced": induced.len(), "enumerated": all.len() }));
    }
    Ok(report)
}

/// A vector `v` with `η_A(v) = a**(x)`, if one exists.
pub fn evaluation_witness(x: &[u8], a: &LinMap) -> Option<Vec<u8>> {
    let image = dd_on_map(a).apply(x);
    let eta = unit_component(a.cod());
    let sol = eta.matrix().solve(&Matrix::column(a.field(), &image))?;
    Some(sol.col(0))
}

/// Whether `a**(x)` lies in the image of `η`, for `x` in the double dual of
/// `a`'s domain. Always true in finite dimension; computed, not assumed.
pub fn is_evaluation_vector(x: &[u8], a: &LinMap) -> bool {
    evaluation_witness(x, a).is_some()
}
