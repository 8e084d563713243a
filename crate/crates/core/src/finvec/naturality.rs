//! Exhaustive search for natural transformations `F → (−)**` on the full
//! subcategory of coordinate spaces of small dimension.

use serde_json::json;

use super::dual::{dd_on_map, unit_component};
use super::field::Field;
use super::matrix::Matrix;
use super::space::{LinMap, VecObj};
use crate::diagram::Budget;
use crate::error::{Error, Result};
use crate::report::{Anchor, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearFunctor {
    Identity,
    DoubleDual,
}

impl LinearFunctor {
    pub fn on_map(self, f: &LinMap) -> LinMap {
        match self {
            LinearFunctor::Identity => f.clone(),
            LinearFunctor::DoubleDual => dd_on_map(f),
        }
    }

    /// The transformation every natural family must be a multiple of.
    pub fn canonical(self, x: VecObj) -> LinMap {
        match self {
            LinearFunctor::Identity => unit_component(x),
            LinearFunctor::DoubleDual => LinMap::identity(x),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinearFunctor::Identity => "id",
            LinearFunctor::DoubleDual => "dd",
        }
    }
}

/// Components `β_n` for `n = 0, …, max_dim`.
pub type Family = Vec<LinMap>;

/// Every family `β_n: F(F^n) → (F^n)**` that is natural with respect to all
/// maps between the spaces `F^0, …, F^max_dim`.
pub fn natural_families(
    field: Field,
    max_dim: usize,
    functor: LinearFunctor,
    budget: Budget,
) -> Result<Vec<Family>> {
    if max_dim > 2 {
        return Err(Error::BoundExceeded {
            what: "naturality scan dimension",
            value: max_dim,
            bound: 2,
        });
    }
    let spaces: Vec<VecObj> = (0..=max_dim).map(|n| VecObj::new(field, n)).collect();
    let candidates: u128 = spaces
        .iter()
        .map(|x| Matrix::count(field, x.dim(), x.dim()))
        .product();
    if candidates > budget.steps() as u128 {
        return Err(Error::BudgetExceeded {
            what: format!("scanning {candidates} candidate families"),
            budget: budget.steps(),
        });
    }

    // (m, n, F(f), f**) for every f: F^m → F^n
    let squares: Vec<(usize, usize, LinMap, LinMap)> = spaces
        .iter()
        .flat_map(|&a| spaces.iter().map(move |&b| (a, b)))
        .flat_map(|(a, b)| {
            Matrix::all(field, b.dim(), a.dim()).map(move |m| {
                let f = LinMap::new(a, b, m).expect("shape");
                (a.dim(), b.dim(), functor.on_map(&f), dd_on_map(&f))
            })
        })
        .collect();

    let components: Vec<Vec<LinMap>> = spaces
        .iter()
        .map(|&x| {
            Matrix::all(field, x.dim(), x.dim())
                .map(|m| LinMap::new(x, x, m).expect("shape"))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; spaces.len()];
    loop {
        let family: Family = choice
            .iter()
            .enumerate()
            .map(|(n, &i)| components[n][i].clone())
            .collect();
        let natural = squares.iter().all(|(m, n, ff, fdd)| {
            family[*n].after(ff).expect("typed") == fdd.after(&family[*m]).expect("typed")
        });
        if natural {
            out.push(family);
        }
        // odometer over component choices
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < components[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Checks that the natural families `F → (−)**` on dimensions ≤ `max_dim`
/// are exactly the `q` scalar multiples of the canonical one.
pub fn scalar_uniqueness_check(
    field: Field,
    max_dim: usize,
    functor: LinearFunctor,
    budget: Budget,
) -> Result<Report> {
    let found = natural_families(field, max_dim, functor, budget)?;
    let canonical: Family = (0..=max_dim)
        .map(|n| functor.canonical(VecObj::new(field, n)))
        .collect();
    let mut expected: Vec<Family> = field
        .elements()
        .map(|k| canonical.iter().map(|c| c.scale(k)).collect())
        .collect();
    expected.sort();
    expected.dedup();

    let mut report = Report::new(
        "scalar-uniqueness",
        Anchor::new(
            "natural maps into the double dual",
            "natural transformations from a linear endofunctor F with F(K) ≅ K into (−)** are \
             unique up to a scalar multiple",
        ),
    )
    .metric("q", field.q())
    .metric("max_dim", max_dim)
    .metric("functor", functor.name())
    .metric("natural_families", found.len());

    let mut sorted = found.clone();
    sorted.sort();
    if sorted != expected {
        let stray = sorted.iter().find(|f| !expected.contains(f));
        report.fail(json!({
            "q": field.q(),
            "max_dim": max_dim,
            "functor": functor.name(),
            "found": found.len(),
            "expected": expected.len(),
            "non_scalar_family": stray.map(|f| f.iter().map(|c| c.matrix().to_rows()).collect::<Vec<_>>()),
        }));
    }
    if found.len() != field.q() as usize {
        report.fail(json!({ "q": field.q(), "functor": functor.name(), "count": found.len() }));
    }
    Ok(report)
}
