//! Ultrafilters on finite sets and the ultrafilter monad.
//!
//! On a finite set every ultrafilter is principal, so an ultrafilter is stored
//! as its generating point. The set-family view is materialized only for
//! small grounds, where it is used to check the point representation against
//! the defining formulas.

use serde::Serialize;

use super::set::{SetMap, SetObj};
use crate::error::{Error, Result};

/// Largest ground set whose set-family view is materialized.
pub const FAMILY_BOUND: usize = 5;

/// A family of subsets of a ground set; each subset is a bitmask.
pub type SetFamily = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinUltrafilter {
    ground: SetObj,
    principal_at: usize,
}

impl FinUltrafilter {
    pub fn principal(ground: SetObj, point: usize) -> Result<Self> {
        if point >= ground.size() {
            return Err(Error::InvalidArgument(format!(
                "point {point} outside a ground set of {}",
                ground.size()
            )));
        }
        Ok(FinUltrafilter {
            ground,
            principal_at: point,
        })
    }

    pub fn ground(&self) -> SetObj {
        self.ground
    }

    pub fn principal_at(&self) -> usize {
        self.principal_at
    }

    /// `{A ⊆ ground : principal_at ∈ A}`, ascending by bitmask.
    pub fn family(&self) -> Result<SetFamily> {
        check_family_bound(self.ground.size())?;
        let bit = 1u32 << self.principal_at;
        Ok(subsets(self.ground.size()).filter(|a| a & bit != 0).collect())
    }
}

/// Every ultrafilter on `x`, ordered by generating point.
pub fn all_ultrafilters(x: SetObj) -> Vec<FinUltrafilter> {
    x.elements()
        .map(|p| FinUltrafilter {
            ground: x,
            principal_at: p,
        })
        .collect()
}

fn check_family_bound(n: usize) -> Result<()> {
    if n > FAMILY_BOUND {
        return Err(Error::BoundExceeded {
            what: "set-family ground size",
            value: n,
            bound: FAMILY_BOUND,
        });
    }
    Ok(())
}

fn subsets(n: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << n)
}

fn preimage(f: &SetMap, a: u32) -> u32 {
    f.table()
        .iter()
        .enumerate()
        .filter(|(_, &y)| a & (1 << y) != 0)
        .fold(0, |acc, (x, _)| acc | (1 << x))
}

/// True iff `family` is an ultrafilter on `{0, …, n-1}`: proper, upward
/// closed, closed under intersection, and containing each set or its
/// complement.
pub fn is_ultrafilter(n: usize, family: &[u32]) -> bool {
    let full = (1u32 << n) - 1;
    let contains = |a: u32| family.binary_search(&a).is_ok();
    if contains(0) || !contains(full) {
        return false;
    }
    subsets(n).all(|a| {
        let upward = !contains(a) || subsets(n).filter(|b| b & a == a).all(contains);
        let meets = !contains(a) || family.iter().all(|&b| contains(a & b));
        let decides = contains(a) != contains(full & !a);
        upward && meets && decides
    })
}

/// The image ultrafilter, by point.
pub fn pushforward_ultrafilter(f: &SetMap, u: &FinUltrafilter) -> Result<FinUltrafilter> {
    if f.dom() != u.ground {
        return Err(Error::TypeMismatch(format!(
            "ultrafilter on {:?} pushed along a map out of {:?}",
            u.ground,
            f.dom()
        )));
    }
    Ok(FinUltrafilter {
        ground: f.cod(),
        principal_at: f.apply(u.principal_at),
    })
}

/// `{A ⊆ Y : f⁻¹(A) ∈ family}` computed literally.
pub fn pushforward_family(f: &SetMap, family: &[u32]) -> Result<SetFamily> {
    check_family_bound(f.cod().size())?;
    Ok(subsets(f.cod().size())
        .filter(|&a| family.binary_search(&preimage(f, a)).is_ok())
        .collect())
}

/// The multiplication on families: given an ultrafilter on the list
/// `inner` of ultrafilters on `X`, returns
/// `{A ⊆ X : {i : A ∈ inner[i]} ∈ outer}`.
pub fn flatten_family(ground: usize, inner: &[SetFamily], outer: &[u32]) -> Result<SetFamily> {
    check_family_bound(ground)?;
    check_family_bound(inner.len())?;
    Ok(subsets(ground)
        .filter(|&a| {
            let members = inner
                .iter()
                .enumerate()
                .filter(|(_, u)| u.binary_search(&a).is_ok())
                .fold(0u32, |acc, (i, _)| acc | (1 << i));
            outer.binary_search(&members).is_ok()
        })
        .collect())
}

/// The ultrafilter monad on finite sets with `U(X)` identified with `X`
/// through principal points.
pub mod monad {
    use super::*;

    /// `η_X: x ↦ principal ultrafilter at x`.
    pub fn unit(x: SetObj) -> SetMap {
        SetMap::identity(x)
    }

    /// `U(f)`, by pushing each principal ultrafilter forward.
    pub fn on_map(f: &SetMap) -> SetMap {
        let table = all_ultrafilters(f.dom())
            .iter()
            .map(|u| {
                pushforward_ultrafilter(f, u)
                    .expect("ultrafilter lives on the domain")
                    .principal_at()
            })
            .collect();
        SetMap::new(f.dom(), f.cod(), table).expect("pushforward stays in codomain")
    }

    /// `μ_X: U(U(X)) → U(X)`: the principal ultrafilter at `u` flattens to `u`.
    pub fn mult(x: SetObj) -> SetMap {
        SetMap::identity(x)
    }
}
