use std::fmt;

use serde::Serialize;

use super::set::{SetMap, SetObj};
use crate::error::{Error, Result};

/// Largest ground set [`all_partitions`] enumerates without an explicit bound.
pub const DEFAULT_PARTITION_BOUND: usize = 6;

/// A set partition of `{0, …, n-1}` into nonempty blocks.
///
/// Blocks are sorted internally and ordered by least element, so two equal
/// partitions always compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    ground: usize,
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    labels: Vec<usize>,
}

impl Partition {
    /// Canonicalizes `blocks`; rejects empty, overlapping or non-covering
    /// blocks.
    pub fn from_blocks(ground: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![usize::MAX; ground];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidArgument("partition with an empty block".into()));
            }
            for &x in block {
                if x >= ground {
                    return Err(Error::InvalidArgument(format!(
                        "element {x} outside a ground set of {ground}"
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("element {x} in two blocks")));
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::InvalidArgument("blocks do not cover the ground set".into()));
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Builds the partition whose blocks are the classes of equal labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut relabel: Vec<(usize, usize)> = Vec::new();
        let mut canon = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &l) in labels.iter().enumerate() {
            let b = match relabel.iter().find(|(old, _)| *old == l) {
                Some(&(_, b)) => b,
                None => {
                    relabel.push((l, blocks.len()));
                    blocks.push(Vec::new());
                    blocks.len() - 1
                }
            };
            blocks[b].push(x);
            canon.push(b);
        }
        Partition {
            ground: labels.len(),
            blocks,
            labels: canon,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn one_block(n: usize) -> Self {
        Partition::from_labels(&vec![0; n])
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    /// `X → X/Q`, sending each element to its block index.
    pub fn quotient_map(&self) -> SetMap {
        SetMap::new(
            SetObj::new(self.ground),
            SetObj::new(self.block_count()),
            self.labels.clone(),
        )
        .expect("labels index blocks")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        write!(f, "{{{}}}", parts.join("|"))
    }
}

/// Every partition of `{0, …, n-1}` for `n ≤ 6`.
pub fn all_partitions(n: usize) -> Result<Vec<Partition>> {
    all_partitions_bounded(n, DEFAULT_PARTITION_BOUND)
}

/// Every partition of `{0, …, n-1}`, in lexicographic order of their
/// restricted growth strings. The empty ground set yields no partitions.
pub fn all_partitions_bounded(n: usize, bound: usize) -> Result<Vec<Partition>> {
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "partition ground size",
            value: n,
            bound,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        out.push(Partition::from_labels(&rgs));
        // advance the restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// True iff every block of `q1` lies inside a block of `q2`.
pub fn is_coarser(q2: &Partition, q1: &Partition) -> Result<bool> {
    if q1.ground != q2.ground {
        return Err(Error::GroundMismatch(q2.ground, q1.ground));
    }
    Ok(q1
        .blocks
        .iter()
        .all(|b| b.iter().all(|&x| q2.block_of(x) == q2.block_of(b[0]))))
}

/// The map `X/q1 → X/q2` sending a block of `q1` to the block of `q2`
/// containing it, when `q2` is coarser than `q1`.
pub fn coarsening_map(q1: &Partition, q2: &Partition) -> Result<Option<SetMap>> {
    if !is_coarser(q2, q1)? {
        return Ok(None);
    }
    let table = q1.blocks.iter().map(|b| q2.block_of(b[0])).collect();
    SetMap::new(
        SetObj::new(q1.block_count()),
        SetObj::new(q2.block_count()),
        table,
    )
    .map(Some)
}

/// The partition into nonempty fibres of `f`.
pub fn partition_of_map(f: &SetMap) -> Partition {
    Partition::from_labels(f.table())
}

/// One chosen block index per partition of a fixed ground set, indexed like
/// the partition list it was built against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoherentChoice {
    pub choice: Vec<usize>,
}

impl CoherentChoice {
    /// Whenever `parts[j]` is coarser than `parts[i]`, the block chosen in
    /// `parts[j]` must contain the block chosen in `parts[i]`.
    pub fn is_coherent(&self, parts: &[Partition]) -> bool {
        if self.choice.len() != parts.len() {
            return false;
        }
        let relation = coarsening_relation(parts);
        relation.iter().all(|&(fine, coarse)| {
            respects(&parts[fine], self.choice[fine], &parts[coarse], self.choice[coarse])
        })
    }

    /// The block of each partition that contains `point`.
    pub fn from_point(parts: &[Partition], point: usize) -> Self {
        CoherentChoice {
            choice: parts.iter().map(|p| p.block_of(point)).collect(),
        }
    }
}

/// Pairs `(fine, coarse)` of distinct indices with `parts[coarse]` coarser
/// than `parts[fine]`.
fn coarsening_relation(parts: &[Partition]) -> Vec<(usize, usize)> {
    let mut rel = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for (j, q) in parts.iter().enumerate() {
            if i != j && p.ground == q.ground && is_coarser(q, p).unwrap_or(false) {
                rel.push((i, j));
            }
        }
    }
    rel
}

fn respects(fine: &Partition, fine_block: usize, coarse: &Partition, coarse_block: usize) -> bool {
    let representative = fine.blocks[fine_block][0];
    coarse.block_of(representative) == coarse_block
}

/// Every coherent block selection over `all_partitions(n)`, found by
/// backtracking from the finest partition down, sorted.
pub fn coherent_choices(n: usize) -> Result<Vec<CoherentChoice>> {
    let parts = all_partitions(n)?;
    Ok(coherent_choices_over(&parts))
}

pub fn coherent_choices_over(parts: &[Partition]) -> Vec<CoherentChoice> {
    if parts.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(parts[i].block_count()));
    let relation = coarsening_relation(parts);
    let mut position = vec![0; parts.len()];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    // constraints checked at the later of the two endpoints
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); parts.len()];
    for &(fine, coarse) in &relation {
        let later = position[fine].max(position[coarse]);
        checks[later].push((fine, coarse));
    }

    let mut out = Vec::new();
    let mut current = vec![usize::MAX; parts.len()];
    fn go(
        depth: usize,
        order: &[usize],
        parts: &[Partition],
        checks: &[Vec<(usize, usize)>],
        current: &mut [usize],
        out: &mut Vec<CoherentChoice>,
    ) {
        let Some(&idx) = order.get(depth) else {
            out.push(CoherentChoice {
                choice: current.to_vec(),
            });
            return;
        };
        for b in 0..parts[idx].block_count() {
            current[idx] = b;
            let ok = checks[depth].iter().all(|&(fine, coarse)| {
                respects(&parts[fine], current[fine], &parts[coarse], current[coarse])
            });
            if ok {
                go(depth + 1, order, parts, checks, current, out);
            }
        }
        current[idx] = usize::MAX;
    }
    go(0, &order, parts, &checks, &mut current, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ground: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(ground, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = p(3, &[&[2], &[1, 0]]);
        assert_eq!(a.blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(a.to_string(), "{01|2}");
        assert!(Partition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(all_partitions(0).unwrap().len(), 0);
        assert_eq!(all_partitions(1).unwrap().len(), 1);
        assert_eq!(all_partitions(3).unwrap().len(), 5);
        assert_eq!(all_partitions(4).unwrap().len(), 15);
        assert_eq!(all_partitions(6).unwrap().len(), 203);
        assert!(matches!(all_partitions(7), Err(Error::BoundExceeded { .. })));
        assert_eq!(all_partitions_bounded(7, 7).unwrap().len(), 877);
    }

    #[test]
    fn coarsening_examples() {
        let q1 = p(3, &[&[0, 1], &[2]]);
        let q2 = p(3, &[&[0, 2], &[1]]);
        assert!(!is_coarser(&q2, &q1).unwrap());
        for q in all_partitions(3).unwrap() {
            assert!(is_coarser(&Partition::one_block(3), &q).unwrap());
            assert!(is_coarser(&q, &Partition::singletons(3)).unwrap());
        }
        assert_eq!(
            is_coarser(&Partition::one_block(2), &Partition::one_block(3)),
            Err(Error::GroundMismatch(2, 3))
        );
    }

    #[test]
    fn fibres_of_maps() {
        let id = SetMap::identity(SetObj::new(4));
        assert_eq!(partition_of_map(&id), Partition::singletons(4));
        let c = SetMap::constant(SetObj::new(4), SetObj::new(2), 1);
        assert_eq!(partition_of_map(&c), Partition::one_block(4));
        let f = SetMap::from_table(2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(partition_of_map(&f).to_string(), "{01|23}");
    }

    #[test]
    fn quotient_then_fibres_is_identity() {
        for n in 0..=5 {
            for q in all_partitions(n).unwrap() {
                assert_eq!(partition_of_map(&q.quotient_map()), q);
            }
        }
    }

    #[test]
    fn choice_counts() {
        assert_eq!(coherent_choices(0).unwrap().len(), 0);
        assert_eq!(coherent_choices(1).unwrap().len(), 1);
        assert_eq!(coherent_choices(3).unwrap().len(), 3);
        assert_eq!(coherent_choices(4).unwrap().len(), 4);
    }

    #[test]
    fn incoherent_choice_detected() {
        let parts = all_partitions(3).unwrap();
        let mut c = CoherentChoice::from_point(&parts, 1);
        assert!(c.is_coherent(&parts));
        let finest = parts.iter().position(|q| q.block_count() == 3).unwrap();
        c.choice[finest] = 0;
        assert!(!c.is_coherent(&parts));
    }
}
