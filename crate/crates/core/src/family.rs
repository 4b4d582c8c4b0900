//! Upper sets of finite sets, `Q_fin(X)`, and the directed families over them.
//!
//! Convergence of a finite family only sees the up-closures of its members, so
//! families are stored as sets of indices into [`FinUpsets`]. Each element keeps
//! its antichain of minimal points as the canonical generator.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::order::SpecOrder;
use crate::set::{PointSet, MAX_POINTS};

/// The nonempty upper sets `↑F` of a finite order, with `≤_Q` (reverse inclusion).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinUpsets {
    upsets: Vec<PointSet>,
    generators: Vec<PointSet>,
    order: SpecOrder,
}

impl FinUpsets {
    /// Elements are sorted by generator, cardinality first, so `↑x` has index `x`.
    pub fn new(base: &SpecOrder) -> Result<Self> {
        let mut upsets: Vec<PointSet> = base
            .upper_sets()?
            .into_iter()
            .filter(|u| !u.is_empty())
            .collect();
        if upsets.len() > MAX_POINTS {
            return Err(Error::TooLarge {
                what: "finite upper sets",
                size: upsets.len() as u128,
                limit: MAX_POINTS as u128,
            });
        }
        upsets.sort_by(|a, b| base.minimal(*a).size_lex_cmp(base.minimal(*b)));
        let generators: Vec<PointSet> = upsets.iter().map(|&u| base.minimal(u)).collect();
        let up = upsets
            .iter()
            .map(|&a| {
                upsets
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.is_subset(a))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let order = SpecOrder::from_up_sets(up)?;
        Ok(FinUpsets {
            upsets,
            generators,
            order,
        })
    }

    pub fn len(&self) -> usize {
        self.upsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upsets.is_empty()
    }

    pub fn upset(&self, i: usize) -> PointSet {
        self.upsets[i]
    }

    pub fn upsets(&self) -> &[PointSet] {
        &self.upsets
    }

    /// Minimal points of element `i`.
    pub fn generator(&self, i: usize) -> PointSet {
        self.generators[i]
    }

    /// Index of an upper set; `None` when `set` is empty or not upper.
    pub fn index_of(&self, set: PointSet) -> Option<usize> {
        self.upsets.iter().position(|&u| u == set)
    }

    /// `≤_Q` on element indices.
    pub fn order(&self) -> &SpecOrder {
        &self.order
    }

    pub fn le_q(&self, a: usize, b: usize) -> bool {
        self.order.le(a, b)
    }

    /// `A ∪ B`, the binary join of the deflationary semilattice.
    pub fn union(&self, a: usize, b: usize) -> usize {
        self.index_of(self.upsets[a] | self.upsets[b])
            .expect("union of upper sets is upper")
    }

    /// Element indices whose upper set lies inside `set`.
    pub fn contained_in(&self, set: PointSet) -> PointSet {
        (0..self.len())
            .filter(|&i| self.upsets[i].is_subset(set))
            .collect()
    }

    /// Every `≤_Q`-directed family, as index sets.
    pub fn directed_families(&self) -> Result<Vec<PointSet>> {
        self.order.directed_subsets()
    }

    /// Generators of the members of `family`.
    pub fn members(&self, family: PointSet) -> Vec<PointSet> {
        family.iter().map(|i| self.generators[i]).collect()
    }

    /// The `≤_Q`-greatest member: the smallest upper set in the family.
    pub fn top(&self, family: PointSet) -> Option<usize> {
        self.order.greatest_in(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_principal_upsets_only() {
        let q = FinUpsets::new(&SpecOrder::chain(2)).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.upset(0), PointSet::full(2));
        assert!(q.le_q(0, 1));
    }

    #[test]
    fn antichain_pair() {
        let q = FinUpsets::new(&SpecOrder::antichain(2)).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.generator(2), PointSet::full(2));
        assert!(q.le_q(2, 0) && q.le_q(2, 1));
        assert!(!q.le_q(0, 1));
        assert_eq!(q.union(0, 1), 2);
    }

    #[test]
    fn singletons_index_points() {
        let base = SpecOrder::from_relation(3, [(0, 2), (1, 2)]).unwrap();
        let q = FinUpsets::new(&base).unwrap();
        for x in 0..3 {
            assert_eq!(q.upset(x), base.up(x));
        }
    }

    #[test]
    fn directed_families_have_tops() {
        let q = FinUpsets::new(&SpecOrder::antichain(3)).unwrap();
        for fam in q.directed_families().unwrap() {
            let t = q.top(fam).unwrap();
            assert!(fam.iter().all(|m| q.upset(t).is_subset(q.upset(m))));
        }
    }
}
