//! d-way-below on points and finite sets, and the continuity notions built on it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::set::PointSet;
use crate::space::{is_directed_family, FiniteSpace};

/// Largest carrier for which the set-level way-below table is materialized.
pub const TABLE_LIMIT: usize = 20;

/// Way-below tables for one directed space. Built once; read-only afterwards.
#[derive(Clone, Debug)]
pub struct Approximation<'a> {
    space: &'a FiniteSpace,
    /// `uparrow[G] = ⇑_d G`, indexed by the bit pattern of `G`.
    uparrow: Vec<PointSet>,
}

impl<'a> Approximation<'a> {
    /// Fails on spaces that are not directed spaces.
    pub fn new(space: &'a FiniteSpace) -> Result<Self> {
        let n = space.len();
        if n > TABLE_LIMIT {
            return Err(Error::TooLarge {
                what: "way-below table",
                size: 1u128 << n,
                limit: 1u128 << TABLE_LIMIT,
            });
        }
        space.require_directed_space()?;
        let carrier = space.carrier();
        let size = 1usize << n;
        // blocked[W]: limits of directed sets D whose down-closure avoids W's complement,
        // i.e. every G ⊆ W has D ∩ ↑G = ∅.
        let mut blocked = alloc::vec![PointSet::EMPTY; size];
        for (d, lim) in space.convergence_table() {
            let avoid = carrier - space.down_closure(d);
            blocked[avoid.bits() as usize] |= lim;
        }
        for bit in 0..n {
            for w in (0..size).rev() {
                if w >> bit & 1 == 0 {
                    let up = blocked[w | 1 << bit];
                    blocked[w] |= up;
                }
            }
        }
        let uparrow = blocked.into_iter().map(|b| carrier - b).collect();
        Ok(Approximation { space, uparrow })
    }

    pub fn space(&self) -> &'a FiniteSpace {
        self.space
    }

    /// `x ≪_d y`: every directed set converging to `y` has a member above `x`.
    pub fn way_below_point(&self, x: usize, y: usize) -> bool {
        let ux = self.space.up(x);
        self.space
            .convergence_table()
            .all(|(d, lim)| !lim.contains(y) || d.intersects(ux))
    }

    /// `G ≪_d H`: every directed set converging to a point of `H` meets `↑G`.
    pub fn way_below_set(&self, g: PointSet, h: PointSet) -> Result<bool> {
        if g.is_empty() {
            return Err(Error::EmptyArgument("approximating set"));
        }
        if h.is_empty() {
            return Err(Error::EmptyArgument("approximated set"));
        }
        self.space.check_set(g)?;
        self.space.check_set(h)?;
        Ok(h.is_subset(self.uparrow[g.bits() as usize]))
    }

    /// `⇑_d F = {x : F ≪_d x}`.
    pub fn uparrow_d(&self, f: PointSet) -> Result<PointSet> {
        if f.is_empty() {
            return Err(Error::EmptyArgument("finite set"));
        }
        self.space.check_set(f)?;
        Ok(self.uparrow[f.bits() as usize])
    }

    /// `↡_d x`.
    pub fn waydown(&self, x: usize) -> PointSet {
        (0..self.space.len())
            .filter(|&y| self.way_below_point(y, x))
            .collect()
    }

    /// `K_d(X)`, the d-compact points.
    pub fn compact_points(&self) -> PointSet {
        (0..self.space.len())
            .filter(|&x| self.way_below_point(x, x))
            .collect()
    }

    /// `fin_d(x)`: nonempty `F` with `F ≪_d x`, in cardinality-then-lexicographic order.
    pub fn fin_d(&self, x: usize) -> Vec<PointSet> {
        self.space
            .carrier()
            .subsets_by_size()
            .into_iter()
            .filter(|f| self.uparrow[f.bits() as usize].contains(x))
            .collect()
    }

    /// Every `↡_d x` is directed and converges to `x`.
    pub fn is_d_continuous(&self) -> bool {
        let order = self.space.specialization_order();
        (0..self.space.len()).all(|x| {
            let wd = self.waydown(x);
            order.is_directed(wd) && self.space.converges(wd, x).unwrap_or(false)
        })
    }

    /// Every `fin_d(x)` is a directed family converging to `x`.
    pub fn is_d_quasicontinuous(&self) -> bool {
        let order = self.space.specialization_order();
        (0..self.space.len()).all(|x| {
            let fin = self.fin_d(x);
            is_directed_family(&fin, order) && self.space.absorbs(&fin, PointSet::singleton(x))
        })
    }

    /// A directed subfamily of `fin_d(x)` converging to `x`, returned by its
    /// single generator.
    ///
    /// A finite directed family contains a member `F*` with `F* ⊆ ↑F` for every
    /// member `F`; since opens are upper sets, the family converges exactly when
    /// `{F*}` does. So single-member families are a complete search space.
    pub fn converging_subfamily(&self, x: usize) -> Option<PointSet> {
        self.fin_d(x).into_iter().find(|&f| {
            let fam = crate::space::FiniteFamily::new(alloc::vec![f]).expect("nonempty member");
            self.space.family_converges(&fam, x).unwrap_or(false)
        })
    }

    /// Every point has a converging directed subfamily of `fin_d(x)`.
    pub fn has_converging_subfamilies(&self) -> bool {
        (0..self.space.len()).all(|x| self.converging_subfamily(x).is_some())
    }

    /// For every `x`, `B ∩ fin_d(x)` is directed and converges to `x`.
    pub fn is_quasibase(&self, basis: &[PointSet]) -> bool {
        let order = self.space.specialization_order();
        (0..self.space.len()).all(|x| {
            let trace: Vec<PointSet> = basis
                .iter()
                .copied()
                .filter(|&b| {
                    !b.is_empty()
                        && b.is_subset(self.space.carrier())
                        && self.uparrow[b.bits() as usize].contains(x)
                })
                .collect();
            is_directed_family(&trace, order) && self.space.absorbs(&trace, PointSet::singleton(x))
        })
    }

    /// Some `F` with `H ≪_d F ≪_d y`, smallest first with lexicographic ties.
    ///
    /// `Ok(None)` means no interpolant exists although `H ≪_d y` holds.
    pub fn interpolate(&self, h: PointSet, y: usize) -> Result<Option<PointSet>> {
        self.space.check_point(y)?;
        if !self.way_below_set(h, PointSet::singleton(y))? {
            return Err(Error::Precondition(alloc::format!(
                "{h:?} is not d-way-below {y}"
            )));
        }
        let ok_h = self.uparrow[h.bits() as usize];
        Ok(self
            .space
            .carrier()
            .subsets_by_size()
            .into_iter()
            .find(|&f| f.is_subset(ok_h) && self.uparrow[f.bits() as usize].contains(y)))
    }
}

/// Every open `U` and `x ∈ U` admit a finite `F` with `x ∈ (↑F)° ⊆ ↑F ⊆ U`.
pub fn is_locally_hypercompact(space: &FiniteSpace) -> bool {
    space.opens().iter().all(|&u| {
        u.iter().all(|x| {
            u.subsets().any(|f| {
                if f.is_empty() {
                    return false;
                }
                let upf = space.up_closure(f);
                upf.is_subset(u) && space.interior(upf).contains(x)
            })
        })
    })
}
