//! The finite upper powerspace `Q_fin(X)` with its convergence-open topology.
//!
//! `𝓕 ⇒_Q ↑H` asks for directed sets `D₁..Dₙ` of the base, each converging to
//! a point of `H`, whose limits cover `H`, such that every selection
//! `(d₁..dₙ) ∈ ∏Dᵢ` has a member `↑F ⊆ ⋃↑dᵢ`.
//!
//! Adding a directed set to a tuple keeps every old selection's union inside a
//! new one, so the tuple of *all* admissible directed sets is the strongest
//! candidate, and one tuple decides convergence. Repeating a set never helps
//! for the same reason. A `≤_Q`-directed family meets a union exactly when its
//! greatest member (smallest upper set) does, so each target `↑H` has a
//! threshold set `M(H)`, the intersection of all selection unions, and
//! `𝓕 ⇒_Q ↑H` iff some member lies inside `M(H)`.

use alloc::vec::Vec;

use crate::construct::{product_convergence, tensor_product};
use crate::error::{Error, Result};
use crate::family::FinUpsets;
use crate::maps::{is_continuous, PointMap};
use crate::qfs::{MapFamily, SelfMap};
use crate::set::{minimal_sets, PointSet};
use crate::space::{generate_topology, FiniteSpace};

/// Largest `|Q_fin(X)|` whose powerset is filtered for open sets.
pub const POWER_LIMIT: usize = 20;

/// How condition 2 of `⇒_Q` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    /// Every point of `H` is a limit of at least one `Dᵢ`.
    SomeLimit,
    /// Every `Dᵢ` converges to every point of `H`.
    EveryLimit,
}

/// Directed sets `D₁..Dₙ` offered as evidence for `𝓕 ⇒_Q ↑H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QConvergenceWitness {
    /// Element indices of the family.
    pub family: PointSet,
    pub target: usize,
    pub tuple: Vec<PointSet>,
}

#[derive(Clone, Debug)]
pub struct PowerSpace {
    base: FiniteSpace,
    elements: FinUpsets,
    reading: Reading,
    /// Per target, the admissible tuple (empty when condition 2 cannot be met).
    tuples: Vec<Vec<PointSet>>,
    /// Per target, `M(H)`; `None` when no tuple is admissible.
    thresholds: Vec<Option<PointSet>>,
    space: FiniteSpace,
}

/// Distinct unions `⋃↑dᵢ` over all selections, pruned to the inclusion-minimal ones.
fn selection_unions(base: &FiniteSpace, tuple: &[PointSet]) -> Vec<PointSet> {
    let mut unions = alloc::vec![PointSet::EMPTY];
    for &d in tuple {
        let next: Vec<PointSet> = unions
            .iter()
            .flat_map(|&w| d.iter().map(move |x| w | base.up(x)))
            .collect();
        unions = minimal_sets(&next);
    }
    unions
}

fn admissible_tuple(base: &FiniteSpace, h: PointSet, reading: Reading) -> Vec<PointSet> {
    base.convergence_table()
        .filter(|&(_, lim)| match reading {
            Reading::SomeLimit => lim.intersects(h),
            Reading::EveryLimit => h.is_subset(lim),
        })
        .map(|(d, _)| d)
        .collect()
}

fn covers_target(base: &FiniteSpace, tuple: &[PointSet], h: PointSet) -> bool {
    let limits = tuple.iter().fold(PointSet::EMPTY, |acc, &d| {
        acc | base.limits(d).unwrap_or(PointSet::EMPTY)
    });
    !tuple.is_empty() && h.is_subset(limits)
}

impl PowerSpace {
    /// Builds `Q_fin(X)` and `𝒪_⇒Q` for a directed base.
    pub fn build(base: &FiniteSpace, reading: Reading) -> Result<Self> {
        base.require_directed_space()?;
        let elements = FinUpsets::new(base.specialization_order())?;
        let q = elements.len();
        if q > POWER_LIMIT {
            return Err(Error::TooLarge {
                what: "powerspace elements",
                size: q as u128,
                limit: POWER_LIMIT as u128,
            });
        }
        let mut tuples = Vec::with_capacity(q);
        let mut thresholds = Vec::with_capacity(q);
        for e in 0..q {
            let h = elements.generator(e);
            let tuple = admissible_tuple(base, h, reading);
            if covers_target(base, &tuple, h) {
                let m = selection_unions(base, &tuple)
                    .into_iter()
                    .fold(base.carrier(), |acc, w| acc & w);
                thresholds.push(Some(m));
                tuples.push(tuple);
            } else {
                thresholds.push(None);
                tuples.push(Vec::new());
            }
        }
        // e ∈ 𝒰 forces every t with {t} ⇒_Q e into 𝒰; singleton families are
        // the minimal converging ones, so these constraints are exact
        let forced: Vec<PointSet> = thresholds
            .iter()
            .map(|m| m.map_or(PointSet::EMPTY, |m| elements.contained_in(m)))
            .collect();
        let opens: Vec<PointSet> = PointSet::full(q)
            .subsets()
            .filter(|&u| u.iter().all(|e| forced[e].is_subset(u)))
            .collect();
        let labels = (0..q)
            .map(|e| base.format_set(elements.generator(e)))
            .collect();
        let space = FiniteSpace::from_opens(labels, opens)?;
        Ok(PowerSpace {
            base: base.clone(),
            elements,
            reading,
            tuples,
            thresholds,
            space,
        })
    }

    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    pub fn elements(&self) -> &FinUpsets {
        &self.elements
    }

    pub fn reading(&self) -> Reading {
        self.reading
    }

    /// `Q_fin(X)` with `𝒪_⇒Q`.
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_family(&self, family: PointSet) -> Result<()> {
        self.space.check_set(family)?;
        if !self.elements.order().is_directed(family) {
            return Err(Error::FamilyNotDirected);
        }
        Ok(())
    }

    /// `𝓕 ⇒_Q ↑H` for a `≤_Q`-directed family of element indices.
    pub fn q_converges(&self, family: PointSet, target: usize) -> Result<bool> {
        Ok(self.find_q_convergence(family, target)?.is_some())
    }

    /// The deciding tuple when `𝓕 ⇒_Q ↑H` holds.
    pub fn find_q_convergence(
        &self,
        family: PointSet,
        target: usize,
    ) -> Result<Option<QConvergenceWitness>> {
        self.check_family(family)?;
        self.space.check_point(target)?;
        let Some(m) = self.thresholds[target] else {
            return Ok(None);
        };
        let hit = family.iter().any(|f| self.elements.upset(f).is_subset(m));
        Ok(hit.then(|| QConvergenceWitness {
            family,
            target,
            tuple: self.tuples[target].clone(),
        }))
    }

    /// Re-checks all three conditions for the given tuple.
    pub fn check_witness(&self, w: &QConvergenceWitness) -> Result<bool> {
        self.check_family(w.family)?;
        self.space.check_point(w.target)?;
        let h = self.elements.generator(w.target);
        for &d in &w.tuple {
            let lim = self.base.limits(d)?;
            let ok = match self.reading {
                Reading::SomeLimit => lim.intersects(h),
                Reading::EveryLimit => h.is_subset(lim),
            };
            if !ok {
                return Ok(false);
            }
        }
        if !covers_target(&self.base, &w.tuple, h) {
            return Ok(false);
        }
        Ok(selection_unions(&self.base, &w.tuple)
            .into_iter()
            .all(|u| w.family.iter().any(|f| self.elements.upset(f).is_subset(u))))
    }

    /// Elements `T` with `{T} ⇒_Q target`.
    pub fn converging_singletons(&self, target: usize) -> PointSet {
        self.thresholds[target].map_or(PointSet::EMPTY, |m| self.elements.contained_in(m))
    }

    /// `𝒪_⇒Q` recomputed by quantifying over every directed family.
    pub fn convergence_opens_exhaustive(&self) -> Result<Vec<PointSet>> {
        let families = self.elements.directed_families()?;
        let mut pairs = Vec::new();
        for &fam in &families {
            for e in 0..self.len() {
                if self.q_converges(fam, e)? {
                    pairs.push((fam, e));
                }
            }
        }
        Ok(PointSet::full(self.len())
            .subsets()
            .filter(|&u| {
                pairs
                    .iter()
                    .all(|&(f, e)| !u.contains(e) || f.intersects(u))
            })
            .collect())
    }

    /// Upper Vietoris topology: generated by `□U = {↑F : ↑F ⊆ U}` for open `U`.
    pub fn upper_vietoris(&self) -> Vec<PointSet> {
        let boxes: Vec<PointSet> = self
            .base
            .opens()
            .iter()
            .map(|&u| self.elements.contained_in(u))
            .collect();
        generate_topology(self.len(), &boxes)
    }

    /// `↑G ≪_Q ↑H`: every family converging to `↑H` has a member inside `↑G`.
    pub fn way_below_q(&self, a: usize, b: usize) -> Result<bool> {
        self.space.check_point(a)?;
        self.space.check_point(b)?;
        let ga = self.elements.upset(a);
        Ok(self
            .converging_singletons(b)
            .iter()
            .all(|t| self.elements.upset(t).is_subset(ga)))
    }

    /// [`way_below_q`](Self::way_below_q) over every directed family.
    pub fn way_below_q_exhaustive(&self, a: usize, b: usize) -> Result<bool> {
        let ga = self.elements.upset(a);
        for fam in self.elements.directed_families()? {
            if self.q_converges(fam, b)?
                && !fam.iter().any(|f| self.elements.upset(f).is_subset(ga))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Right-hand side of the continuous-base characterization: every
    /// directed-open `U ⊇ H` contains a member.
    pub fn absorbed_by_directed_opens(&self, family: PointSet, target: usize) -> bool {
        let h = self.elements.generator(target);
        self.base
            .directed_open_sets()
            .into_iter()
            .filter(|u| h.is_subset(*u))
            .all(|u| family.iter().any(|f| self.elements.upset(f).is_subset(u)))
    }

    /// `∪` as a map on element indices of `Q × Q` (pair `(a, b)` at `a·|Q| + b`).
    pub fn union_map(&self) -> PointMap {
        let q = self.len();
        let table = (0..q * q)
            .map(|p| self.elements.union(p / q, p % q))
            .collect();
        PointMap::new(table, q).expect("unions are elements")
    }

    /// Semilattice laws and continuity of `∪`.
    pub fn semilattice_report(&self) -> Result<SemilatticeReport> {
        let q = self.len();
        let u = |a, b| self.elements.union(a, b);
        let idempotent = (0..q).all(|a| u(a, a) == a);
        let commutative = (0..q).all(|a| (0..q).all(|b| u(a, b) == u(b, a)));
        let associative =
            (0..q).all(|a| (0..q).all(|b| (0..q).all(|c| u(u(a, b), c) == u(a, u(b, c)))));
        let deflationary = (0..q).all(|a| (0..q).all(|b| self.elements.le_q(u(a, b), a)));
        let union = self.union_map();
        let space = &self.space;
        let to = |d: usize, p: usize| space.converges(PointSet::singleton(d), p).unwrap_or(false);
        // A finite directed set in Q ⊗ Q converges exactly where its greatest
        // pair does, so singletons decide directed continuity.
        let continuous = (0..q).all(|c| {
            (0..q).all(|d| {
                let top = u(c, d);
                (0..q).all(|a| (0..q).all(|b| !(to(c, a) && to(d, b)) || to(top, u(a, b))))
            })
        });
        let every_directed_set = if q * q <= 64 {
            match product_convergence(space, space) {
                Ok(conv) => Some(conv.iter().all(|&(d, lim)| {
                    let image = union.image(d);
                    lim.iter()
                        .all(|p| space.converges(image, union.apply(p)).unwrap_or(false))
                })),
                Err(Error::TooLarge { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let tensor_continuous = if q * q <= crate::construct::TENSOR_LIMIT {
            let t = tensor_product(&self.space, &self.space)?;
            Some(is_continuous(t.space(), &self.space, &union))
        } else {
            None
        };
        Ok(SemilatticeReport {
            associative,
            commutative,
            idempotent,
            deflationary,
            continuous,
            every_directed_set,
            tensor_continuous,
        })
    }

    /// The single-valued maps `ε(↑F) = ↑⋃_{x∈F} δ(x)` with separating sets
    /// `{↑⋃_{x∈G} δ(x) : ∅ ≠ G ⊆ F_δ}`. Needs a d-continuous base.
    pub fn fs_witness(&self, family: &MapFamily) -> Result<Vec<SelfMap>> {
        if !crate::approx::Approximation::new(&self.base)?.is_d_continuous() {
            return Err(Error::Precondition("base space is not d-continuous".into()));
        }
        let family = family.resolve(&self.base).map_err(|(i, v)| {
            Error::WitnessRejected(alloc::format!("member {i} fails on the base: {v:?}"))
        })?;
        let index = |set: PointSet| {
            self.elements
                .index_of(self.base.up_closure(set))
                .expect("nonempty upper set")
        };
        family
            .members
            .iter()
            .map(|d| {
                let table = (0..self.len())
                    .map(|e| index(d.image_union(self.elements.generator(e))))
                    .collect();
                let separating = d
                    .separating_set()
                    .expect("resolved")
                    .subsets()
                    .filter(|g| !g.is_empty())
                    .map(|g| index(d.image_union(g)))
                    .collect();
                Ok(SelfMap {
                    map: PointMap::new(table, self.len())?,
                    separating: Some(separating),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilatticeReport {
    pub associative: bool,
    pub commutative: bool,
    pub idempotent: bool,
    /// `A ∪ B ≤_Q A`.
    pub deflationary: bool,
    /// Directed continuity of `∪` on `Q ⊗ Q`, decided on singletons.
    pub continuous: bool,
    /// The same over every directed subset of `Q ⊗ Q`; `None` when too many.
    pub every_directed_set: Option<bool>,
    /// Continuity against the computed tensor topology; `None` when too large.
    pub tensor_continuous: Option<bool>,
}

impl SemilatticeReport {
    pub fn passed(&self) -> bool {
        self.associative
            && self.commutative
            && self.idempotent
            && self.deflationary
            && self.continuous
            && self.every_directed_set != Some(false)
            && self.tensor_continuous != Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::qfs::check_fs_family;

    fn ps(items: &[usize]) -> PointSet {
        items.iter().copied().collect()
    }

    #[test]
    fn chain_powerspace_is_a_chain() {
        let p = PowerSpace::build(&catalogue::chain(2), Reading::SomeLimit).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.elements().le_q(0, 1));
        assert_eq!(p.space().opens(), catalogue::chain(2).opens());
    }

    #[test]
    fn antichain_powerspace() {
        let p = PowerSpace::build(&catalogue::antichain(2), Reading::SomeLimit).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.elements().le_q(2, 0) && p.elements().le_q(2, 1));
        assert!(p.way_below_q(2, 0).unwrap());
        assert_eq!(p.elements().union(0, 1), 2);
    }

    #[test]
    fn one_point_base() {
        let p = PowerSpace::build(&catalogue::one_point(), Reading::SomeLimit).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn constant_family_converges() {
        let p = PowerSpace::build(&catalogue::vee(), Reading::SomeLimit).unwrap();
        for e in 0..p.len() {
            let w = p
                .find_q_convergence(PointSet::singleton(e), e)
                .unwrap()
                .unwrap();
            assert!(p.check_witness(&w).unwrap());
        }
    }

    #[test]
    fn threshold_matches_closed_form() {
        // z lies in every selection union iff it is an upper bound of some Dᵢ
        for base in [catalogue::chain(3), catalogue::vee(), catalogue::wedge()] {
            let p = PowerSpace::build(&base, Reading::SomeLimit).unwrap();
            for e in 0..p.len() {
                if let Some(m) = p.thresholds[e] {
                    let closed = p.tuples[e].iter().fold(PointSet::EMPTY, |acc, &d| {
                        acc | d.iter().fold(base.carrier(), |b, x| b & base.up(x))
                    });
                    assert_eq!(m, closed);
                }
            }
        }
    }

    #[test]
    fn boxes_on_sierpinski() {
        let s = catalogue::sierpinski();
        let p = PowerSpace::build(&s, Reading::SomeLimit).unwrap();
        let idx = p.elements().index_of(ps(&[1])).unwrap();
        assert_eq!(
            p.elements().contained_in(ps(&[1])),
            PointSet::singleton(idx)
        );
        assert_eq!(p.elements().contained_in(PointSet::EMPTY), PointSet::EMPTY);
        assert_eq!(p.upper_vietoris(), p.space().opens().to_vec());
    }

    #[test]
    fn exhaustive_opens_agree() {
        for base in [
            catalogue::antichain(2),
            catalogue::vee(),
            catalogue::chain(3),
        ] {
            let p = PowerSpace::build(&base, Reading::SomeLimit).unwrap();
            assert_eq!(
                p.convergence_opens_exhaustive().unwrap(),
                p.space().opens().to_vec()
            );
        }
    }

    #[test]
    fn semilattice_on_antichain() {
        let p = PowerSpace::build(&catalogue::antichain(2), Reading::SomeLimit).unwrap();
        let r = p.semilattice_report().unwrap();
        assert!(r.passed());
        assert_eq!(r.every_directed_set, Some(true));
        assert_eq!(r.tensor_continuous, Some(true));
    }

    #[test]
    fn union_is_continuous_beyond_full_enumeration() {
        let p = PowerSpace::build(&catalogue::antichain(4), Reading::SomeLimit).unwrap();
        let r = p.semilattice_report().unwrap();
        assert!(r.continuous && r.passed());
        assert_eq!(r.tensor_continuous, None);
    }

    #[test]
    fn identity_lifts_to_identity() {
        let base = catalogue::chain(2);
        let p = PowerSpace::build(&base, Reading::SomeLimit).unwrap();
        let eps = p.fs_witness(&MapFamily::identity(2)).unwrap();
        assert!(eps[0].map.is_identity());
        assert!(check_fs_family(p.space(), &eps).unwrap().passed());
    }

    #[test]
    fn non_directed_family_is_rejected() {
        let p = PowerSpace::build(&catalogue::antichain(2), Reading::SomeLimit).unwrap();
        assert_eq!(p.q_converges(ps(&[0, 1]), 0), Err(Error::FamilyNotDirected));
    }
}
