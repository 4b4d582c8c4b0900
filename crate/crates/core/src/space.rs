//! Finite T0 spaces and the convergence primitives they carry.
//!
//! A [`FiniteSpace`] is validated once and then immutable. Validation computes
//! the specialization order, enumerates every directed subset, and records the
//! limits of each one by evaluating the net-convergence definition against the
//! opens. Everything downstream reads those tables.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::order::SpecOrder;
use crate::set::{minimal_sets, PointSet};

/// Hard ceiling on carrier size; powerset sweeps stay tractable below it.
pub const MAX_CARRIER: usize = 24;

/// Default cap applied to user-supplied instances.
pub const DEFAULT_MAX_CARRIER: usize = 12;

#[derive(Clone, Debug)]
pub struct FiniteSpace {
    labels: Vec<String>,
    opens: Vec<PointSet>,
    order: SpecOrder,
    directed: Vec<PointSet>,
    limits: Vec<PointSet>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.opens == other.opens
    }
}

impl Eq for FiniteSpace {}

/// `"0"`, `"1"`, ...
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: labels.len(),
            limit: MAX_CARRIER,
        });
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn converges_in(up: &[PointSet], order: &SpecOrder, d: PointSet, x: usize) -> bool {
    // every open neighbourhood of x contains a tail {d in D : d0 <= d}; the
    // smallest one, up[x], is open and inside all the others
    d.iter().any(|d0| (d & order.up(d0)).is_subset(up[x]))
}

/// Names a pair of opens whose union or intersection is missing.
fn closure_witness(opens: &[PointSet]) -> Error {
    for (i, &a) in opens.iter().enumerate() {
        for &b in &opens[i + 1..] {
            if opens.binary_search(&(a | b)).is_err() {
                return Error::UnionNotOpen(a, b);
            }
            if opens.binary_search(&(a & b)).is_err() {
                return Error::IntersectionNotOpen(a, b);
            }
        }
    }
    unreachable!("called on a family that is not closed")
}

impl FiniteSpace {
    /// Validates an explicit topology.
    pub fn from_opens(labels: Vec<String>, opens: Vec<PointSet>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let carrier = PointSet::full(n);
        let mut opens = opens;
        opens.sort();
        opens.dedup();
        if let Some(&bad) = opens.iter().find(|u| !u.is_subset(carrier)) {
            return Err(Error::OpenOutOfRange(bad));
        }
        if opens.binary_search(&PointSet::EMPTY).is_err() {
            return Err(Error::MissingEmptyOpen);
        }
        if opens.binary_search(&carrier).is_err() {
            return Err(Error::MissingCarrierOpen);
        }
        let up: Vec<PointSet> = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|u| u.contains(x))
                    .fold(carrier, |acc, &u| acc & u)
            })
            .collect();
        // Every open is an upper set of the specialization preorder, and the
        // upper sets are exactly what ∅ generates under U ↦ U ∪ up[x]. So the
        // family is a topology iff it is closed under that step.
        let closed = opens
            .iter()
            .all(|&u| up.iter().all(|&v| opens.binary_search(&(u | v)).is_ok()));
        if !closed {
            return Err(closure_witness(&opens));
        }
        for x in 0..n {
            for y in up[x].without(x).iter() {
                if up[y].contains(x) {
                    return Err(Error::NotT0(x.min(y), x.max(y)));
                }
            }
        }
        let order = SpecOrder::from_up_sets(up.clone())?;
        debug_assert!(opens.iter().all(|&u| order.is_upper(u)));
        let directed = order.directed_subsets()?;
        let limits = directed
            .iter()
            .map(|&d| {
                (0..n)
                    .filter(|&x| converges_in(&up, &order, d, x))
                    .collect()
            })
            .collect();
        Ok(FiniteSpace {
            labels,
            opens,
            order,
            directed,
            limits,
        })
    }

    /// The Alexandroff topology of `order`: every upper set is open.
    pub fn from_order(labels: Vec<String>, order: SpecOrder) -> Result<Self> {
        check_labels(&labels)?;
        if labels.len() != order.len() {
            return Err(Error::LabelCount {
                labels: labels.len(),
                points: order.len(),
            });
        }
        let opens = order.upper_sets()?;
        FiniteSpace::from_opens(labels, opens)
    }

    /// Both presentations given: they must describe the same space.
    pub fn from_order_and_opens(
        labels: Vec<String>,
        order: SpecOrder,
        opens: Vec<PointSet>,
    ) -> Result<Self> {
        let space = FiniteSpace::from_opens(labels, opens)?;
        if space.order != order {
            let x = (0..order.len())
                .find(|&x| space.order.up(x) != order.up(x))
                .unwrap_or(0);
            return Err(Error::OrderOpensMismatch(order.up(x) ^ space.order.up(x)));
        }
        let upsets = order.upper_sets()?;
        if upsets != space.opens {
            let diff = upsets
                .iter()
                .find(|u| space.opens.binary_search(u).is_err())
                .or_else(|| {
                    space
                        .opens
                        .iter()
                        .find(|u| upsets.binary_search(u).is_err())
                })
                .copied()
                .unwrap_or(PointSet::EMPTY);
            return Err(Error::OrderOpensMismatch(diff));
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn carrier(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `{a, b}` rendered with labels.
    pub fn format_set(&self, set: PointSet) -> String {
        let names: Vec<&str> = set.iter().map(|x| self.label(x)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        self.is_open(set.complement(self.len()))
    }

    pub fn specialization_order(&self) -> &SpecOrder {
        &self.order
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.order.le(x, y)
    }

    pub fn up(&self, x: usize) -> PointSet {
        self.order.up(x)
    }

    pub fn down(&self, x: usize) -> PointSet {
        self.order.down(x)
    }

    pub fn up_closure(&self, set: PointSet) -> PointSet {
        self.order.up_closure(set)
    }

    pub fn down_closure(&self, set: PointSet) -> PointSet {
        self.order.down_closure(set)
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange(x))
        }
    }

    pub fn check_set(&self, set: PointSet) -> Result<()> {
        if set.is_subset(self.carrier()) {
            Ok(())
        } else {
            Err(Error::PointOutOfRange(
                (set - self.carrier()).first().unwrap_or(self.len()),
            ))
        }
    }

    /// Largest open subset of `set`.
    pub fn interior(&self, set: PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|u| u.is_subset(set))
            .fold(PointSet::EMPTY, |acc, &u| acc | u)
    }

    /// Smallest closed superset of `set`.
    pub fn closure(&self, set: PointSet) -> PointSet {
        let n = self.len();
        self.interior(set.complement(n)).complement(n)
    }

    /// Every directed subset of the carrier, sorted.
    pub fn directed_subsets(&self) -> &[PointSet] {
        &self.directed
    }

    /// Directed subsets zipped with the points each converges to.
    pub fn convergence_table(&self) -> impl Iterator<Item = (PointSet, PointSet)> + '_ {
        self.directed
            .iter()
            .copied()
            .zip(self.limits.iter().copied())
    }

    /// `{x : D → x}` for a directed subset `D`.
    pub fn limits(&self, d: PointSet) -> Result<PointSet> {
        match self.directed.binary_search(&d) {
            Ok(i) => Ok(self.limits[i]),
            Err(_) => Err(Error::NotDirected(d)),
        }
    }

    /// `D → x`, evaluated from the net definition against the opens.
    pub fn converges(&self, d: PointSet, x: usize) -> Result<bool> {
        self.check_point(x)?;
        self.check_set(d)?;
        if !self.order.is_directed(d) {
            return Err(Error::NotDirected(d));
        }
        Ok(converges_in(self.order.up_sets(), &self.order, d, x))
    }

    /// Per point, the inclusion-minimal directed sets converging to it. A set
    /// meets every superset of a set it meets, so these are the only
    /// convergences a directed-open test has to look at.
    fn minimal_convergences(&self) -> Vec<(usize, PointSet)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            let conv: Vec<PointSet> = self
                .convergence_table()
                .filter(|(_, lim)| lim.contains(x))
                .map(|(d, _)| d)
                .collect();
            out.extend(minimal_sets(&conv).into_iter().map(|d| (x, d)));
        }
        out
    }

    /// `U` is directed-open when every directed set converging into `U` meets `U`.
    pub fn is_directed_open(&self, u: PointSet) -> bool {
        self.convergence_table()
            .all(|(d, lim)| !lim.intersects(u) || d.intersects(u))
    }

    /// `d(X)`: every directed-open subset, sorted.
    pub fn directed_open_sets(&self) -> Vec<PointSet> {
        let conv = self.minimal_convergences();
        self.carrier()
            .subsets()
            .filter(|&u| conv.iter().all(|&(x, d)| !u.contains(x) || d.intersects(u)))
            .collect()
    }

    /// A directed-open set that is not open, if any.
    pub fn directed_open_not_open(&self) -> Option<PointSet> {
        self.directed_open_sets()
            .into_iter()
            .find(|&u| !self.is_open(u))
    }

    /// `d(X) = τ`.
    pub fn is_directed_space(&self) -> bool {
        self.directed_open_not_open().is_none()
    }

    /// Rejects non-directed spaces with a witness set.
    pub fn require_directed_space(&self) -> Result<()> {
        match self.directed_open_not_open() {
            None => Ok(()),
            Some(u) => Err(Error::NotDirectedSpace(u)),
        }
    }

    /// `𝓕 → x`: every open neighbourhood of `x` contains a member.
    pub fn family_converges(&self, fam: &FiniteFamily, x: usize) -> Result<bool> {
        self.check_point(x)?;
        self.family_converges_to_set(fam, PointSet::singleton(x))
    }

    /// `𝓕 ⇒ H`: every open superset of `H` contains a member.
    pub fn family_converges_to_set(&self, fam: &FiniteFamily, h: PointSet) -> Result<bool> {
        self.check_set(h)?;
        for &m in fam.members() {
            self.check_set(m)?;
        }
        if !fam.is_directed(&self.order) {
            return Err(Error::FamilyNotDirected);
        }
        Ok(self.absorbs(fam.members(), h))
    }

    /// Every open superset of `h` contains one of `members`; no directedness check.
    pub fn absorbs(&self, members: &[PointSet], h: PointSet) -> bool {
        self.opens
            .iter()
            .filter(|u| h.is_subset(**u))
            .all(|&u| members.iter().any(|m| m.is_subset(u)))
    }

    /// `ω(X)`, generated by the complements of principal filters.
    pub fn lower_topology(&self) -> Vec<PointSet> {
        let n = self.len();
        let subbase: Vec<PointSet> = (0..n).map(|x| self.up(x).complement(n)).collect();
        generate_topology(n, &subbase)
    }

    /// `λ(X)`, the join of `d(X)` and `ω(X)`.
    pub fn lawson_topology(&self) -> Vec<PointSet> {
        let n = self.len();
        let mut subbase = self.directed_open_sets();
        subbase.extend((0..n).map(|x| self.up(x).complement(n)));
        generate_topology(n, &subbase)
    }
}

/// The topology on `{0, .., n-1}` generated by `subbase`.
pub fn generate_topology(n: usize, subbase: &[PointSet]) -> Vec<PointSet> {
    let carrier = PointSet::full(n);
    let mut base: BTreeSet<PointSet> = subbase.iter().copied().collect();
    base.insert(carrier);
    close_under(&mut base, |a, b| a & b);
    base.insert(PointSet::EMPTY);
    close_under(&mut base, |a, b| a | b);
    base.into_iter().collect()
}

fn close_under(sets: &mut BTreeSet<PointSet>, op: impl Fn(PointSet, PointSet) -> PointSet) {
    let mut frontier: Vec<PointSet> = sets.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        let current: Vec<PointSet> = sets.iter().copied().collect();
        for b in current {
            let c = op(a, b);
            if sets.insert(c) {
                frontier.push(c);
            }
        }
    }
}

/// A finite collection of nonempty finite point sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFamily {
    members: Vec<PointSet>,
}

impl FiniteFamily {
    pub fn new(members: Vec<PointSet>) -> Result<Self> {
        if members.iter().any(|m| m.is_empty()) {
            return Err(Error::EmptyMember);
        }
        Ok(FiniteFamily { members })
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Nonempty, and any two members `F1, F2` admit a member `F ⊆ ↑F1 ∩ ↑F2`.
    pub fn is_directed(&self, order: &SpecOrder) -> bool {
        is_directed_family(&self.members, order)
    }
}

/// Directedness of a family of finite sets under `G ≤ H ⇔ H ⊆ ↑G`.
pub fn is_directed_family(members: &[PointSet], order: &SpecOrder) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut ups: Vec<PointSet> = members.iter().map(|&m| order.up_closure(m)).collect();
    ups.sort();
    ups.dedup();
    let n = order.len();
    if n <= 16 {
        // has_below[w]: some member is contained in w
        let mut has_below = alloc::vec![false; 1usize << n];
        for &m in members {
            has_below[m.bits() as usize] = true;
        }
        for bit in 0..n {
            for w in 0..(1usize << n) {
                if w >> bit & 1 == 1 && has_below[w ^ (1 << bit)] {
                    has_below[w] = true;
                }
            }
        }
        ups.iter()
            .all(|&a| ups.iter().all(|&b| has_below[(a & b).bits() as usize]))
    } else {
        ups.iter().all(|&a| {
            ups.iter()
                .all(|&b| members.iter().any(|m| m.is_subset(a & b)))
        })
    }
}
