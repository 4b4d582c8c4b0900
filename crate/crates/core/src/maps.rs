//! Maps between finite spaces and the continuity notions on them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::FinUpsets;
use crate::set::PointSet;
use crate::space::FiniteSpace;

/// Ceiling on the number of candidate maps any enumeration may visit.
pub const MAP_BUDGET: u128 = 10_000_000;

/// A total function `{0..n} → {0..m}` stored as its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointMap {
    table: Vec<usize>,
    target_len: usize,
}

impl PointMap {
    pub fn new(table: Vec<usize>, target_len: usize) -> Result<Self> {
        if let Some((point, &value)) = table.iter().enumerate().find(|(_, &v)| v >= target_len) {
            return Err(Error::MapValueOutOfRange { point, value });
        }
        Ok(PointMap { table, target_len })
    }

    /// Checks arity against concrete spaces as well.
    pub fn between(table: Vec<usize>, source: &FiniteSpace, target: &FiniteSpace) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::MapArity {
                got: table.len(),
                expected: source.len(),
            });
        }
        PointMap::new(table, target.len())
    }

    pub fn identity(n: usize) -> Self {
        PointMap {
            table: (0..n).collect(),
            target_len: n,
        }
    }

    pub fn constant(n: usize, value: usize, target_len: usize) -> Self {
        assert!(value < target_len);
        PointMap {
            table: alloc::vec![value; n],
            target_len,
        }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn source_len(&self) -> usize {
        self.table.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, set: PointSet) -> PointSet {
        set.map(|x| self.table[x])
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        (0..self.table.len())
            .filter(|&x| set.contains(self.table[x]))
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PointMap) -> Result<PointMap> {
        if inner.target_len != self.table.len() {
            return Err(Error::MapArity {
                got: inner.target_len,
                expected: self.table.len(),
            });
        }
        Ok(PointMap {
            table: inner.table.iter().map(|&y| self.table[y]).collect(),
            target_len: self.target_len,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.target_len == self.table.len() && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_idempotent(&self) -> bool {
        self.target_len == self.table.len() && self.table.iter().all(|&y| self.table[y] == y)
    }

    pub fn is_injective(&self) -> bool {
        let img = self.image(PointSet::full(self.table.len()));
        img.len() == self.table.len()
    }
}

fn check_shapes(f: &PointMap, source: &FiniteSpace, target: &FiniteSpace) -> Result<()> {
    if f.source_len() != source.len() {
        return Err(Error::MapArity {
            got: f.source_len(),
            expected: source.len(),
        });
    }
    if f.target_len() != target.len() {
        return Err(Error::MapArity {
            got: f.target_len(),
            expected: target.len(),
        });
    }
    Ok(())
}

/// `x ≤ y ⇒ f(x) ≤ f(y)`.
pub fn is_monotone(source: &FiniteSpace, target: &FiniteSpace, f: &PointMap) -> bool {
    check_shapes(f, source, target).is_ok()
        && source
            .specialization_order()
            .pairs()
            .into_iter()
            .all(|(x, y)| target.le(f.apply(x), f.apply(y)))
}

/// Preimages of opens are open.
pub fn is_continuous(source: &FiniteSpace, target: &FiniteSpace, f: &PointMap) -> bool {
    check_shapes(f, source, target).is_ok()
        && target
            .opens()
            .iter()
            .all(|&u| source.is_open(f.preimage(u)))
}

/// Monotone, and every `D → x` is carried to `f(D) → f(x)`.
pub fn is_directed_continuous(source: &FiniteSpace, target: &FiniteSpace, f: &PointMap) -> bool {
    if !is_monotone(source, target, f) {
        return false;
    }
    source.convergence_table().all(|(d, lim)| {
        let fd = f.image(d);
        lim.iter()
            .all(|x| target.converges(fd, f.apply(x)).unwrap_or(false))
    })
}

/// `H ⊆ ↑G ⇒ f(H) ⊆ ↑f(G)` over all nonempty `G, H`.
fn preserves_finite_order(source: &FiniteSpace, target: &FiniteSpace, f: &PointMap) -> bool {
    let sets: Vec<PointSet> = source
        .carrier()
        .subsets()
        .filter(|s| !s.is_empty())
        .collect();
    sets.iter().all(|&g| {
        let upg = source.up_closure(g);
        let up_fg = target.up_closure(f.image(g));
        sets.iter()
            .filter(|h| h.is_subset(upg))
            .all(|&h| f.image(h).is_subset(up_fg))
    })
}

/// Image family convergence for one directed family given by its members.
fn preserves_family(
    source: &FiniteSpace,
    target: &FiniteSpace,
    f: &PointMap,
    members: &[PointSet],
) -> bool {
    let images: Vec<PointSet> = members.iter().map(|&m| f.image(m)).collect();
    source
        .carrier()
        .subsets()
        .filter(|h| !h.is_empty())
        .filter(|&h| source.absorbs(members, h))
        .all(|h| target.absorbs(&images, f.image(h)))
}

/// Quasicontinuity of a map, with the family condition checked on single-member
/// families `{F}`.
///
/// A finite directed family has a member `F*` below which every other member's
/// up-closure lies. Both `𝓕 ⇒ H` and, for maps satisfying the first condition,
/// `f(𝓕) ⇒ f(H)` hold exactly when they hold for `{F*}`. So this is equivalent
/// to [`is_quasicontinuous_map_exhaustive`].
pub fn is_quasicontinuous_map(source: &FiniteSpace, target: &FiniteSpace, f: &PointMap) -> bool {
    check_shapes(f, source, target).is_ok()
        && preserves_finite_order(source, target, f)
        && source
            .carrier()
            .subsets()
            .filter(|s| !s.is_empty())
            .all(|g| preserves_family(source, target, f, &[g]))
}

/// Quasicontinuity with families ranging over every directed family of
/// `Q_fin(source)`. Fails when that universe is too large to enumerate.
pub fn is_quasicontinuous_map_exhaustive(
    source: &FiniteSpace,
    target: &FiniteSpace,
    f: &PointMap,
) -> Result<bool> {
    check_shapes(f, source, target)?;
    if !preserves_finite_order(source, target, f) {
        return Ok(false);
    }
    let q = FinUpsets::new(source.specialization_order())?;
    for fam in q.directed_families()? {
        if !preserves_family(source, target, f, &q.members(fam)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Idempotent and quasicontinuous.
pub fn is_projection(space: &FiniteSpace, f: &PointMap) -> bool {
    f.is_idempotent() && is_quasicontinuous_map(space, space, f)
}

/// `|target|^|source|`, refused above [`MAP_BUDGET`].
pub fn map_count(source_len: usize, target_len: usize) -> Result<u128> {
    let mut count: u128 = 1;
    for _ in 0..source_len {
        count = count.saturating_mul(target_len as u128);
        if count > MAP_BUDGET {
            return Err(Error::TooLarge {
                what: "map enumeration",
                size: count,
                limit: MAP_BUDGET,
            });
        }
    }
    Ok(count)
}

/// Every continuous map, in lexicographic order of tables.
///
/// Candidates are built point by point and cut as soon as monotonicity fails,
/// since continuous maps are monotone; survivors are tested on preimages.
pub fn continuous_maps(source: &FiniteSpace, target: &FiniteSpace) -> Result<Vec<PointMap>> {
    map_count(source.len(), target.len())?;
    let mut out = Vec::new();
    let mut table = Vec::with_capacity(source.len());
    extend_monotone(source, target, &mut table, &mut |t| {
        let f = PointMap {
            table: t.to_vec(),
            target_len: target.len(),
        };
        if is_continuous(source, target, &f) {
            out.push(f);
        }
    });
    Ok(out)
}

fn extend_monotone(
    source: &FiniteSpace,
    target: &FiniteSpace,
    table: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let i = table.len();
    if i == source.len() {
        emit(table);
        return;
    }
    for v in 0..target.len() {
        let ok = (0..i).all(|j| {
            (!source.le(j, i) || target.le(table[j], v))
                && (!source.le(i, j) || target.le(v, table[j]))
        });
        if ok {
            table.push(v);
            extend_monotone(source, target, table, emit);
            table.pop();
        }
    }
}

/// Continuous `f: X → Y`, `g: Y → X` with `f ∘ g = 1_Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractPair {
    pub f: PointMap,
    pub g: PointMap,
}

pub fn validate_retract(x: &FiniteSpace, y: &FiniteSpace, pair: &RetractPair) -> Result<()> {
    check_shapes(&pair.f, x, y)?;
    check_shapes(&pair.g, y, x)?;
    if !is_continuous(x, y, &pair.f) {
        return Err(Error::Precondition("retraction f is not continuous".into()));
    }
    if !is_continuous(y, x, &pair.g) {
        return Err(Error::Precondition("section g is not continuous".into()));
    }
    if !pair.f.compose(&pair.g)?.is_identity() {
        return Err(Error::Precondition("f ∘ g is not the identity".into()));
    }
    Ok(())
}

/// Every retract pair, ordered by `g` then `f`.
pub fn find_retractions(x: &FiniteSpace, y: &FiniteSpace) -> Result<Vec<RetractPair>> {
    map_count(x.len(), y.len())?;
    let sections: Vec<PointMap> = continuous_maps(y, x)?
        .into_iter()
        .filter(|g| g.is_injective())
        .collect();
    let retractions = continuous_maps(x, y)?;
    let mut out = Vec::new();
    for g in &sections {
        for f in &retractions {
            if (0..y.len()).all(|p| f.apply(g.apply(p)) == p) {
                out.push(RetractPair {
                    f: f.clone(),
                    g: g.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn swap() -> PointMap {
        PointMap::new(alloc::vec![1, 0], 2).unwrap()
    }

    #[test]
    fn sierpinski_swap() {
        let s = catalogue::sierpinski();
        assert!(!is_monotone(&s, &s, &swap()));
        assert!(!is_continuous(&s, &s, &swap()));
        assert!(!is_directed_continuous(&s, &s, &swap()));
        assert!(!is_projection(&s, &swap()));
        let id = PointMap::identity(2);
        assert!(is_monotone(&s, &s, &id));
        assert!(is_continuous(&s, &s, &id));
        assert!(is_directed_continuous(&s, &s, &id));
        assert!(is_quasicontinuous_map(&s, &s, &id));
        assert!(is_projection(&s, &id));
    }

    #[test]
    fn constant_maps() {
        let c = catalogue::chain(3);
        let bottom = PointMap::constant(3, 0, 3);
        assert!(is_monotone(&c, &c, &bottom));
        assert!(is_projection(&c, &bottom));
    }

    #[test]
    fn chain_onto_sierpinski_retracts() {
        let c = catalogue::chain(3);
        let s = catalogue::sierpinski();
        let pairs = find_retractions(&c, &s).unwrap();
        assert!(!pairs.is_empty());
        let embed = PointMap::new(alloc::vec![0, 2], 3).unwrap();
        assert!(pairs.iter().any(|p| p.g == embed));
        for p in &pairs {
            validate_retract(&c, &s, p).unwrap();
            assert!(p.g.is_injective());
        }
    }

    #[test]
    fn antichain_is_not_a_retract_onto_chain() {
        let a = catalogue::antichain(2);
        let c = catalogue::chain(2);
        assert!(find_retractions(&a, &c).unwrap().is_empty());
    }

    #[test]
    fn identity_retract() {
        let v = catalogue::vee();
        let pairs = find_retractions(&v, &v).unwrap();
        assert!(pairs.contains(&RetractPair {
            f: PointMap::identity(3),
            g: PointMap::identity(3)
        }));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(map_count(12, 12).is_err());
        assert_eq!(map_count(3, 4).unwrap(), 64);
    }

    #[test]
    fn single_member_reduction_matches_exhaustive() {
        for s in [catalogue::vee(), catalogue::wedge(), catalogue::chain(3)] {
            let maps: Vec<PointMap> = (0..27)
                .map(|k| PointMap::new(alloc::vec![k % 3, k / 3 % 3, k / 9], 3).unwrap())
                .collect();
            for f in &maps {
                assert_eq!(
                    is_quasicontinuous_map(&s, &s, f),
                    is_quasicontinuous_map_exhaustive(&s, &s, f).unwrap()
                );
            }
        }
    }
}
