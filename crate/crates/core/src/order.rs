//! Finite partial orders stored as principal up- and down-sets.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::set::{PointSet, MAX_POINTS};

/// Upper bound on the number of directed subsets any enumeration will produce.
pub const DIRECTED_LIMIT: usize = 1 << 20;

/// A partial order on `{0, .., n-1}`; `up[x]` is `↑x` and `down[x]` is `↓x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecOrder {
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl SpecOrder {
    /// Builds the order from its principal up-sets, checking reflexivity,
    /// transitivity and antisymmetry.
    pub fn from_up_sets(up: Vec<PointSet>) -> Result<Self> {
        let n = up.len();
        if n > MAX_POINTS {
            return Err(Error::CarrierTooLarge {
                size: n,
                limit: MAX_POINTS,
            });
        }
        let carrier = PointSet::full(n);
        for (x, &u) in up.iter().enumerate() {
            if !u.is_subset(carrier) {
                return Err(Error::OpenOutOfRange(u));
            }
            if !u.contains(x) {
                return Err(Error::Precondition(alloc::format!(
                    "relation is not reflexive at {x}"
                )));
            }
            for y in u.iter() {
                if !up[y].is_subset(u) {
                    return Err(Error::Precondition(alloc::format!(
                        "relation is not transitive at {x} <= {y}"
                    )));
                }
                if y != x && up[y].contains(x) {
                    return Err(Error::NotAntisymmetric(x, y));
                }
            }
        }
        let mut down = alloc::vec![PointSet::EMPTY; n];
        for (x, &u) in up.iter().enumerate() {
            for y in u.iter() {
                down[y].insert(x);
            }
        }
        Ok(SpecOrder { up, down })
    }

    /// Reflexive-transitive closure of `pairs`, where `(a, b)` means `a <= b`.
    pub fn from_relation(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::CarrierTooLarge {
                size: n,
                limit: MAX_POINTS,
            });
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (a, b) in pairs {
            if a >= n {
                return Err(Error::PointOutOfRange(a));
            }
            if b >= n {
                return Err(Error::PointOutOfRange(b));
            }
            up[a].insert(b);
        }
        // Warshall on bit rows
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    let row = up[k];
                    up[i] |= row;
                }
            }
        }
        SpecOrder::from_up_sets(up)
    }

    /// The discrete order on `n` points.
    pub fn antichain(n: usize) -> Self {
        SpecOrder::from_relation(n, core::iter::empty()).expect("discrete order")
    }

    /// `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        SpecOrder::from_relation(n, (1..n).map(|i| (i - 1, i))).expect("chain order")
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn carrier(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up(&self, x: usize) -> PointSet {
        self.up[x]
    }

    pub fn down(&self, x: usize) -> PointSet {
        self.down[x]
    }

    pub fn up_sets(&self) -> &[PointSet] {
        &self.up
    }

    pub fn up_closure(&self, set: PointSet) -> PointSet {
        set.iter().fold(PointSet::EMPTY, |acc, x| acc | self.up[x])
    }

    pub fn down_closure(&self, set: PointSet) -> PointSet {
        set.iter()
            .fold(PointSet::EMPTY, |acc, x| acc | self.down[x])
    }

    pub fn is_upper(&self, set: PointSet) -> bool {
        self.up_closure(set) == set
    }

    pub fn is_lower(&self, set: PointSet) -> bool {
        self.down_closure(set) == set
    }

    pub fn minimal(&self, set: PointSet) -> PointSet {
        set.iter()
            .filter(|&x| (self.down[x] & set) == PointSet::singleton(x))
            .collect()
    }

    pub fn maximal(&self, set: PointSet) -> PointSet {
        set.iter()
            .filter(|&x| (self.up[x] & set) == PointSet::singleton(x))
            .collect()
    }

    /// Nonempty, and every two members have an upper bound inside the set.
    pub fn is_directed(&self, set: PointSet) -> bool {
        if set.is_empty() {
            return false;
        }
        set.iter().all(|a| {
            set.iter()
                .all(|b| (self.up[a] & self.up[b]).intersects(set))
        })
    }

    /// A member of `set` lying above every other member, if there is one.
    pub fn greatest_in(&self, set: PointSet) -> Option<usize> {
        set.iter().find(|&t| set.is_subset(self.down[t]))
    }

    /// Every directed subset, sorted by bit pattern.
    ///
    /// Candidates are generated as `{t} ∪ S` with `S ⊆ ↓t`, which reaches every
    /// finite directed set through its greatest element; each candidate is then
    /// re-checked against the pairwise definition.
    pub fn directed_subsets(&self) -> Result<Vec<PointSet>> {
        let total: u128 = (0..self.len())
            .map(|t| 1u128 << (self.down[t].len() - 1))
            .sum();
        if total > DIRECTED_LIMIT as u128 {
            return Err(Error::TooLarge {
                what: "directed subset enumeration",
                size: total,
                limit: DIRECTED_LIMIT as u128,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        for t in 0..self.len() {
            let below = self.down[t].without(t);
            for s in below.subsets() {
                let d = s.with(t);
                debug_assert!(self.is_directed(d));
                out.push(d);
            }
        }
        out.sort();
        Ok(out)
    }

    /// All upper sets, by filtering the powerset.
    pub fn upper_sets(&self) -> Result<Vec<PointSet>> {
        let n = self.len();
        if n > 24 {
            return Err(Error::TooLarge {
                what: "upper set enumeration",
                size: 1u128 << n,
                limit: 1 << 24,
            });
        }
        Ok(self
            .carrier()
            .subsets()
            .filter(|&s| self.is_upper(s))
            .collect())
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].without(a).iter() {
                let between = self.up[a] & self.down[b];
                if between.len() == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All pairs `(a, b)` with `a <= b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.up[a].iter().map(move |b| (a, b)))
            .collect()
    }

    /// Pointwise order on `self × other`; the pair `(i, j)` has index `i * other.len() + j`.
    pub fn product(&self, other: &SpecOrder) -> Result<SpecOrder> {
        let (n, m) = (self.len(), other.len());
        if n * m > MAX_POINTS {
            return Err(Error::CarrierTooLarge {
                size: n * m,
                limit: MAX_POINTS,
            });
        }
        let mut up = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let mut u = PointSet::EMPTY;
                for a in self.up[i].iter() {
                    for b in other.up[j].iter() {
                        u.insert(a * m + b);
                    }
                }
                up.push(u);
            }
        }
        SpecOrder::from_up_sets(up)
    }
}
