//! Quasi-finitely separating maps, quasi-approximate identities, and the
//! FS/QFS decisions built from them.
//!
//! A set-valued map `δ` is quasi-finitely separating when
//!
//! 1. `a ≤ b` implies `δ(b) ⊆ ↑δ(a)`;
//! 2. some finite `F_δ` has, for every `x`, a `y ∈ F_δ` with `x ∈ ↑y ⊆ ↑δ(x)`;
//! 3. whenever `D → x` and `δ(x) ⊆ U` for an open `U`, some `d ∈ D` has `δ(d) ⊆ U`.
//!
//! Condition 3 is checked exactly as stated, with a single `d`.

use alloc::vec::Vec;

use crate::approx::Approximation;
use crate::error::{Error, Result};
use crate::maps::{continuous_maps, is_continuous, PointMap};
use crate::order::SpecOrder;
use crate::set::PointSet;
use crate::space::{is_directed_family, FiniteSpace};

/// Default number of candidates a witness search may test before giving up.
pub const SEARCH_BUDGET: u64 = 200_000;

/// `x ↦ δ(x)`, a nonempty finite set per point, with an optional `F_δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetValuedMap {
    table: Vec<PointSet>,
    separating: Option<PointSet>,
}

impl SetValuedMap {
    pub fn new(table: Vec<PointSet>, separating: Option<PointSet>) -> Result<Self> {
        if table.iter().any(|v| v.is_empty()) {
            return Err(Error::EmptyMember);
        }
        Ok(SetValuedMap { table, separating })
    }

    /// `1*_X : x ↦ {x}`.
    pub fn identity(n: usize) -> Self {
        SetValuedMap {
            table: (0..n).map(PointSet::singleton).collect(),
            separating: None,
        }
    }

    /// `x ↦ {δ(x)}` for a single-valued map.
    pub fn lift(map: &PointMap, separating: Option<PointSet>) -> Self {
        SetValuedMap {
            table: map
                .table()
                .iter()
                .map(|&y| PointSet::singleton(y))
                .collect(),
            separating,
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn value(&self, x: usize) -> PointSet {
        self.table[x]
    }

    pub fn table(&self) -> &[PointSet] {
        &self.table
    }

    pub fn separating_set(&self) -> Option<PointSet> {
        self.separating
    }

    pub fn with_separating(mut self, f: PointSet) -> Self {
        self.separating = Some(f);
        self
    }

    /// `⋃_{x ∈ set} δ(x)`.
    pub fn image_union(&self, set: PointSet) -> PointSet {
        set.iter()
            .fold(PointSet::EMPTY, |acc, x| acc | self.table[x])
    }

    /// Same `↑δ(x)` at every point.
    pub fn same_upsets(&self, other: &SetValuedMap, order: &SpecOrder) -> bool {
        self.len() == other.len()
            && (0..self.len())
                .all(|x| order.up_closure(self.table[x]) == order.up_closure(other.table[x]))
    }
}

/// The first condition a candidate map fails, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QfsViolation {
    Arity {
        got: usize,
        expected: usize,
    },
    ValueOutOfRange {
        point: usize,
    },
    SeparatorOutOfRange,
    /// `lower ≤ upper` but `δ(upper) ⊄ ↑δ(lower)`.
    Monotone {
        lower: usize,
        upper: usize,
    },
    /// No admissible `y` for this point (in the given `F_δ`, or in any).
    Separation {
        point: usize,
    },
    /// `directed → limit` and `δ(limit) ⊆ open`, yet no `δ(d) ⊆ open`.
    Convergence {
        directed: PointSet,
        limit: usize,
        open: PointSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QfsMapReport {
    pub violation: Option<QfsViolation>,
    /// The given `F_δ`, or the one found by search.
    pub separating_set: Option<PointSet>,
}

impl QfsMapReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Smallest, then lexicographically least, set meeting every candidate set.
fn smallest_hitting_set(candidates: &[PointSet]) -> Option<PointSet> {
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    let pool: Vec<usize> = candidates
        .iter()
        .fold(PointSet::EMPTY, |acc, &c| acc | c)
        .iter()
        .collect();
    for k in 0..=pool.len() {
        let mut chosen = Vec::with_capacity(k);
        if let Some(found) = first_combination(&pool, k, 0, &mut chosen, candidates) {
            return Some(found);
        }
    }
    None
}

fn first_combination(
    pool: &[usize],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    candidates: &[PointSet],
) -> Option<PointSet> {
    if chosen.len() == k {
        let set: PointSet = chosen.iter().copied().collect();
        return candidates.iter().all(|c| c.intersects(set)).then_some(set);
    }
    let need = k - chosen.len();
    for i in start..=pool.len().saturating_sub(need) {
        chosen.push(pool[i]);
        let hit = first_combination(pool, k, i + 1, chosen, candidates);
        chosen.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Checks the three conditions with `U` ranging over the space's opens.
pub fn check_qfs_map(space: &FiniteSpace, delta: &SetValuedMap) -> QfsMapReport {
    check_qfs_map_against(space, delta, space.opens())
}

/// As [`check_qfs_map`], with condition 3 quantifying `U` over `opens`.
pub fn check_qfs_map_against(
    space: &FiniteSpace,
    delta: &SetValuedMap,
    opens: &[PointSet],
) -> QfsMapReport {
    let fail = |v| QfsMapReport {
        violation: Some(v),
        separating_set: delta.separating,
    };
    let n = space.len();
    if delta.len() != n {
        return fail(QfsViolation::Arity {
            got: delta.len(),
            expected: n,
        });
    }
    if let Some(point) = (0..n).find(|&x| !delta.value(x).is_subset(space.carrier())) {
        return fail(QfsViolation::ValueOutOfRange { point });
    }
    if let Some(f) = delta.separating {
        if f.is_empty() || !f.is_subset(space.carrier()) {
            return fail(QfsViolation::SeparatorOutOfRange);
        }
    }
    let order = space.specialization_order();
    for (a, b) in order.pairs() {
        if !delta.value(b).is_subset(order.up_closure(delta.value(a))) {
            return fail(QfsViolation::Monotone { lower: a, upper: b });
        }
    }
    // y ∈ F_δ with x ∈ ↑y ⊆ ↑δ(x) means y ∈ ↓x ∩ ↑δ(x)
    let admissible: Vec<PointSet> = (0..n)
        .map(|x| space.down(x) & space.up_closure(delta.value(x)))
        .collect();
    let separating = match delta.separating {
        Some(f) => {
            if let Some(point) = (0..n).find(|&x| !admissible[x].intersects(f)) {
                return fail(QfsViolation::Separation { point });
            }
            f
        }
        None => match smallest_hitting_set(&admissible) {
            Some(f) => f,
            None => {
                let point = (0..n).find(|&x| admissible[x].is_empty()).unwrap_or(0);
                return fail(QfsViolation::Separation { point });
            }
        },
    };
    for (d, lim) in space.convergence_table() {
        for x in lim.iter() {
            let dx = delta.value(x);
            for &u in opens.iter().filter(|u| dx.is_subset(**u)) {
                if !d.iter().any(|e| delta.value(e).is_subset(u)) {
                    return QfsMapReport {
                        violation: Some(QfsViolation::Convergence {
                            directed: d,
                            limit: x,
                            open: u,
                        }),
                        separating_set: Some(separating),
                    };
                }
            }
        }
    }
    QfsMapReport {
        violation: None,
        separating_set: Some(separating),
    }
}

/// A finite family of set-valued maps over one space.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MapFamily {
    pub members: Vec<SetValuedMap>,
}

impl MapFamily {
    pub fn new(members: Vec<SetValuedMap>) -> Self {
        MapFamily { members }
    }

    pub fn identity(n: usize) -> Self {
        MapFamily::new(alloc::vec![SetValuedMap::identity(n)])
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `𝒟(x) = {δ(x) : δ ∈ 𝒟}`.
    pub fn values_at(&self, x: usize) -> Vec<PointSet> {
        self.members.iter().map(|d| d.value(x)).collect()
    }

    /// Nonempty, and any two members have a third with
    /// `δ(x) ⊆ ↑δ₁(x) ∩ ↑δ₂(x)` at every point.
    pub fn is_directed(&self, order: &SpecOrder) -> bool {
        if self.members.is_empty() {
            return false;
        }
        let n = order.len();
        let ups: Vec<Vec<PointSet>> = self
            .members
            .iter()
            .map(|d| (0..n).map(|x| order.up_closure(d.value(x))).collect())
            .collect();
        ups.iter().all(|a| {
            ups.iter().all(|b| {
                self.members
                    .iter()
                    .any(|d| (0..n).all(|x| d.value(x).is_subset(a[x] & b[x])))
            })
        })
    }

    /// Fills in every missing `F_δ` by search.
    pub fn resolve(
        &self,
        space: &FiniteSpace,
    ) -> core::result::Result<MapFamily, (usize, QfsViolation)> {
        let mut out = Vec::with_capacity(self.members.len());
        for (i, d) in self.members.iter().enumerate() {
            let report = check_qfs_map(space, d);
            match report.violation {
                Some(v) => return Err((i, v)),
                None => out.push(
                    d.clone()
                        .with_separating(report.separating_set.expect("found")),
                ),
            }
        }
        Ok(MapFamily::new(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    /// Members failing the map check, with the first violation each.
    pub member_failures: Vec<(usize, QfsViolation)>,
    pub directed: bool,
    /// A point `x` where `𝒟(x)` does not converge to `x`.
    pub nonconvergent_point: Option<usize>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.member_failures.is_empty() && self.directed && self.nonconvergent_point.is_none()
    }
}

/// Members are quasi-finitely separating, the family is directed, and
/// `𝒟(x) → x` for every `x`.
pub fn check_quasi_approximate_identity(space: &FiniteSpace, family: &MapFamily) -> IdentityReport {
    let member_failures = family
        .members
        .iter()
        .enumerate()
        .filter_map(|(i, d)| check_qfs_map(space, d).violation.map(|v| (i, v)))
        .collect();
    let directed = family.is_directed(space.specialization_order());
    let nonconvergent_point = (0..space.len()).find(|&x| {
        family.is_empty() || !space.absorbs(&family.values_at(x), PointSet::singleton(x))
    });
    IdentityReport {
        member_failures,
        directed,
        nonconvergent_point,
    }
}

/// Outcome of an existential search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<W> {
    Found(W),
    /// The search space was exhausted.
    Absent,
    /// The budget ran out after this many candidates.
    Unknown {
        explored: u64,
    },
}

impl<W> Search<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            Search::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Search::Unknown { .. })
    }
}

/// Antichains inside `within`, smallest first.
pub fn antichains(order: &SpecOrder, within: PointSet) -> Vec<PointSet> {
    within
        .subsets_by_size()
        .into_iter()
        .filter(|&s| order.minimal(s) == s)
        .collect()
}

/// Looks for a quasi-approximate identity made of quasi-finitely separating maps.
///
/// `{1*_X}` is tried first. After that the search runs over single maps whose
/// values are antichains inside the smallest neighbourhood of each point, by
/// increasing total size then lexicographically. That space is complete: a
/// finite directed family has a member `δ*` with `δ*(x) ⊆ ↑δ(x)` for all
/// members, and `{δ*}` is a witness whenever the family is. Only `↑δ(x)`
/// matters to every condition, so antichain values suffice, and pointwise
/// convergence of `{δ*(x)}` forces `δ*(x)` into every open around `x`.
pub fn search_qfs_witness(space: &FiniteSpace, budget: u64) -> Result<Search<MapFamily>> {
    space.require_directed_space()?;
    let n = space.len();
    let identity = MapFamily::identity(n);
    if check_quasi_approximate_identity(space, &identity).passed() {
        let resolved = identity.resolve(space).expect("identity passed");
        return Ok(Search::Found(resolved));
    }
    let order = space.specialization_order();
    let candidates: Vec<Vec<PointSet>> = (0..n)
        .map(|x| {
            let nbhd = space
                .opens()
                .iter()
                .filter(|u| u.contains(x))
                .fold(space.carrier(), |acc, &u| acc & u);
            antichains(order, nbhd)
        })
        .collect();
    let max_total: usize = candidates
        .iter()
        .map(|c| c.iter().map(|s| s.len()).max().unwrap_or(0))
        .sum();
    let mut explored = 0u64;
    for total in n..=max_total {
        let mut table = Vec::with_capacity(n);
        let mut hit = None;
        let exhausted = sized_maps(&candidates, total, &mut table, &mut |t| {
            explored += 1;
            if explored > budget {
                return Step::Stop;
            }
            let fam = MapFamily::new(alloc::vec![SetValuedMap {
                table: t.to_vec(),
                separating: None,
            }]);
            if check_quasi_approximate_identity(space, &fam).passed() {
                hit = Some(fam);
                return Step::Stop;
            }
            Step::Continue
        });
        if let Some(fam) = hit {
            return Ok(Search::Found(fam.resolve(space).expect("checked")));
        }
        if !exhausted {
            return Ok(Search::Unknown { explored: budget });
        }
    }
    Ok(Search::Absent)
}

enum Step {
    Continue,
    Stop,
}

/// Tables choosing one candidate per point with sizes summing to `total`.
/// Returns false when the visitor stopped early.
fn sized_maps(
    candidates: &[Vec<PointSet>],
    total: usize,
    table: &mut Vec<PointSet>,
    visit: &mut dyn FnMut(&[PointSet]) -> Step,
) -> bool {
    let i = table.len();
    if i == candidates.len() {
        return if total == 0 {
            matches!(visit(table), Step::Continue)
        } else {
            true
        };
    }
    let rest_min = candidates.len() - i - 1;
    for &c in &candidates[i] {
        if c.len() + rest_min > total {
            continue;
        }
        table.push(c);
        let go = sized_maps(candidates, total - c.len(), table, visit);
        table.pop();
        if !go {
            return false;
        }
    }
    true
}

/// Every antichain-valued quasi-finitely separating map, in lexicographic order
/// of per-point candidate lists. Refuses when more than `budget` partial tables
/// would be visited.
pub fn qfs_maps(space: &FiniteSpace, budget: u64) -> Result<Vec<SetValuedMap>> {
    match qfs_maps_prefix(space, budget) {
        (maps, true) => Ok(maps),
        (_, false) => Err(Error::TooLarge {
            what: "quasi-finitely separating map enumeration",
            size: budget as u128 + 1,
            limit: budget as u128,
        }),
    }
}

/// The maps [`qfs_maps`] lists within `budget` partial tables, and whether
/// that is all of them.
pub fn qfs_maps_prefix(space: &FiniteSpace, budget: u64) -> (Vec<SetValuedMap>, bool) {
    let n = space.len();
    let order = space.specialization_order();
    let all = antichains(order, space.carrier());
    // condition 2 needs x ∈ ↑δ(x)
    let candidates: Vec<Vec<PointSet>> = (0..n)
        .map(|x| {
            all.iter()
                .copied()
                .filter(|&a| order.up_closure(a).contains(x))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut visited = 0u64;
    let mut table = Vec::with_capacity(n);
    let complete = extend_qfs(
        space,
        &candidates,
        &mut table,
        &mut visited,
        budget,
        &mut out,
    );
    (out, complete)
}

fn extend_qfs(
    space: &FiniteSpace,
    candidates: &[Vec<PointSet>],
    table: &mut Vec<PointSet>,
    visited: &mut u64,
    budget: u64,
    out: &mut Vec<SetValuedMap>,
) -> bool {
    *visited += 1;
    if *visited > budget {
        return false;
    }
    let i = table.len();
    if i == candidates.len() {
        let d = SetValuedMap {
            table: table.clone(),
            separating: None,
        };
        let report = check_qfs_map(space, &d);
        if report.passed() {
            out.push(d.with_separating(report.separating_set.expect("found")));
        }
        return true;
    }
    let order = space.specialization_order();
    for &c in &candidates[i] {
        let up_c = order.up_closure(c);
        let monotone = (0..i).all(|j| {
            (!order.le(j, i) || c.is_subset(order.up_closure(table[j])))
                && (!order.le(i, j) || table[j].is_subset(up_c))
        });
        if !monotone {
            continue;
        }
        table.push(c);
        let go = extend_qfs(space, candidates, table, visited, budget, out);
        table.pop();
        if !go {
            return false;
        }
    }
    true
}

/// `δ(x) ≪_d x` fails at the returned point, if anywhere.
pub fn first_unapproximated_point(
    approx: &Approximation<'_>,
    delta: &SetValuedMap,
) -> Option<usize> {
    (0..delta.len()).find(|&x| {
        !approx
            .way_below_set(delta.value(x), PointSet::singleton(x))
            .unwrap_or(false)
    })
}

/// `V_δ = {x : ↑δ(x) ⊆ U}` for each member, and the three claims about them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCoverReport {
    pub pieces: Vec<PointSet>,
    pub all_directed_open: bool,
    pub union_matches: bool,
    pub directed: bool,
}

impl OpenCoverReport {
    pub fn passed(&self) -> bool {
        self.all_directed_open && self.union_matches && self.directed
    }
}

/// Cover of an open set by the `V_δ`.
pub fn open_cover_report(
    space: &FiniteSpace,
    family: &MapFamily,
    u: PointSet,
) -> Result<OpenCoverReport> {
    if !space.is_open(u) {
        return Err(Error::Precondition(alloc::format!("{u:?} is not open")));
    }
    let pieces: Vec<PointSet> = family
        .members
        .iter()
        .map(|d| {
            (0..space.len())
                .filter(|&x| space.up_closure(d.value(x)).is_subset(u))
                .collect()
        })
        .collect();
    let union = pieces.iter().fold(PointSet::EMPTY, |acc, &p| acc | p);
    let directed = !pieces.is_empty()
        && pieces.iter().all(|&a| {
            pieces
                .iter()
                .all(|&b| pieces.iter().any(|&c| (a | b).is_subset(c)))
        });
    Ok(OpenCoverReport {
        all_directed_open: pieces.iter().all(|&p| space.is_directed_open(p)),
        union_matches: union == u,
        directed,
        pieces,
    })
}

/// `↑F` against `⋂_δ ⋃_{x∈F} ↑δ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsetReport {
    pub upset: PointSet,
    pub intersection: PointSet,
    /// `{⋃_{x∈F} δ(x) : δ ∈ 𝒟}` is a directed family.
    pub directed: bool,
}

impl UpsetReport {
    pub fn passed(&self) -> bool {
        self.upset == self.intersection && self.directed
    }
}

pub fn upset_report(space: &FiniteSpace, family: &MapFamily, f: PointSet) -> Result<UpsetReport> {
    if f.is_empty() {
        return Err(Error::EmptyArgument("finite set"));
    }
    space.check_set(f)?;
    let unions: Vec<PointSet> = family.members.iter().map(|d| d.image_union(f)).collect();
    let intersection = unions
        .iter()
        .fold(space.carrier(), |acc, &s| acc & space.up_closure(s));
    Ok(UpsetReport {
        upset: space.up_closure(f),
        intersection,
        directed: is_directed_family(&unions, space.specialization_order()),
    })
}

/// For any `F₁ ≪_d x₁` and `F₂ ≪_d x₂` some member has
/// `Fᵢ ≪_d δ(xᵢ) ≪_d xᵢ` for both.
pub fn satisfies_property_p(approx: &Approximation<'_>, family: &MapFamily) -> bool {
    let space = approx.space();
    let pairs: Vec<(PointSet, usize)> = (0..space.len())
        .flat_map(|x| approx.fin_d(x).into_iter().map(move |f| (f, x)))
        .collect();
    if pairs.is_empty() {
        return true;
    }
    // good[m][p]: member m serves pair p
    let good: Vec<Vec<bool>> = family
        .members
        .iter()
        .map(|d| {
            pairs
                .iter()
                .map(|&(f, x)| {
                    let v = d.value(x);
                    approx.way_below_set(f, v).unwrap_or(false)
                        && approx
                            .way_below_set(v, PointSet::singleton(x))
                            .unwrap_or(false)
                })
                .collect()
        })
        .collect();
    (0..pairs.len()).all(|p| (p..pairs.len()).all(|q| good.iter().any(|g| g[p] && g[q])))
}

/// A single-valued self-map with an optional finite separating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfMap {
    pub map: PointMap,
    pub separating: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FsViolation {
    Arity {
        got: usize,
        expected: usize,
    },
    NotContinuous,
    SeparatorOutOfRange,
    /// No `y` with `δ(x) ≤ y ≤ x` in the separating set.
    Separation {
        point: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsMapReport {
    pub violation: Option<FsViolation>,
    pub separating_set: Option<PointSet>,
}

impl FsMapReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Continuous, with a finite `F_δ` such that `δ(x) ≤ y ≤ x` for some `y ∈ F_δ`.
pub fn check_fs_map(space: &FiniteSpace, delta: &SelfMap) -> FsMapReport {
    let fail = |v| FsMapReport {
        violation: Some(v),
        separating_set: delta.separating,
    };
    let n = space.len();
    if delta.map.source_len() != n || delta.map.target_len() != n {
        return fail(FsViolation::Arity {
            got: delta.map.source_len(),
            expected: n,
        });
    }
    if !is_continuous(space, space, &delta.map) {
        return fail(FsViolation::NotContinuous);
    }
    let admissible: Vec<PointSet> = (0..n)
        .map(|x| space.up(delta.map.apply(x)) & space.down(x))
        .collect();
    let separating = match delta.separating {
        Some(f) => {
            if f.is_empty() || !f.is_subset(space.carrier()) {
                return fail(FsViolation::SeparatorOutOfRange);
            }
            if let Some(point) = (0..n).find(|&x| !admissible[x].intersects(f)) {
                return fail(FsViolation::Separation { point });
            }
            f
        }
        None => match smallest_hitting_set(&admissible) {
            Some(f) => f,
            None => {
                let point = (0..n).find(|&x| admissible[x].is_empty()).unwrap_or(0);
                return fail(FsViolation::Separation { point });
            }
        },
    };
    FsMapReport {
        violation: None,
        separating_set: Some(separating),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsReport {
    /// The space is d-continuous.
    pub c_space: bool,
    pub member_failures: Vec<(usize, FsViolation)>,
    /// Directed in the pointwise order.
    pub directed: bool,
    /// A point `x` where `{δ(x)}` fails to be directed or to converge to `x`.
    pub nonconvergent_point: Option<usize>,
}

impl FsReport {
    pub fn passed(&self) -> bool {
        self.c_space
            && self.member_failures.is_empty()
            && self.directed
            && self.nonconvergent_point.is_none()
    }
}

/// An approximate identity of finitely separating functions on a c-space.
pub fn check_fs_family(space: &FiniteSpace, family: &[SelfMap]) -> Result<FsReport> {
    let c_space = Approximation::new(space)?.is_d_continuous();
    let member_failures = family
        .iter()
        .enumerate()
        .filter_map(|(i, d)| check_fs_map(space, d).violation.map(|v| (i, v)))
        .collect();
    let n = space.len();
    let le_pointwise =
        |a: &PointMap, b: &PointMap| (0..n).all(|x| space.le(a.apply(x), b.apply(x)));
    let directed = !family.is_empty()
        && family.iter().all(|a| {
            family.iter().all(|b| {
                family
                    .iter()
                    .any(|c| le_pointwise(&a.map, &c.map) && le_pointwise(&b.map, &c.map))
            })
        });
    let nonconvergent_point = (0..n).find(|&x| {
        let values: PointSet = family.iter().map(|d| d.map.apply(x)).collect();
        family.is_empty() || !space.converges(values, x).unwrap_or(false)
    });
    Ok(FsReport {
        c_space,
        member_failures,
        directed,
        nonconvergent_point,
    })
}

/// Looks for an FS witness: the identity first, then single continuous maps in
/// lexicographic order. A directed family of self-maps has a pointwise greatest
/// member, which is a witness on its own whenever the family is.
pub fn search_fs_witness(space: &FiniteSpace) -> Result<Search<Vec<SelfMap>>> {
    let n = space.len();
    if !Approximation::new(space)?.is_d_continuous() {
        return Ok(Search::Absent);
    }
    let identity = SelfMap {
        map: PointMap::identity(n),
        separating: None,
    };
    let mut tried = alloc::vec![identity];
    let maps = match continuous_maps(space, space) {
        Ok(maps) => maps,
        Err(Error::TooLarge { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    let exhaustive = !maps.is_empty();
    tried.extend(maps.into_iter().map(|map| SelfMap {
        map,
        separating: None,
    }));
    for d in tried {
        let report = check_fs_map(space, &d);
        if !report.passed() {
            continue;
        }
        let d = SelfMap {
            separating: report.separating_set,
            ..d
        };
        let fam = alloc::vec![d];
        if check_fs_family(space, &fam)?.passed() {
            return Ok(Search::Found(fam));
        }
    }
    Ok(if exhaustive {
        Search::Absent
    } else {
        Search::Unknown { explored: 1 }
    })
}

/// `δ ↦ δ*`, `δ*(x) = {δ(x)}`, keeping each separating set.
pub fn fs_to_qfs(family: &[SelfMap]) -> MapFamily {
    MapFamily::new(
        family
            .iter()
            .map(|d| SetValuedMap::lift(&d.map, d.separating))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn ps(items: &[usize]) -> PointSet {
        items.iter().copied().collect()
    }

    #[test]
    fn identity_is_qfs_with_full_separator() {
        for s in [
            catalogue::sierpinski(),
            catalogue::chain(3),
            catalogue::vee(),
        ] {
            let r = check_qfs_map(&s, &SetValuedMap::identity(s.len()));
            assert!(r.passed());
            assert_eq!(r.separating_set, Some(s.carrier()));
        }
    }

    #[test]
    fn constant_bottom_on_chain() {
        let c = catalogue::chain(3);
        let bottom = SetValuedMap::new(alloc::vec![ps(&[0]); 3], None).unwrap();
        let r = check_qfs_map(&c, &bottom);
        assert!(r.passed());
        assert_eq!(r.separating_set, Some(ps(&[0])));
        let report = check_quasi_approximate_identity(&c, &MapFamily::new(alloc::vec![bottom]));
        assert_eq!(report.nonconvergent_point, Some(1));
        assert!(!report.passed());
    }

    #[test]
    fn separation_fails_below_the_value() {
        let s = catalogue::sierpinski();
        let d = SetValuedMap::new(alloc::vec![ps(&[1]), ps(&[1])], None).unwrap();
        let r = check_qfs_map(&s, &d);
        assert_eq!(r.violation, Some(QfsViolation::Separation { point: 0 }));
    }

    #[test]
    fn incomparable_constants_are_not_directed() {
        let a = catalogue::antichain(2);
        let fam = MapFamily::new(alloc::vec![
            SetValuedMap::new(alloc::vec![ps(&[0]); 2], None).unwrap(),
            SetValuedMap::new(alloc::vec![ps(&[1]); 2], None).unwrap(),
        ]);
        assert!(!check_quasi_approximate_identity(&a, &fam).directed);
    }

    #[test]
    fn witness_search_finds_identity() {
        let p = catalogue::one_point();
        let found = search_qfs_witness(&p, SEARCH_BUDGET).unwrap();
        assert_eq!(found.found().unwrap().members[0].table(), &[ps(&[0])]);
        let v = catalogue::vee();
        let w = search_qfs_witness(&v, SEARCH_BUDGET).unwrap();
        let fam = w.found().unwrap();
        assert_eq!(fam.members[0].separating_set(), Some(v.carrier()));
    }

    #[test]
    fn fs_identity_lifts() {
        let c = catalogue::chain(3);
        let fs = search_fs_witness(&c).unwrap();
        let fam = fs.found().unwrap();
        assert!(fam[0].map.is_identity());
        let lifted = fs_to_qfs(fam);
        assert!(check_quasi_approximate_identity(&c, &lifted).passed());
    }

    #[test]
    fn cover_pieces() {
        let s = catalogue::sierpinski();
        let id = MapFamily::identity(2);
        let r = open_cover_report(&s, &id, ps(&[1])).unwrap();
        assert_eq!(r.pieces, alloc::vec![ps(&[1])]);
        assert!(r.passed());
        let empty = open_cover_report(&s, &id, PointSet::EMPTY).unwrap();
        assert_eq!(empty.pieces, alloc::vec![PointSet::EMPTY]);
        assert!(open_cover_report(&s, &id, ps(&[0])).is_err());
    }

    #[test]
    fn upset_identity() {
        let v = catalogue::vee();
        let id = MapFamily::identity(3);
        let mins = ps(&[0, 1]);
        let r = upset_report(&v, &id, mins).unwrap();
        assert_eq!(r.upset, v.carrier());
        assert!(r.passed());
        let r = upset_report(&v, &id, ps(&[2])).unwrap();
        assert_eq!(r.intersection, ps(&[2]));
    }

    #[test]
    fn property_p_examples() {
        let c = catalogue::chain(3);
        let a = Approximation::new(&c).unwrap();
        assert!(satisfies_property_p(&a, &MapFamily::identity(3)));
        assert!(!satisfies_property_p(&a, &MapFamily::default()));
    }

    #[test]
    fn enumerated_maps_include_identity() {
        let w = catalogue::wedge();
        let maps = qfs_maps(&w, SEARCH_BUDGET).unwrap();
        assert!(maps
            .iter()
            .any(|d| d.table() == SetValuedMap::identity(3).table()));
        for d in &maps {
            assert!(check_qfs_map(&w, d).passed());
        }
        let (prefix, complete) = qfs_maps_prefix(&w, 3);
        assert!(!complete);
        assert!(prefix.len() < maps.len() && maps.starts_with(&prefix));
        assert!(qfs_maps(&w, 3).is_err());
    }

    #[test]
    fn hitting_set_is_smallest_then_lexicographic() {
        let c = [ps(&[0, 2]), ps(&[1, 2])];
        assert_eq!(smallest_hitting_set(&c), Some(ps(&[2])));
        assert_eq!(smallest_hitting_set(&[ps(&[1]), PointSet::EMPTY]), None);
    }
}
