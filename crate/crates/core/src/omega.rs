//! Refutation probes on staged presentations of infinite spaces.
//!
//! Finite spaces make `≪_d` collapse to `≤`, so nothing interesting about
//! way-below can be seen there. A staged space is an increasing sequence of
//! finite stages together with the order and Scott neighbourhoods of the limit
//! space. A probe replays candidate directed sets through the stages and may
//! refute a way-below claim about the limit; it never certifies one.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::approx::{is_locally_hypercompact, Approximation};
use crate::error::{Error, Result};
use crate::order::SpecOrder;
use crate::qfs::{search_qfs_witness, SEARCH_BUDGET};
use crate::space::FiniteSpace;

/// A point of the limit space, named independently of any stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StagedPoint {
    Nat(u32),
    Top,
    Bottom,
}

impl fmt::Display for StagedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StagedPoint::Nat(n) => write!(f, "{n}"),
            StagedPoint::Top => f.write_str("top"),
            StagedPoint::Bottom => f.write_str("bot"),
        }
    }
}

impl FromStr for StagedPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" | "⊤" => Ok(StagedPoint::Top),
            "bot" | "bottom" | "⊥" => Ok(StagedPoint::Bottom),
            _ => s
                .parse::<u32>()
                .map(StagedPoint::Nat)
                .map_err(|_| Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Naturals in their usual order with a top above them all.
    ChainTop,
    /// Pairwise incomparable naturals above a bottom.
    Flat,
}

/// Stage `k` holds the naturals `0 .. start + step·k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StageRule {
    pub shape: Shape,
    pub start: u32,
    pub step: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedSpace {
    name: String,
    rule: StageRule,
}

impl StagedSpace {
    pub fn new(name: &str, rule: StageRule) -> Result<Self> {
        if rule.start == 0 {
            return Err(Error::Precondition(
                "a stage rule must start with a point".into(),
            ));
        }
        Ok(StagedSpace {
            name: name.to_string(),
            rule,
        })
    }

    /// `ω + 1`: stage `k` is the chain `0 < 1 < .. < k < ⊤`.
    pub fn omega_top() -> Self {
        StagedSpace::new(
            "omega-top",
            StageRule {
                shape: Shape::ChainTop,
                start: 1,
                step: 1,
            },
        )
        .expect("valid rule")
    }

    /// Flat naturals: stage `k` is `⊥` below `0, .., k`.
    pub fn flat_nat() -> Self {
        StagedSpace::new(
            "flat-nat",
            StageRule {
                shape: Shape::Flat,
                start: 1,
                step: 1,
            },
        )
        .expect("valid rule")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "omega-top" | "OMEGA_TOP" => Some(StagedSpace::omega_top()),
            "flat-nat" | "FLAT_NAT" => Some(StagedSpace::flat_nat()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule(&self) -> StageRule {
        self.rule
    }

    fn naturals_at(&self, k: u32) -> u32 {
        self.rule
            .start
            .saturating_add(self.rule.step.saturating_mul(k))
    }

    /// First stage containing `p`, or `None` if `p` never appears.
    pub fn stable_from(&self, p: StagedPoint) -> Option<u32> {
        match (self.rule.shape, p) {
            (Shape::ChainTop, StagedPoint::Top) | (Shape::Flat, StagedPoint::Bottom) => Some(0),
            (_, StagedPoint::Nat(i)) => {
                if i < self.rule.start {
                    Some(0)
                } else {
                    (i - self.rule.start)
                        .checked_div(self.rule.step)
                        .map(|k| k + 1)
                }
            }
            _ => None,
        }
    }

    /// Order of the limit space.
    pub fn le(&self, p: StagedPoint, q: StagedPoint) -> bool {
        use StagedPoint::*;
        match (self.rule.shape, p, q) {
            (Shape::ChainTop, Nat(i), Nat(j)) => i <= j,
            (Shape::ChainTop, _, Top) => true,
            (Shape::Flat, Bottom, _) => true,
            (Shape::Flat, Nat(i), Nat(j)) => i == j,
            _ => false,
        }
    }

    /// Points of stage `k`, in index order.
    pub fn points_at(&self, k: u32) -> Vec<StagedPoint> {
        let nats = (0..self.naturals_at(k)).map(StagedPoint::Nat);
        match self.rule.shape {
            Shape::ChainTop => nats.chain([StagedPoint::Top]).collect(),
            Shape::Flat => [StagedPoint::Bottom].into_iter().chain(nats).collect(),
        }
    }

    /// Stage `k` as a finite space with all upper sets open. The inclusion of
    /// each stage into the next preserves and reflects the order.
    pub fn stage(&self, k: u32) -> Result<FiniteSpace> {
        let points = self.points_at(k);
        let n = points.len();
        if n > crate::space::MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: n,
                limit: crate::space::MAX_CARRIER,
            });
        }
        let mut pairs = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            for (j, &q) in points.iter().enumerate() {
                if i != j && self.le(p, q) {
                    pairs.push((i, j));
                }
            }
        }
        let order = SpecOrder::from_relation(n, pairs)?;
        let labels = points.iter().map(|p| p.to_string()).collect();
        FiniteSpace::from_order(labels, order)
    }

    /// Index of `p` in stage `k`.
    pub fn index_at(&self, k: u32, p: StagedPoint) -> Option<usize> {
        self.points_at(k).iter().position(|&q| q == p)
    }

    /// Whether `sel` eventually stays inside every basic Scott neighbourhood of `y`.
    fn eventually_near(&self, sel: &StagedDirectedSet, y: StagedPoint) -> bool {
        use StagedPoint::*;
        match (*sel, self.rule.shape, y) {
            // the tail of the canonical chain eventually sits in ↑n for every n,
            // and in every {⊤} ∪ [n, ∞)
            (StagedDirectedSet::Chain { .. }, Shape::ChainTop, _) => true,
            (StagedDirectedSet::Chain { .. }, Shape::Flat, Bottom) => true,
            (StagedDirectedSet::Chain { .. }, Shape::Flat, _) => false,
            // the smallest neighbourhood of a natural, or of ⊥ in the flat space, is ↑y;
            // ⊤ has the neighbourhoods {⊤} ∪ [n, ∞), which a constant natural leaves
            (StagedDirectedSet::Constant(p), Shape::ChainTop, Top) => p == Top,
            (StagedDirectedSet::Constant(p), _, _) => self.le(y, p),
        }
    }

    /// Stage at which the selection first dominates `x`; `None` if never.
    fn dominates_at(&self, sel: &StagedDirectedSet, x: StagedPoint) -> Option<u32> {
        match (*sel, self.rule.shape) {
            (StagedDirectedSet::Chain { lag }, Shape::ChainTop) => match x {
                StagedPoint::Nat(i) => Some(i + lag),
                StagedPoint::Top => None,
                StagedPoint::Bottom => None,
            },
            (StagedDirectedSet::Chain { lag }, Shape::Flat) => match x {
                StagedPoint::Bottom => Some(lag),
                StagedPoint::Nat(i) => Some(i + lag),
                StagedPoint::Top => None,
            },
            (StagedDirectedSet::Constant(p), _) => {
                if self.le(x, p) {
                    Some(self.stable_from(p).unwrap_or(0))
                } else {
                    None
                }
            }
        }
    }
}

/// A selection `σ(k)` of one point per stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StagedDirectedSet {
    /// `σ(k) = k - lag`, undefined before stage `lag`.
    Chain { lag: u32 },
    /// `σ(k) = p` once `p` exists.
    Constant(StagedPoint),
}

impl StagedDirectedSet {
    pub fn select(&self, space: &StagedSpace, k: u32) -> Option<StagedPoint> {
        match *self {
            StagedDirectedSet::Chain { lag } => k.checked_sub(lag).map(StagedPoint::Nat),
            StagedDirectedSet::Constant(p) => space.stable_from(p).filter(|&s| s <= k).map(|_| p),
        }
    }
}

impl fmt::Display for StagedDirectedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StagedDirectedSet::Chain { lag } => write!(f, "chain(lag={lag})"),
            StagedDirectedSet::Constant(p) => write!(f, "constant({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Certified on the finite stage of this index only.
    Holds {
        depth: u32,
    },
    /// Refuted for the limit space by a replayable directed set.
    Refuted {
        witness: StagedDirectedSet,
        depth: u32,
    },
    UnknownAtDepth(u32),
}

/// The stock witnesses for a staged space.
pub fn catalogue_witnesses(space: &StagedSpace) -> Vec<StagedDirectedSet> {
    let mut out = alloc::vec![
        StagedDirectedSet::Chain { lag: 0 },
        StagedDirectedSet::Chain { lag: 1 },
        StagedDirectedSet::Chain { lag: 2 },
    ];
    match space.rule.shape {
        Shape::ChainTop => out.push(StagedDirectedSet::Constant(StagedPoint::Top)),
        Shape::Flat => out.push(StagedDirectedSet::Constant(StagedPoint::Bottom)),
    }
    out.extend((0..4).map(|i| StagedDirectedSet::Constant(StagedPoint::Nat(i))));
    out
}

/// Replays one witness against `x ≪ y` to `depth`. True when it refutes.
///
/// The witness must be directed at every replayed stage, must never select a
/// point above `x`, and must eventually enter every neighbourhood of `y`.
pub fn replay(
    space: &StagedSpace,
    x: StagedPoint,
    y: StagedPoint,
    witness: &StagedDirectedSet,
    depth: u32,
) -> bool {
    let mut selected: Vec<StagedPoint> = Vec::new();
    for k in 0..=depth {
        if let Some(p) = witness.select(space, k) {
            if !selected.contains(&p) {
                selected.push(p);
            }
        }
        let directed = selected.iter().all(|&a| {
            selected
                .iter()
                .all(|&b| selected.iter().any(|&c| space.le(a, c) && space.le(b, c)))
        });
        if !directed || selected.iter().any(|&p| space.le(x, p)) {
            return false;
        }
    }
    !selected.is_empty()
        && space.dominates_at(witness, x).is_none()
        && space.eventually_near(witness, y)
}

fn require_stable(space: &StagedSpace, p: StagedPoint, depth: u32) -> Result<()> {
    match space.stable_from(p) {
        Some(s) if s <= depth => Ok(()),
        _ => Err(Error::Precondition(format!(
            "{p} is not a stable point of {} by stage {depth}",
            space.name()
        ))),
    }
}

/// Tries each witness in order; the first that refutes `x ≪ y` is returned.
pub fn way_below_probe(
    space: &StagedSpace,
    x: StagedPoint,
    y: StagedPoint,
    witnesses: &[StagedDirectedSet],
    depth: u32,
) -> Result<Verdict> {
    require_stable(space, x, depth)?;
    require_stable(space, y, depth)?;
    for w in witnesses {
        if depth >= 1 && replay(space, x, y, w, depth) {
            return Ok(Verdict::Refuted { witness: *w, depth });
        }
    }
    Ok(Verdict::UnknownAtDepth(depth))
}

/// A per-stage check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StagePredicate {
    WayBelow(StagedPoint, StagedPoint),
    DContinuous,
    DQuasicontinuous,
    LocallyHypercompact,
    Qfs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTrace {
    /// `(stage, value)`; stages where a point of the predicate is absent are skipped.
    pub values: Vec<(u32, bool)>,
    /// First stage from which the value stays constant through the last stage.
    pub stable_from: Option<u32>,
}

/// Evaluates `predicate` on stages `0..=depth`.
pub fn stagewise_report(
    space: &StagedSpace,
    predicate: StagePredicate,
    depth: u32,
) -> Result<StageTrace> {
    let mut values = Vec::new();
    for k in 0..=depth {
        let stage = space.stage(k)?;
        let value = match predicate {
            StagePredicate::WayBelow(x, y) => {
                let (Some(i), Some(j)) = (space.index_at(k, x), space.index_at(k, y)) else {
                    continue;
                };
                Approximation::new(&stage)?.way_below_point(i, j)
            }
            StagePredicate::DContinuous => Approximation::new(&stage)?.is_d_continuous(),
            StagePredicate::DQuasicontinuous => Approximation::new(&stage)?.is_d_quasicontinuous(),
            StagePredicate::LocallyHypercompact => is_locally_hypercompact(&stage),
            StagePredicate::Qfs => search_qfs_witness(&stage, SEARCH_BUDGET)?.found().is_some(),
        };
        values.push((k, value));
    }
    let stable_from = values.last().map(|&(_, last)| {
        values
            .iter()
            .rev()
            .take_while(|&&(_, v)| v == last)
            .last()
            .map(|&(k, _)| k)
            .expect("nonempty")
    });
    Ok(StageTrace {
        values,
        stable_from,
    })
}

/// `Holds` when `x ≪ y` is true on stage `k` itself.
pub fn certify_at_stage(
    space: &StagedSpace,
    x: StagedPoint,
    y: StagedPoint,
    k: u32,
) -> Result<Option<Verdict>> {
    let stage = space.stage(k)?;
    let (Some(i), Some(j)) = (space.index_at(k, x), space.index_at(k, y)) else {
        return Err(Error::Precondition(format!(
            "{x} or {y} is absent at stage {k}"
        )));
    };
    Ok(Approximation::new(&stage)?
        .way_below_point(i, j)
        .then_some(Verdict::Holds { depth: k }))
}
