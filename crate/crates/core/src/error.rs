use alloc::string::String;

use crate::set::PointSet;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("carrier has {size} points, limit is {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("{labels} labels given for a carrier of {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point index {0} is out of range")]
    PointOutOfRange(usize),
    #[error("open set {0:?} leaves the carrier")]
    OpenOutOfRange(PointSet),
    #[error("the opens do not contain the empty set")]
    MissingEmptyOpen,
    #[error("the opens do not contain the whole carrier")]
    MissingCarrierOpen,
    #[error("opens are not closed under union: {0:?} and {1:?}")]
    UnionNotOpen(PointSet, PointSet),
    #[error("opens are not closed under intersection: {0:?} and {1:?}")]
    IntersectionNotOpen(PointSet, PointSet),
    #[error("points {0} and {1} have the same open neighbourhoods (not T0)")]
    NotT0(usize, usize),
    #[error("order relation is not antisymmetric at {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("given order and opens disagree on {0:?}")]
    OrderOpensMismatch(PointSet),
    #[error("{0:?} is not a directed subset")]
    NotDirected(PointSet),
    #[error("family is not directed")]
    FamilyNotDirected,
    #[error("family member must be a nonempty set")]
    EmptyMember,
    #[error("{0} must be nonempty")]
    EmptyArgument(&'static str),
    #[error("not a directed space: {0:?} is directed-open but not open")]
    NotDirectedSpace(PointSet),
    #[error("{what} needs {size} items, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("map table has {got} entries, expected {expected}")]
    MapArity { got: usize, expected: usize },
    #[error("map value {value} at point {point} is outside the target")]
    MapValueOutOfRange { point: usize, value: usize },
    #[error("{0:?} is not closed: point {1} violates it")]
    NotClosed(PointSet, usize),
    #[error("transported witness rejected: {0}")]
    WitnessRejected(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
