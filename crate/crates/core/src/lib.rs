//! Executable order theory for finite directed spaces.
//!
//! The crate decides d-way-below and the continuity notions built on it for finite
//! T0 spaces, searches and checks quasi-approximate identities (QFS witnesses),
//! transports witnesses through subspaces, projections, retracts and tensor
//! products, builds the finite upper powerspace, and probes staged
//! presentations of infinite spaces for refutations.
//!
//! Every decision procedure quantifies over the relevant finite universe
//! (directed subsets, finite families, maps) exactly; nothing assumes the
//! Alexandroff shortcuts that hold on finite carriers.

#![no_std]

extern crate alloc;

pub mod approx;
pub mod catalogue;
pub mod construct;
pub mod error;
pub mod family;
pub mod maps;
pub mod omega;
pub mod order;
pub mod power;
pub mod qfs;
pub mod set;
pub mod space;

pub use approx::Approximation;
pub use error::{Error, Result};
pub use family::FinUpsets;
pub use maps::{PointMap, RetractPair};
pub use omega::{StagedDirectedSet, StagedPoint, StagedSpace, Verdict};
pub use order::SpecOrder;
pub use power::{PowerSpace, Reading};
pub use qfs::{MapFamily, Search, SetValuedMap};
pub use set::PointSet;
pub use space::{FiniteFamily, FiniteSpace};
