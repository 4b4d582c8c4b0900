//! Companion to `qfs-core`: the JSON instance format, poset corpora, theorem
//! suites with parallel runs and deterministic reports, and the pieces behind
//! the `qfs` command line.

pub mod analyze;
pub mod config;
pub mod corpus;
pub mod export;
pub mod instance;
pub mod suite;

pub use corpus::{Corpus, Entry, Provenance};
pub use instance::Instance;
pub use suite::{run_suite, Outcome, Settings, SuiteReport};
