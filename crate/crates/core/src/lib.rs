//! Cutsets of truncated Boolean lattices.
//!
//! The truncated Boolean lattice `B_n(m, l)` consists of all subsets of
//! `{1, .., n}` whose size lies between `m` and `l`. A *cutset* is a family of
//! such subsets meeting every saturated chain from level `m` to level `l`, and
//! its *width* is the size of its largest antichain. This crate provides:
//!
//! * [`lattice`]: bit-vector node sets, level enumeration and cover relations;
//! * [`chains`]: saturated chains and the bounded-size de Bruijn/Griggs
//!   chain partition of `2^[k]`;
//! * [`constructions`]: explicit cutsets for `l = m`, `l = m + 1`, `l = m + 2`
//!   and `l >= 2m`;
//! * [`analysis`]: cutset verification and width via bipartite matching;
//! * [`search`]: exact branch-and-bound computation of `h_n(m, l)` and
//!   `g_n(m, l)` on small instances, plus conjecture comparison reports;
//! * [`formulas`]: exact binomial formulas and identity checks.

pub mod analysis;
pub mod chains;
pub mod constructions;
mod error;
pub mod formulas;
pub mod lattice;
mod matching;
pub mod search;

pub use analysis::{is_antichain, is_cutset, width, CutsetReport, WidthReport};
pub use chains::{
    check_index_monotonicity, griggs_partition, start_level_counts, Chain, ChainPartition, IndexViolation,
    MonotonicityReport,
};
pub use constructions::{
    cutset_auto, cutset_bicolor, cutset_fourcolor, cutset_level, cutset_product, Cutset, CutsetFile, Method,
};
pub use error::{Error, Result};
pub use lattice::{color_of, covers_in, level_nodes, Color, NodeSet, TruncatedLattice};
pub use search::{
    conjecture_report, exact_g, exact_h, ConjectureReport, SearchBudget, SearchOptions, SearchResult, SearchStatus,
    Target,
};

/// Version tag written into every JSON document this crate produces.
pub const FORMAT_VERSION: u32 = 1;
