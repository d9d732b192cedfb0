//! Saturated chains and chain partitions of `2^[k]`.

use std::collections::{BTreeMap, HashSet};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{domain, Error, Result};
use crate::lattice::{NodeSet, MAX_GROUND};

/// A saturated chain `A_1 ⊂ A_2 ⊂ .. ⊂ A_r` with `|A_{i+1}| = |A_i| + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    nodes: Vec<NodeSet>,
}

impl Chain {
    pub fn new(nodes: Vec<NodeSet>) -> Result<Self> {
        let Some(first) = nodes.first() else {
            return Err(Error::InvalidChain("a chain needs at least one node".into()));
        };
        let n = first.ground();
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.ground() != n || a.ground() != n {
                return Err(Error::InvalidChain("nodes over different ground sets".into()));
            }
            if !a.is_proper_subset(b) || b.level() != a.level() + 1 {
                return Err(Error::InvalidChain(format!("{a} -> {b} is not a cover step")));
            }
        }
        Ok(Self { nodes })
    }

    pub fn singleton(node: NodeSet) -> Self {
        Self { nodes: vec![node] }
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<NodeSet>) -> Self {
        debug_assert!(Chain::new(nodes.clone()).is_ok());
        Self { nodes }
    }

    pub fn nodes(&self) -> &[NodeSet] {
        &self.nodes
    }

    pub fn bottom(&self) -> NodeSet {
        self.nodes[0]
    }

    pub fn top(&self) -> NodeSet {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// `size - 1`.
    pub fn length(&self) -> usize {
        self.nodes.len() - 1
    }

    /// The chain with `extra` added to every node. `extra` must be disjoint
    /// from the top node and fit the ground set.
    pub(crate) fn lifted(&self, extra: u64) -> Chain {
        debug_assert_eq!(self.top().bits() & extra, 0);
        self.map_bits(|b| b | extra)
    }

    /// Re-embeds the chain into a larger ground set via `f`.
    pub(crate) fn embedded(&self, n: u32, f: impl Fn(u64) -> u64) -> Chain {
        Chain {
            nodes: self
                .nodes
                .iter()
                .map(|a| NodeSet::from_bits_unchecked(n, f(a.bits())))
                .collect(),
        }
    }

    fn map_bits(&self, f: impl Fn(u64) -> u64) -> Chain {
        Chain {
            nodes: self
                .nodes
                .iter()
                .map(|a| NodeSet::from_bits_unchecked(a.ground(), f(a.bits())))
                .collect(),
        }
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.nodes.serialize(serializer)
    }
}

/// A partition of `2^[k]` into chains of at most `max_size` nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPartition {
    k: u32,
    max_size: usize,
    chains: Vec<Chain>,
}

impl ChainPartition {
    /// Validates that `chains` are disjoint, cover `2^[k]` and respect the
    /// size bound.
    pub fn new(k: u32, max_size: usize, chains: Vec<Chain>) -> Result<Self> {
        if k >= MAX_GROUND {
            return domain(format!("cannot partition 2^[{k}]"));
        }
        let mut seen = HashSet::new();
        for chain in &chains {
            if chain.size() > max_size {
                return domain(format!("chain of size {} exceeds {max_size}", chain.size()));
            }
            for &a in chain.nodes() {
                if a.ground() != k {
                    return domain(format!("{a} is not a subset of [{k}]"));
                }
                if !seen.insert(a.bits()) {
                    return domain(format!("{a} appears in two chains"));
                }
            }
        }
        if seen.len() as u64 != 1u64 << k {
            return domain(format!("chains cover {} of {} nodes", seen.len(), 1u64 << k));
        }
        Ok(Self { k, max_size, chains })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }
}

impl Serialize for ChainPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.chains.len()))?;
        for chain in &self.chains {
            seq.serialize_element(chain)?;
        }
        seq.end()
    }
}

/// de Bruijn's symmetric chain recursion, modified so that chains stop
/// growing once they hold `max_size` nodes.
///
/// Starting from the single chain `(∅)` of `2^[0]`, each step from `2^[t]`
/// to `2^[t+1]` (new element `e = t + 1`) maps a chain `A_1 ⊂ .. ⊂ A_r` to
///
/// * `A_1 ⊂ A_1 ∪ {e}` when `r = 1 < max_size`,
/// * `A_1 ⊂ .. ⊂ A_r ⊂ A_r ∪ {e}` and `A_1 ∪ {e} ⊂ .. ⊂ A_{r-1} ∪ {e}` when
///   `2 <= r < max_size`,
/// * the chain itself and its full shift `A_1 ∪ {e} ⊂ .. ⊂ A_r ∪ {e}` when
///   `r = max_size`.
///
/// With `max_size = k + 1` this is the plain symmetric chain decomposition.
/// Chains are returned ordered by the numeric value of their bottom node.
pub fn griggs_partition(k: u32, max_size: usize) -> Result<ChainPartition> {
    if max_size == 0 {
        return domain("maximum chain size must be at least 1");
    }
    if k >= MAX_GROUND {
        return domain(format!("cannot partition 2^[{k}]"));
    }
    let mut chains: Vec<Vec<u64>> = vec![vec![0]];
    for t in 0..k {
        let e = 1u64 << t;
        let mut next = Vec::with_capacity(chains.len() * 2);
        for chain in chains {
            let r = chain.len();
            if r < max_size {
                // r == 1 is the same rule with an empty shifted copy.
                let shifted: Vec<u64> = chain[..r - 1].iter().map(|a| a | e).collect();
                let mut grown = chain;
                grown.push(grown[r - 1] | e);
                next.push(grown);
                if !shifted.is_empty() {
                    next.push(shifted);
                }
            } else {
                let shifted = chain.iter().map(|a| a | e).collect();
                next.push(chain);
                next.push(shifted);
            }
        }
        chains = next;
    }
    chains.sort_unstable_by_key(|c| c[0]);
    let chains = chains
        .into_iter()
        .map(|c| {
            Chain::from_nodes_unchecked(
                c.into_iter()
                    .map(|bits| NodeSet::from_bits_unchecked(k, bits))
                    .collect(),
            )
        })
        .collect();
    ChainPartition::new(k, max_size, chains)
}

/// How many chains start at each level.
pub fn start_level_counts(chains: &[Chain]) -> BTreeMap<u32, usize> {
    let mut counts = BTreeMap::new();
    for chain in chains {
        *counts.entry(chain.bottom().level()).or_insert(0) += 1;
    }
    counts
}

/// A pair of nodes `A_i ⊆ B_j` with `i > j` (1-based positions within their
/// chains).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexViolation {
    pub lower_chain: usize,
    pub lower_position: usize,
    pub upper_chain: usize,
    pub upper_position: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub violations: Vec<IndexViolation>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `A_i ⊆ B_j` implies `i <= j` for every ordered pair of chains.
pub fn check_index_monotonicity(chains: &[Chain]) -> MonotonicityReport {
    let entries: Vec<(u64, usize, usize)> = chains
        .iter()
        .enumerate()
        .flat_map(|(c, chain)| chain.nodes().iter().enumerate().map(move |(i, a)| (a.bits(), c, i + 1)))
        .collect();
    let mut violations = Vec::new();
    for &(a, ca, i) in &entries {
        for &(b, cb, j) in &entries {
            if i > j && a & !b == 0 {
                violations.push(IndexViolation {
                    lower_chain: ca,
                    lower_position: i,
                    upper_chain: cb,
                    upper_position: j,
                });
            }
        }
    }
    MonotonicityReport { violations }
}
