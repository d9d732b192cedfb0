//! Cutset verification and width measurement.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::lattice::{level_nodes, NodeSet, TruncatedLattice};
use crate::matching::Matcher;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutsetReport {
    pub is_cutset: bool,
    /// The lexicographically least maximal chain (compared bottom-up) that
    /// avoids the input, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missed_chain: Option<Vec<NodeSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthReport {
    pub width: usize,
    #[serde(rename = "antichain")]
    pub antichain_witness: Vec<NodeSet>,
    /// Ascending sequences partitioning the input; not necessarily saturated.
    pub chain_cover: Vec<Vec<NodeSet>>,
}

/// Does `set` meet every maximal chain of `lat`?
///
/// Levels are swept upward keeping the nodes reachable from level `m` without
/// touching `set`; `set` is a cutset exactly when nothing survives to level
/// `l`.
pub fn is_cutset(lat: &TruncatedLattice, set: &[NodeSet]) -> Result<CutsetReport> {
    let mut blocked = HashSet::with_capacity(set.len());
    for &a in set {
        if !lat.contains(a) {
            return domain(format!("{a} is not a node of {lat}"));
        }
        blocked.insert(a.bits());
    }
    let n = lat.n();
    let mut alive: Vec<HashSet<u64>> = Vec::with_capacity(lat.level_count() as usize);
    alive.push(
        level_nodes(n, lat.m())?
            .into_iter()
            .map(NodeSet::bits)
            .filter(|b| !blocked.contains(b))
            .collect(),
    );
    for _ in lat.m()..lat.l() {
        let below = alive.last().expect("at least one level");
        let mut next = HashSet::new();
        for &u in below {
            for i in 0..n {
                let v = u | 1 << i;
                if v != u && !blocked.contains(&v) {
                    next.insert(v);
                }
            }
        }
        alive.push(next);
    }
    if alive.last().map_or(true, HashSet::is_empty) {
        return Ok(CutsetReport {
            is_cutset: true,
            missed_chain: None,
        });
    }

    // Keep only alive nodes that still reach the top, then walk up greedily.
    let mut good: Vec<HashSet<u64>> = vec![HashSet::new(); alive.len()];
    let top = alive.len() - 1;
    good[top] = alive[top].clone();
    for level in (0..top).rev() {
        let (lower, upper) = good.split_at_mut(level + 1);
        let above = &upper[0];
        lower[level] = alive[level]
            .iter()
            .copied()
            .filter(|&u| (0..n).any(|i| u >> i & 1 == 0 && above.contains(&(u | 1 << i))))
            .collect();
    }
    let mut chain = Vec::with_capacity(alive.len());
    let mut at = *good[0]
        .iter()
        .min()
        .expect("a surviving top node has a surviving bottom");
    chain.push(NodeSet::from_bits_unchecked(n, at));
    for level in good.iter().skip(1) {
        at = (0..n)
            .filter(|i| at >> i & 1 == 0)
            .map(|i| at | 1 << i)
            .filter(|v| level.contains(v))
            .min()
            .expect("good nodes have a good cover");
        chain.push(NodeSet::from_bits_unchecked(n, at));
    }
    Ok(CutsetReport {
        is_cutset: false,
        missed_chain: Some(chain),
    })
}

fn sorted_distinct(set: &[NodeSet]) -> Result<Vec<NodeSet>> {
    let mut nodes = set.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(first) = nodes.first() {
        if nodes.iter().any(|a| a.ground() != first.ground()) {
            return domain("node sets over different ground sets");
        }
    }
    Ok(nodes)
}

/// Strict-superset adjacency over `nodes`, ascending.
pub(crate) fn superset_lists(nodes: &[NodeSet]) -> Vec<Vec<usize>> {
    nodes
        .iter()
        .map(|&a| {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &b)| a.is_proper_subset(b))
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// Width of a family of sets via Dilworth's theorem: `|S|` minus a maximum
/// matching of the strict-inclusion bipartite graph. Duplicates are ignored.
///
/// The report carries both certificates, a maximum antichain and a chain
/// cover of the same size.
pub fn width(set: &[NodeSet]) -> Result<WidthReport> {
    let nodes = sorted_distinct(set)?;
    let matcher = Matcher::full(superset_lists(&nodes));
    let antichain: Vec<NodeSet> = matcher.max_antichain().into_iter().map(|i| nodes[i]).collect();
    let chain_cover: Vec<Vec<NodeSet>> = matcher
        .chain_cover()
        .into_iter()
        .map(|c| c.into_iter().map(|i| nodes[i]).collect())
        .collect();
    let width = matcher.width();
    assert_eq!(antichain.len(), width, "antichain certificate has the wrong size");
    assert_eq!(chain_cover.len(), width, "chain cover has the wrong size");
    assert!(is_antichain(&antichain), "antichain certificate is comparable");
    Ok(WidthReport {
        width,
        antichain_witness: antichain,
        chain_cover,
    })
}

/// No member strictly contains another.
pub fn is_antichain(set: &[NodeSet]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, a)| set[i + 1..].iter().all(|b| a == b || a.is_incomparable(*b)))
}
