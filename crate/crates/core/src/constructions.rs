//! Explicit cutsets of `B_n(m, l)` built from disjoint saturated chains.
//!
//! | builder | lattice | chains |
//! |---|---|---|
//! | [`cutset_level`] | `B_n(m, m)` | `C(n, m)` |
//! | [`cutset_bicolor`] | `B_n(m, m+1)` | `C(n-1, m)` |
//! | [`cutset_fourcolor`] | `B_n(m, m+2)` | `Σ_j C(n-2j-2, m-j)` |
//! | [`cutset_product`] | `B_n(m, l)`, `l >= 2m` | `C(n, m) - C(n, m-1)` |
//!
//! Every chain of the three non-trivial builders starts on level `m`, so the
//! chain bottoms form an antichain and the width equals the chain count.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chains::{griggs_partition, Chain};
use crate::error::{domain, Error, Result};
use crate::lattice::{subsets_of_size, NodeSet, TruncatedLattice};
use crate::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Level,
    Bicolor,
    Fourcolor,
    Product,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Level, Method::Bicolor, Method::Fourcolor, Method::Product];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Level => "level",
            Method::Bicolor => "bicolor",
            Method::Fourcolor => "fourcolor",
            Method::Product => "product",
        }
    }

    /// Runs this builder on `B_n(m, l)`.
    pub fn build(self, n: u32, m: u32, l: u32) -> Result<Cutset> {
        let implied = match self {
            Method::Level => Some(m),
            Method::Bicolor => Some(m + 1),
            Method::Fourcolor => Some(m + 2),
            Method::Product => None,
        };
        if let Some(top) = implied {
            if top != l {
                return domain(format!("the {self} construction lives in B_n(m,{top}), not l = {l}"));
            }
        }
        match self {
            Method::Level => cutset_level(n, m),
            Method::Bicolor => cutset_bicolor(n, m),
            Method::Fourcolor => cutset_fourcolor(n, m),
            Method::Product => cutset_product(n, m, l),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown construction method {s:?}")))
    }
}

/// A family of disjoint chains inside a truncated lattice whose union is
/// meant to be a cutset. The chains double as a width certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cutset {
    lattice: TruncatedLattice,
    method: Option<Method>,
    chains: Vec<Chain>,
}

impl Cutset {
    /// Checks that every chain lies in the lattice and that chains are
    /// pairwise disjoint.
    pub fn new(lattice: TruncatedLattice, method: Option<Method>, chains: Vec<Chain>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for a in chains.iter().flat_map(|c| c.nodes()) {
            if !lattice.contains(*a) {
                return domain(format!("{a} is not a node of {lattice}"));
            }
            if !seen.insert(a.bits()) {
                return domain(format!("{a} appears in two chains"));
            }
        }
        Ok(Self {
            lattice,
            method,
            chains,
        })
    }

    fn from_builder(lattice: TruncatedLattice, method: Method, mut chains: Vec<Chain>) -> Self {
        chains.sort_unstable_by_key(|c| c.bottom().bits());
        debug_assert!(Cutset::new(lattice, Some(method), chains.clone()).is_ok());
        Self {
            lattice,
            method: Some(method),
            chains,
        }
    }

    pub fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    pub fn method(&self) -> Option<Method> {
        self.method
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    /// The union of all chains, in numeric order.
    pub fn nodes(&self) -> Vec<NodeSet> {
        let mut nodes: Vec<NodeSet> = self.chains.iter().flat_map(|c| c.nodes().iter().copied()).collect();
        nodes.sort_unstable();
        nodes
    }

    /// Lowest and highest level touched by any chain.
    pub fn levels_used(&self) -> Option<(u32, u32)> {
        let lo = self.chains.iter().map(|c| c.bottom().level()).min()?;
        let hi = self.chains.iter().map(|c| c.top().level()).max()?;
        Some((lo, hi))
    }

    /// The same chains viewed inside `B_n(m, l')`.
    pub fn with_top(&self, l: u32) -> Result<Cutset> {
        let lattice = TruncatedLattice::new(self.lattice.n(), self.lattice.m(), l)?;
        Cutset::new(lattice, self.method, self.chains.clone())
    }

    pub fn to_file(&self) -> CutsetFile {
        CutsetFile {
            format: FORMAT_VERSION,
            n: self.lattice.n(),
            m: self.lattice.m(),
            l: self.lattice.l(),
            method: self.method,
            chains: self
                .chains
                .iter()
                .map(|c| c.nodes().iter().map(|a| a.elements().collect()).collect())
                .collect(),
        }
    }
}

/// On-disk form of a cutset:
/// `{"format": 1, "n", "m", "l", "method"?, "chains": [[[1,3], ..], ..]}`.
///
/// Chains read from a file are only required to be lists of node sets; they
/// need not be saturated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutsetFile {
    pub format: u32,
    pub n: u32,
    pub m: u32,
    pub l: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    pub chains: Vec<Vec<Vec<u32>>>,
}

impl CutsetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CutsetFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.format != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {}", file.format)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cutset files always serialize")
    }

    pub fn lattice(&self) -> Result<TruncatedLattice> {
        TruncatedLattice::new(self.n, self.m, self.l)
    }

    /// Chains as node sets. Fails on elements outside `[n]`.
    pub fn node_chains(&self) -> Result<Vec<Vec<NodeSet>>> {
        self.chains
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|elems| NodeSet::from_elements(self.n, elems.iter().copied()))
                    .collect()
            })
            .collect()
    }

    /// Distinct nodes of all chains, in numeric order.
    pub fn nodes(&self) -> Result<Vec<NodeSet>> {
        let mut nodes: Vec<NodeSet> = self.node_chains()?.into_iter().flatten().collect();
        nodes.sort_unstable();
        nodes.dedup();
        Ok(nodes)
    }
}

fn node(n: u32, bits: u64) -> NodeSet {
    NodeSet::from_bits_unchecked(n, bits)
}

/// The whole level `m`, as `C(n, m)` singleton chains.
pub fn cutset_level(n: u32, m: u32) -> Result<Cutset> {
    let lattice = TruncatedLattice::new(n, m, m)?;
    let chains = crate::lattice::level_nodes(n, m)?
        .into_iter()
        .map(Chain::singleton)
        .collect();
    Ok(Cutset::from_builder(lattice, Method::Level, chains))
}

/// Nodes avoiding element 1 on level `m`, each paired with its union with
/// `{1}` on level `m + 1`.
pub fn cutset_bicolor(n: u32, m: u32) -> Result<Cutset> {
    if n < m + 1 {
        return domain(format!("bicolor construction needs n >= m + 1, got n={n} m={m}"));
    }
    let lattice = TruncatedLattice::new(n, m, m + 1)?;
    let rest = full_bits(n) & !1;
    let chains = subsets_of_size(rest, m)
        .into_iter()
        .map(|b| Chain::from_nodes_unchecked(vec![node(n, b), node(n, b | 1)]))
        .collect();
    Ok(Cutset::from_builder(lattice, Method::Bicolor, chains))
}

fn full_bits(n: u32) -> u64 {
    NodeSet::full(n).map(NodeSet::bits).unwrap_or(u64::MAX)
}

/// Four-color recursion for `B_n(m, m+2)`, `n >= 2m + 2`.
///
/// Stage 0 takes every `m`-subset `B` of `[n] \ {1,2}` and emits
/// `B ⊂ B ∪ {1} ⊂ B ∪ {1,2}`. Chains missing all of these run through nodes
/// containing 2 but not 1, which form a copy of `B_{n-2}(m-1, m+1)`; that copy
/// is solved recursively and embedded by `X ↦ {2} ∪ (X + 2)`.
pub fn cutset_fourcolor(n: u32, m: u32) -> Result<Cutset> {
    if n < 2 * m + 2 {
        return domain(format!("four-color construction needs n >= 2m + 2, got n={n} m={m}"));
    }
    let lattice = TruncatedLattice::new(n, m, m + 2)?;
    Ok(Cutset::from_builder(lattice, Method::Fourcolor, fourcolor_chains(n, m)))
}

fn fourcolor_chains(n: u32, m: u32) -> Vec<Chain> {
    let rest = full_bits(n) & !0b11;
    let mut chains: Vec<Chain> = subsets_of_size(rest, m)
        .into_iter()
        .map(|b| Chain::from_nodes_unchecked(vec![node(n, b), node(n, b | 0b01), node(n, b | 0b11)]))
        .collect();
    if m > 0 {
        chains.extend(
            fourcolor_chains(n - 2, m - 1)
                .iter()
                .map(|c| c.embedded(n, |x| x << 2 | 0b10)),
        );
    }
    chains
}

/// Color-class lift over the bounded chain partition of `2^[2m]`, for
/// `2m <= l <= n - m`.
///
/// For every chain `C_j ⊂ .. ⊂ C_k` of `griggs_partition(2m, m + 1)` with
/// `|C_i| = i`, and every `(m - j)`-subset `S` of `[n] \ [2m]`, emits
/// `C_j ∪ S ⊂ .. ⊂ C_k ∪ S`, spanning levels `m ..= m + k - j`.
pub fn cutset_product(n: u32, m: u32, l: u32) -> Result<Cutset> {
    if !(2 * m <= l && l + m <= n) {
        return domain(format!(
            "product construction needs 2m <= l <= n - m, got n={n} m={m} l={l}"
        ));
    }
    let lattice = TruncatedLattice::new(n, m, l)?;
    let colors = griggs_partition(2 * m, m as usize + 1)?;
    let outside = full_bits(n) & !full_bits(2 * m);
    let mut chains = Vec::new();
    for color_chain in colors.chains() {
        let j = color_chain.bottom().level();
        if j > m {
            continue;
        }
        let lifted = color_chain.embedded(n, |x| x);
        for s in subsets_of_size(outside, m - j) {
            chains.push(lifted.lifted(s));
        }
    }
    Ok(Cutset::from_builder(lattice, Method::Product, chains))
}

/// Every builder whose domain contains `B_n(m, l)`, `m <= l <= n - m`.
pub fn applicable_methods(n: u32, m: u32, l: u32) -> Vec<Method> {
    let mut methods = Vec::new();
    if l == m {
        methods.push(Method::Level);
    }
    if l == m + 1 {
        methods.push(Method::Bicolor);
    }
    if l == m + 2 && n >= 2 * m + 2 {
        methods.push(Method::Fourcolor);
    }
    if l >= 2 * m {
        methods.push(Method::Product);
    }
    methods
}

/// Picks the applicable builder with the fewest chains; ties go to the
/// later construction (level < bicolor < fourcolor < product).
pub fn cutset_auto(n: u32, m: u32, l: u32) -> Result<Cutset> {
    TruncatedLattice::standard(n, m, l)?;
    let mut best: Option<Cutset> = None;
    for method in applicable_methods(n, m, l) {
        let cutset = method.build(n, m, l)?;
        if best.as_ref().map_or(true, |b| cutset.chain_count() <= b.chain_count()) {
            best = Some(cutset);
        }
    }
    best.ok_or(Error::NoConstruction { n, m, l })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: u32, elems: &[u32]) -> NodeSet {
        NodeSet::from_elements(n, elems.iter().copied()).unwrap()
    }

    fn chain(n: u32, nodes: &[&[u32]]) -> Chain {
        Chain::new(nodes.iter().map(|e| set(n, e)).collect()).unwrap()
    }

    fn binom(n: i64, k: i64) -> i64 {
        if k < 0 || k > n || n < 0 {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn level_examples() {
        let c = cutset_level(3, 1).unwrap();
        assert_eq!(c.chains(), &[chain(3, &[&[1]]), chain(3, &[&[2]]), chain(3, &[&[3]])]);
        assert_eq!(cutset_level(4, 0).unwrap().nodes(), vec![NodeSet::empty(4).unwrap()]);
        assert_eq!(cutset_level(4, 2).unwrap().chain_count(), 6);
        assert!(cutset_level(2, 3).is_err());
    }

    #[test]
    fn bicolor_examples() {
        let c = cutset_bicolor(4, 1).unwrap();
        assert_eq!(
            c.chains(),
            &[
                chain(4, &[&[2], &[1, 2]]),
                chain(4, &[&[3], &[1, 3]]),
                chain(4, &[&[4], &[1, 4]]),
            ]
        );
        assert_eq!(cutset_bicolor(2, 0).unwrap().chains(), &[chain(2, &[&[], &[1]])]);
        assert_eq!(cutset_bicolor(8, 2).unwrap().chain_count(), 21);
        assert!(cutset_bicolor(2, 2).is_err());
    }

    #[test]
    fn fourcolor_examples() {
        let c = cutset_fourcolor(6, 1).unwrap();
        assert_eq!(c.chain_count(), 5);
        for x in 3..=6 {
            assert!(c.chains().contains(&chain(6, &[&[x], &[1, x], &[1, 2, x]])));
        }
        assert!(c.chains().contains(&chain(6, &[&[2], &[2, 3], &[2, 3, 4]])));
        assert_eq!(
            cutset_fourcolor(2, 0).unwrap().chains(),
            &[chain(2, &[&[], &[1], &[1, 2]])]
        );
        assert_eq!(cutset_fourcolor(8, 2).unwrap().chain_count(), 20);
        assert!(cutset_fourcolor(5, 2).is_err());
    }

    #[test]
    fn product_examples() {
        let c = cutset_product(4, 1, 2).unwrap();
        assert_eq!(
            c.chains(),
            &[
                chain(4, &[&[2], &[1, 2]]),
                chain(4, &[&[3], &[1, 3]]),
                chain(4, &[&[4], &[1, 4]]),
            ]
        );
        for l in 0..=3 {
            let c = cutset_product(3, 0, l).unwrap();
            assert_eq!(c.chains(), &[Chain::singleton(NodeSet::empty(3).unwrap())]);
        }
        assert_eq!(cutset_product(7, 2, 4).unwrap().chain_count(), 14);
        assert!(cutset_product(7, 2, 3).is_err());
        assert!(cutset_product(7, 2, 6).is_err());
    }

    #[test]
    fn product_stays_below_level_2m() {
        let c = cutset_product(9, 2, 7).unwrap();
        assert_eq!(c.levels_used(), Some((2, 4)));
        assert!(c.with_top(4).is_ok());
    }

    #[test]
    fn auto_dispatch() {
        let c = cutset_auto(6, 2, 3).unwrap();
        assert_eq!((c.method(), c.chain_count()), (Some(Method::Bicolor), 10));
        let c = cutset_auto(6, 1, 2).unwrap();
        assert_eq!((c.method(), c.chain_count()), (Some(Method::Product), 5));
        assert_eq!(cutset_auto(11, 4, 7), Err(Error::NoConstruction { n: 11, m: 4, l: 7 }));
        assert_eq!(cutset_auto(9, 3, 5).unwrap().method(), Some(Method::Fourcolor));
        // l = m + 2 with n < 2m + 2 already violates l <= n - m.
        assert!(matches!(cutset_auto(7, 3, 5), Err(Error::Domain(_))));
        assert!(cutset_auto(4, 1, 4).is_err());
    }

    #[test]
    fn closed_form_counts() {
        for n in 0..=12i64 {
            for m in 0..=n {
                if n > m {
                    assert_eq!(
                        cutset_bicolor(n as u32, m as u32).unwrap().chain_count() as i64,
                        binom(n - 1, m)
                    );
                }
                if n >= 2 * m + 2 {
                    let expected: i64 = (0..=m).map(|j| binom(n - 2 * j - 2, m - j)).sum();
                    assert_eq!(
                        cutset_fourcolor(n as u32, m as u32).unwrap().chain_count() as i64,
                        expected
                    );
                }
                for l in 2 * m..=n - m {
                    let c = cutset_product(n as u32, m as u32, l as u32).unwrap();
                    assert_eq!(c.chain_count() as i64, binom(n, m) - binom(n, m - 1));
                }
            }
        }
    }

    #[test]
    fn bottoms_sit_on_level_m() {
        let all = [cutset_bicolor(8, 3), cutset_fourcolor(9, 3), cutset_product(10, 3, 6)];
        for c in all {
            let c = c.unwrap();
            let m = c.lattice().m();
            assert!(c.chains().iter().all(|ch| ch.bottom().level() == m));
        }
    }

    #[test]
    fn file_round_trip() {
        let c = cutset_product(5, 1, 3).unwrap();
        let text = c.to_file().to_json();
        let back = CutsetFile::from_json(&text).unwrap();
        assert_eq!(back, c.to_file());
        assert_eq!(back.nodes().unwrap(), c.nodes());
        assert!(text.contains("\"format\": 1"));
        assert!(CutsetFile::from_json("{\"format\":2,\"n\":1,\"m\":0,\"l\":0,\"chains\":[]}").is_err());
    }
}
