//! Subsets of `[n]` as fixed-width bit vectors and the truncated lattice
//! `B_n(m, l)`.
//!
//! Elements are 1-based: element `i` lives in bit `i - 1`. Every enumeration
//! in this module yields node sets in ascending numeric order of their bit
//! vectors.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{domain, Result};

/// Largest supported ground-set size.
pub const MAX_GROUND: u32 = 64;

/// A subset of `[n] = {1, .., n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    bits: u64,
    n: u8,
}

fn ground_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl NodeSet {
    pub fn empty(n: u32) -> Result<Self> {
        Self::from_bits(n, 0)
    }

    /// The whole ground set `[n]`.
    pub fn full(n: u32) -> Result<Self> {
        Self::from_bits(n, ground_mask(n.min(MAX_GROUND)))
    }

    pub fn from_bits(n: u32, bits: u64) -> Result<Self> {
        if n > MAX_GROUND {
            return domain(format!("ground set size {n} exceeds {MAX_GROUND}"));
        }
        if bits & !ground_mask(n) != 0 {
            return domain(format!("bits {bits:#x} fall outside [{n}]"));
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Builds a node set from 1-based elements. Duplicates are ignored.
    pub fn from_elements<I>(n: u32, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return domain(format!("element {e} is not in [{n}]"));
            }
            bits |= 1 << (e - 1);
        }
        Self::from_bits(n, bits)
    }

    pub(crate) fn from_bits_unchecked(n: u32, bits: u64) -> Self {
        debug_assert!(n <= MAX_GROUND && bits & !ground_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Size of the ground set this node lives in.
    pub fn ground(self) -> u32 {
        u32::from(self.n)
    }

    /// Number of elements, i.e. the level of the node in `2^[n]`.
    pub fn level(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains(self, element: u32) -> bool {
        element >= 1 && element <= self.ground() && self.bits >> (element - 1) & 1 == 1
    }

    /// `self ∪ {element}`.
    pub fn with(self, element: u32) -> Result<Self> {
        if element == 0 || element > self.ground() {
            return domain(format!("element {element} is not in [{}]", self.n));
        }
        Ok(Self::from_bits_unchecked(self.ground(), self.bits | 1 << (element - 1)))
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset(self, other: NodeSet) -> bool {
        self.bits != other.bits && self.is_subset(other)
    }

    /// Neither set contains the other.
    pub fn is_incomparable(self, other: NodeSet) -> bool {
        !self.is_subset(other) && !other.is_subset(self)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let bits = self.bits;
        (0..64u32).filter(move |i| bits >> i & 1 == 1).map(|i| i + 1)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as a JSON array of ascending 1-based elements.
impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.level() as usize))?;
        for e in self.elements() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

/// Spreads the low bits of `compact` over the bit positions in `positions`
/// (ascending). Preserves numeric order.
fn scatter(compact: u64, positions: &[u32]) -> u64 {
    positions
        .iter()
        .enumerate()
        .filter(|(i, _)| compact >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// All `k`-element subsets of the bit mask `within`, as bit vectors in
/// ascending numeric order.
pub(crate) fn subsets_of_size(within: u64, k: u32) -> Vec<u64> {
    let positions: Vec<u32> = (0..64).filter(|i| within >> i & 1 == 1).collect();
    let width = positions.len() as u32;
    if k > width {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    // Gosper's hack over a compact index space; u128 avoids overflow at width 64.
    let limit = 1u128 << width;
    let mut out = Vec::new();
    let mut x: u128 = (1u128 << k) - 1;
    while x < limit {
        out.push(scatter(x as u64, &positions));
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// All `C(n, k)` subsets of `[n]` of size `k`, in ascending numeric order.
pub fn level_nodes(n: u32, k: u32) -> Result<Vec<NodeSet>> {
    if n > MAX_GROUND {
        return domain(format!("ground set size {n} exceeds {MAX_GROUND}"));
    }
    if k > n {
        return domain(format!("level {k} exceeds ground set size {n}"));
    }
    Ok(subsets_of_size(ground_mask(n), k)
        .into_iter()
        .map(|bits| NodeSet::from_bits_unchecked(n, bits))
        .collect())
}

/// The levels `m..=l` of `2^[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedLattice {
    n: u32,
    m: u32,
    l: u32,
}

impl TruncatedLattice {
    /// Requires `m <= l <= n <= 64`.
    pub fn new(n: u32, m: u32, l: u32) -> Result<Self> {
        if n > MAX_GROUND {
            return domain(format!("ground set size {n} exceeds {MAX_GROUND}"));
        }
        if !(m <= l && l <= n) {
            return domain(format!("need 0 <= m <= l <= n, got n={n} m={m} l={l}"));
        }
        Ok(Self { n, m, l })
    }

    /// Like [`TruncatedLattice::new`], additionally enforcing `l <= n - m`.
    pub fn standard(n: u32, m: u32, l: u32) -> Result<Self> {
        let lat = Self::new(n, m, l)?;
        if l > n - m {
            return domain(format!("need l <= n - m, got n={n} m={m} l={l}"));
        }
        Ok(lat)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Number of levels, `l - m + 1`; also the size of a maximal chain.
    pub fn level_count(&self) -> u32 {
        self.l - self.m + 1
    }

    pub fn contains(&self, node: NodeSet) -> bool {
        node.ground() == self.n && (self.m..=self.l).contains(&node.level())
    }

    /// `Σ_{i=m}^{l} C(n, i)`.
    pub fn node_count(&self) -> u128 {
        let mut row = vec![0u128; self.n as usize + 1];
        row[0] = 1;
        for i in 1..=self.n as usize {
            for k in (1..=i).rev() {
                row[k] += row[k - 1];
            }
        }
        row[self.m as usize..=self.l as usize].iter().sum()
    }

    /// Every node, level by level, each level in numeric order.
    pub fn nodes(&self) -> Vec<NodeSet> {
        (self.m..=self.l)
            .flat_map(|k| level_nodes(self.n, k).expect("levels validated at construction"))
            .collect()
    }
}

impl fmt::Display for TruncatedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}({},{})", self.n, self.m, self.l)
    }
}

/// The upper covers of `node` inside `lat`, in numeric order.
pub fn covers_in(lat: &TruncatedLattice, node: NodeSet) -> Result<Vec<NodeSet>> {
    if !lat.contains(node) {
        return domain(format!("{node} is not a node of {lat}"));
    }
    if node.level() >= lat.l() {
        return domain(format!("{node} lies on the top level of {lat}"));
    }
    let n = lat.n();
    let mut out: Vec<NodeSet> = (0..n)
        .filter(|i| node.bits() >> i & 1 == 0)
        .map(|i| NodeSet::from_bits_unchecked(n, node.bits() | 1 << i))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// The color `A ∩ [2m]` of a node, viewed as a subset of `[2m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(NodeSet);

impl Color {
    pub fn as_node(self) -> NodeSet {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn color_of(node: NodeSet, m: u32) -> Result<Color> {
    let width = 2 * m;
    if width > node.ground() {
        return domain(format!("2m = {width} exceeds ground set size {}", node.ground()));
    }
    Ok(Color(NodeSet::from_bits_unchecked(
        width,
        node.bits() & ground_mask(width),
    )))
}
