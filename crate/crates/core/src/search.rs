//! Exact computation of `h_n(m, l)` and `g_n(m, l)` on small lattices.
//!
//! * `h_n(m, l)`: the minimum width of a cutset of `B_n(m, l)`.
//! * `g_n(m, l)`: the minimum `k` such that some cutset has at most `k` nodes
//!   on every level.
//!
//! Both are found by iterative deepening on the bound. Each decision problem
//! ("is there a cutset within bound `b`?") is a branch-and-bound over
//! maximal chains: take the lexicographically least maximal chain that the
//! current selection misses and branch on which of its nodes to add. Sibling
//! branches exclude the nodes tried before them, so each cutset is reached
//! at most once. A branch is pruned when the selection exceeds the bound
//! (width is maintained by one incremental augmentation per added node) or
//! when some maximal chain consists only of excluded nodes.

use std::collections::HashMap;
use std::io;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::analysis::{is_cutset, superset_lists, width};
use crate::constructions::{cutset_auto, CutsetFile, Method};
use crate::error::{Error, Result};
use crate::formulas::{conjecture2_symmetric_value, conjecture_h_value, g_exact_value};
use crate::lattice::{level_nodes, NodeSet, TruncatedLattice};
use crate::matching::{Matcher, Snapshot};
use crate::FORMAT_VERSION;

/// Default limit on lattice size for exhaustive search.
pub const DEFAULT_NODE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes_expanded: u64,
    pub wall_clock_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes_expanded: 200_000_000,
            wall_clock_limit: Duration::from_secs(120),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Largest lattice (in nodes) the search accepts.
    pub node_cap: usize,
    /// Worker threads for the root branches. Never changes the value found.
    pub threads: usize,
    /// Canonical pruning under the symmetric group acting on `[n]`: the
    /// lowest level holding a selected node is assumed to hold `[i]`.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            node_cap: DEFAULT_NODE_CAP,
            threads: 1,
            symmetry: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Minimum cutset width.
    H,
    /// Minimum per-level node count.
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Exact,
    LowerAndUpperBounds,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// An optimal cutset found by the search, with a chain cover of minimum size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchWitness {
    pub nodes: Vec<NodeSet>,
    pub chain_cover: Vec<Vec<NodeSet>>,
    pub width: usize,
    pub max_per_level: usize,
}

impl SearchWitness {
    fn new(lat: &TruncatedLattice, nodes: Vec<NodeSet>) -> Result<Self> {
        let report = width(&nodes)?;
        let mut per_level = vec![0usize; lat.level_count() as usize];
        for a in &nodes {
            per_level[(a.level() - lat.m()) as usize] += 1;
        }
        Ok(Self {
            max_per_level: per_level.into_iter().max().unwrap_or(0),
            width: report.width,
            chain_cover: report.chain_cover,
            nodes,
        })
    }

    fn measure(&self, target: Target) -> usize {
        match target {
            Target::H => self.width,
            Target::G => self.max_per_level,
        }
    }

    /// Cutset file whose chains are the minimum chain cover.
    pub fn to_file(&self, lat: &TruncatedLattice) -> CutsetFile {
        CutsetFile {
            format: FORMAT_VERSION,
            n: lat.n(),
            m: lat.m(),
            l: lat.l(),
            method: None,
            chains: self
                .chain_cover
                .iter()
                .map(|c| c.iter().map(|a| a.elements().collect()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub target: Target,
    pub lattice: TruncatedLattice,
    pub status: SearchStatus,
    pub value: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    pub witness: Option<SearchWitness>,
    pub stats: SearchStats,
}

#[derive(Serialize)]
struct StatsJson {
    nodes_expanded: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct SearchResultJson {
    format: u32,
    target: Target,
    n: u32,
    m: u32,
    l: u32,
    status: SearchStatus,
    value: Option<usize>,
    lower: usize,
    upper: usize,
    witness: Option<CutsetFile>,
    stats: StatsJson,
}

impl SearchResult {
    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = SearchResultJson {
            format: FORMAT_VERSION,
            target: self.target,
            n: self.lattice.n(),
            m: self.lattice.m(),
            l: self.lattice.l(),
            status: self.status,
            value: self.value,
            lower: self.lower,
            upper: self.upper,
            witness: self.witness.as_ref().map(|w| w.to_file(&self.lattice)),
            stats: StatsJson {
                nodes_expanded: self.stats.nodes_expanded,
                elapsed_ms: self.stats.elapsed.as_millis(),
            },
        };
        serde_json::to_value(json).expect("search results always serialize")
    }

    /// `7`, `3..5` or `UNKNOWN`.
    pub fn cell(&self) -> String {
        match (self.status, self.value) {
            (SearchStatus::Exact, Some(v)) => v.to_string(),
            (SearchStatus::LowerAndUpperBounds, _) => format!("{}..{}", self.lower, self.upper),
            _ => "UNKNOWN".to_string(),
        }
    }
}

/// Index-based view of the lattice, nodes in numeric order.
struct Instance {
    nodes: Vec<NodeSet>,
    /// Level above `m`.
    level: Vec<usize>,
    /// Upper covers within the lattice, ascending.
    covers: Vec<Vec<usize>>,
    /// Strict supersets within the lattice, ascending.
    up: Vec<Vec<usize>>,
    /// Indices from the top level down.
    top_down: Vec<usize>,
    bottoms: Vec<usize>,
    top: usize,
}

impl Instance {
    fn new(lat: TruncatedLattice) -> Self {
        let mut nodes = lat.nodes();
        nodes.sort_unstable();
        let index: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, a)| (a.bits(), i)).collect();
        let level: Vec<usize> = nodes.iter().map(|a| (a.level() - lat.m()) as usize).collect();
        let top = (lat.l() - lat.m()) as usize;
        let covers = nodes
            .iter()
            .map(|a| {
                let mut cs: Vec<usize> = (0..lat.n())
                    .filter_map(|i| index.get(&(a.bits() | 1 << i)).copied())
                    .filter(|&j| nodes[j] != *a)
                    .collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        let mut top_down: Vec<usize> = (0..nodes.len()).collect();
        top_down.sort_by_key(|&i| std::cmp::Reverse(level[i]));
        let bottoms = (0..nodes.len()).filter(|&i| level[i] == 0).collect();
        Self {
            up: superset_lists(&nodes),
            nodes,
            level,
            covers,
            top_down,
            bottoms,
            top,
        }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    Width(usize),
    PerLevel(usize),
}

enum Outcome {
    Found(Vec<usize>),
    Infeasible,
    Aborted,
}

/// Shared across workers of one decision problem.
struct Control {
    budget: SearchBudget,
    started: Instant,
    expanded: AtomicU64,
    out_of_budget: AtomicBool,
    /// Smallest root branch known to contain a solution.
    found_child: AtomicUsize,
}

impl Control {
    fn tick(&self, child: usize) -> bool {
        if self.found_child.load(Ordering::Relaxed) < child || self.out_of_budget.load(Ordering::Relaxed) {
            return false;
        }
        let count = self.expanded.fetch_add(1, Ordering::Relaxed) + 1;
        let over = count > self.budget.max_nodes_expanded
            || (count % 1024 == 0 && self.started.elapsed() > self.budget.wall_clock_limit);
        if over {
            self.out_of_budget.store(true, Ordering::Relaxed);
        }
        !over
    }
}

struct Solver<'a> {
    inst: &'a Instance,
    bound: Bound,
    selected: Vec<bool>,
    forbidden: Vec<bool>,
    per_level: Vec<usize>,
    matcher: Matcher,
    snapshots: Vec<Snapshot>,
    good: Vec<bool>,
    trapped: Vec<bool>,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a Instance, bound: Bound) -> Self {
        let n = inst.len();
        let matcher = match bound {
            Bound::Width(_) => Matcher::new(inst.up.clone()),
            Bound::PerLevel(_) => Matcher::new(vec![Vec::new(); n]),
        };
        Self {
            inst,
            bound,
            selected: vec![false; n],
            forbidden: vec![false; n],
            per_level: vec![0; inst.top + 1],
            matcher,
            snapshots: Vec::new(),
            good: vec![false; n],
            trapped: vec![false; n],
        }
    }

    /// Adds `x`; reports whether the selection still meets the bound.
    fn push(&mut self, x: usize) -> bool {
        self.selected[x] = true;
        self.per_level[self.inst.level[x]] += 1;
        match self.bound {
            Bound::Width(w) => {
                self.snapshots.push(self.matcher.snapshot());
                self.matcher.activate(x);
                self.matcher.width() <= w
            }
            Bound::PerLevel(k) => self.per_level[self.inst.level[x]] <= k,
        }
    }

    fn pop(&mut self, x: usize) {
        self.selected[x] = false;
        self.per_level[self.inst.level[x]] -= 1;
        if let Bound::Width(_) = self.bound {
            let snap = self.snapshots.pop().expect("push/pop are paired");
            self.matcher.restore(snap, x);
        }
    }

    /// The least maximal chain avoiding the selection, or `Err(())` when some
    /// maximal chain runs entirely through excluded nodes.
    fn scan(&mut self) -> Result<Option<Vec<usize>>, ()> {
        let inst = self.inst;
        for &v in &inst.top_down {
            let at_top = inst.level[v] == inst.top;
            self.good[v] = !self.selected[v] && (at_top || inst.covers[v].iter().any(|&c| self.good[c]));
            self.trapped[v] = self.forbidden[v] && (at_top || inst.covers[v].iter().any(|&c| self.trapped[c]));
        }
        if inst.bottoms.iter().any(|&b| self.trapped[b]) {
            return Err(());
        }
        let Some(&start) = inst.bottoms.iter().find(|&&b| self.good[b]) else {
            return Ok(None);
        };
        let mut chain = vec![start];
        let mut at = start;
        while inst.level[at] < inst.top {
            at = *inst.covers[at]
                .iter()
                .find(|&&c| self.good[c])
                .expect("good nodes below the top have a good cover");
            chain.push(at);
        }
        Ok(Some(chain))
    }

    fn selection(&self) -> Vec<usize> {
        (0..self.inst.len()).filter(|&i| self.selected[i]).collect()
    }

    fn dfs(&mut self, control: &Control, child: usize) -> Outcome {
        if !control.tick(child) {
            return Outcome::Aborted;
        }
        let chain = match self.scan() {
            Err(()) => return Outcome::Infeasible,
            Ok(None) => return Outcome::Found(self.selection()),
            Ok(Some(chain)) => chain,
        };
        // Chain indices are already in numeric order only level by level.
        let mut order = chain;
        order.sort_unstable();
        let mut excluded = Vec::new();
        let mut outcome = Outcome::Infeasible;
        for x in order {
            if self.forbidden[x] {
                continue;
            }
            if self.push(x) {
                match self.dfs(control, child) {
                    Outcome::Infeasible => {}
                    other => {
                        outcome = other;
                        self.pop(x);
                        break;
                    }
                }
            }
            self.pop(x);
            self.forbidden[x] = true;
            excluded.push(x);
        }
        for x in excluded {
            self.forbidden[x] = false;
        }
        outcome
    }
}

/// Solves one decision problem, splitting the root chain across workers.
fn decide(inst: &Instance, bound: Bound, options: &SearchOptions, control: &Control) -> Outcome {
    let mut root = Solver::new(inst, bound);
    let root_chain = match root.scan() {
        Err(()) => return Outcome::Infeasible,
        Ok(None) => return Outcome::Found(Vec::new()),
        Ok(Some(chain)) => chain,
    };
    let mut order = root_chain;
    order.sort_unstable();
    if !control.tick(0) {
        return Outcome::Aborted;
    }

    let run_child = |i: usize| -> Outcome {
        let mut solver = Solver::new(inst, bound);
        for &x in &order[..i] {
            solver.forbidden[x] = true;
        }
        if options.symmetry {
            // Every node strictly below the chosen one's level is excluded.
            let lvl = inst.level[order[i]];
            for v in 0..inst.len() {
                if inst.level[v] < lvl {
                    solver.forbidden[v] = true;
                }
            }
        }
        if !solver.push(order[i]) {
            return Outcome::Infeasible;
        }
        solver.dfs(control, i)
    };

    let threads = options.threads.max(1).min(order.len());
    let mut outcomes: Vec<Option<Outcome>> = (0..order.len()).map(|_| None).collect();
    if threads <= 1 {
        for (i, slot) in outcomes.iter_mut().enumerate() {
            let outcome = run_child(i);
            let stop = !matches!(outcome, Outcome::Infeasible);
            *slot = Some(outcome);
            if stop {
                break;
            }
        }
    } else {
        let next = AtomicUsize::new(0);
        let results = std::sync::Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= order.len() || control.found_child.load(Ordering::Relaxed) < i {
                        break;
                    }
                    let outcome = run_child(i);
                    if matches!(outcome, Outcome::Found(_)) {
                        control.found_child.fetch_min(i, Ordering::Relaxed);
                    }
                    results
                        .lock()
                        .expect("no worker panics while holding the lock")
                        .push((i, outcome));
                });
            }
        });
        for (i, outcome) in results.into_inner().expect("workers finished") {
            outcomes[i] = Some(outcome);
        }
    }

    // The first branch with a solution wins, exactly as a sequential run.
    let mut aborted = false;
    for outcome in outcomes.into_iter().flatten() {
        match outcome {
            Outcome::Found(sel) => return Outcome::Found(sel),
            Outcome::Aborted => aborted = true,
            Outcome::Infeasible => {}
        }
    }
    if aborted || control.out_of_budget.load(Ordering::Relaxed) {
        Outcome::Aborted
    } else {
        Outcome::Infeasible
    }
}

/// A verified cutset bounding the answer from above.
fn initial_upper(lat: &TruncatedLattice, target: Target) -> Result<SearchWitness> {
    let level = SearchWitness::new(lat, level_nodes(lat.n(), lat.m())?)?;
    let construction = cutset_auto(lat.n(), lat.m(), lat.l())
        .ok()
        .map(|c| c.nodes())
        .filter(|nodes| is_cutset(lat, nodes).is_ok_and(|r| r.is_cutset))
        .map(|nodes| SearchWitness::new(lat, nodes))
        .transpose()?;
    Ok(match construction {
        Some(c) if c.measure(target) < level.measure(target) => c,
        _ => level,
    })
}

fn search(n: u32, m: u32, l: u32, target: Target, options: &SearchOptions) -> Result<SearchResult> {
    let started = Instant::now();
    let lat = TruncatedLattice::standard(n, m, l)?;
    let nodes = lat.node_count();
    if nodes > options.node_cap as u128 {
        return Err(Error::TooLarge {
            nodes,
            cap: options.node_cap,
        });
    }
    let inst = Instance::new(lat);
    let upper_witness = initial_upper(&lat, target)?;
    let upper = upper_witness.measure(target);
    let lower = 1;
    let mut expanded = 0u64;

    let finish = |status, value, lower, witness, expanded| SearchResult {
        target,
        lattice: lat,
        status,
        value,
        lower,
        upper: value.unwrap_or(upper),
        witness,
        stats: SearchStats {
            nodes_expanded: expanded,
            elapsed: started.elapsed(),
        },
    };

    for b in lower..upper {
        let remaining = SearchBudget {
            max_nodes_expanded: options.budget.max_nodes_expanded.saturating_sub(expanded),
            wall_clock_limit: options.budget.wall_clock_limit.saturating_sub(started.elapsed()),
        };
        let control = Control {
            budget: remaining,
            started: Instant::now(),
            expanded: AtomicU64::new(0),
            out_of_budget: AtomicBool::new(false),
            found_child: AtomicUsize::new(usize::MAX),
        };
        let bound = match target {
            Target::H => Bound::Width(b),
            Target::G => Bound::PerLevel(b),
        };
        let outcome = decide(&inst, bound, options, &control);
        expanded += control.expanded.load(Ordering::Relaxed);
        match outcome {
            Outcome::Infeasible => continue,
            Outcome::Found(sel) => {
                let nodes = sel.into_iter().map(|i| inst.nodes[i]).collect();
                let witness = SearchWitness::new(&lat, nodes)?;
                verify(&lat, target, &witness, b)?;
                return Ok(finish(SearchStatus::Exact, Some(b), b, Some(witness), expanded));
            }
            Outcome::Aborted => {
                let status = if b == lower {
                    SearchStatus::Unknown
                } else {
                    SearchStatus::LowerAndUpperBounds
                };
                return Ok(finish(status, None, b, None, expanded));
            }
        }
    }
    verify(&lat, target, &upper_witness, upper)?;
    Ok(finish(
        SearchStatus::Exact,
        Some(upper),
        upper,
        Some(upper_witness),
        expanded,
    ))
}

fn verify(lat: &TruncatedLattice, target: Target, witness: &SearchWitness, value: usize) -> Result<()> {
    if !is_cutset(lat, &witness.nodes)?.is_cutset {
        return Err(Error::WitnessRejected(format!(
            "witness for {lat} misses a maximal chain"
        )));
    }
    if witness.measure(target) != value {
        return Err(Error::WitnessRejected(format!(
            "witness for {lat} measures {} instead of {value}",
            witness.measure(target)
        )));
    }
    Ok(())
}

/// Minimum width of a cutset of `B_n(m, l)`.
pub fn exact_h(n: u32, m: u32, l: u32, options: &SearchOptions) -> Result<SearchResult> {
    search(n, m, l, Target::H, options)
}

/// Minimum per-level bound of a cutset of `B_n(m, l)`.
pub fn exact_g(n: u32, m: u32, l: u32, options: &SearchOptions) -> Result<SearchResult> {
    search(n, m, l, Target::G, options)
}

/// Formula values, the best construction and both searches for one lattice.
/// Nothing here asserts that the conjectures hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub lattice: TruncatedLattice,
    pub conjectured_h: BigUint,
    pub g_formula: Option<BigUint>,
    /// Conjectured `g_n(m, n - m)`, present when `l = n - m`.
    pub symmetric_g: Option<BigUint>,
    pub construction: Option<(Method, usize)>,
    pub searched_h: SearchResult,
    pub searched_g: SearchResult,
}

impl ConjectureReport {
    /// Number of levels `c = l - m + 1`.
    pub fn c(&self) -> u32 {
        self.lattice.level_count()
    }

    /// Comparison tokens, only for values the searches settled exactly.
    pub fn flags(&self) -> Vec<&'static str> {
        let h = self.searched_h.is_exact().then_some(self.searched_h.value).flatten();
        let g = self.searched_g.is_exact().then_some(self.searched_g.value).flatten();
        let big = |x: usize| BigUint::from(x);
        let mut flags = Vec::new();
        if let Some(h) = h {
            flags.push(if big(h) == self.conjectured_h {
                "h=conj"
            } else {
                "h!=conj"
            });
            if let Some((_, count)) = self.construction {
                flags.push(if h == count {
                    "h=constr"
                } else if h < count {
                    "h<constr"
                } else {
                    "h>constr"
                });
            }
        }
        if let (Some(g), Some(h)) = (g, h) {
            flags.push(if g == h {
                "g=h"
            } else if g < h {
                "g<h"
            } else {
                "g>h"
            });
        }
        if let Some(g) = g {
            if let Some(formula) = &self.g_formula {
                flags.push(if big(g) == *formula { "g=thm" } else { "g!=thm" });
            }
            if let Some(sym) = &self.symmetric_g {
                flags.push(if big(g) == *sym { "g=sym" } else { "g!=sym" });
            }
        }
        flags
    }
}

pub fn conjecture_report(n: u32, m: u32, l: u32, options: &SearchOptions) -> Result<ConjectureReport> {
    let lattice = TruncatedLattice::standard(n, m, l)?;
    let (n64, m64, l64) = (u64::from(n), u64::from(m), u64::from(l));
    let construction = match cutset_auto(n, m, l) {
        Ok(c) if is_cutset(&lattice, &c.nodes())?.is_cutset => c.method().map(|method| (method, c.chain_count())),
        _ => None,
    };
    Ok(ConjectureReport {
        lattice,
        conjectured_h: conjecture_h_value(n64, m64, l64)?,
        g_formula: g_exact_value(n64, m64, l64)?,
        symmetric_g: if l + m == n && n >= 1 {
            Some(conjecture2_symmetric_value(n64, m64)?)
        } else {
            None
        },
        construction,
        searched_h: exact_h(n, m, l, options)?,
        searched_g: exact_g(n, m, l, options)?,
    })
}

/// Every `(n, m, l)` with `n`, `m` in range, `m <= l <= n - m` and at most
/// `node_cap` lattice nodes, in lexicographic order.
pub fn report_instances(
    n_range: RangeInclusive<u32>,
    m_range: RangeInclusive<u32>,
    node_cap: usize,
) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for n in n_range.filter(|&n| n <= crate::lattice::MAX_GROUND) {
        for m in m_range.clone().filter(|&m| 2 * m <= n) {
            for l in m..=n - m {
                let lat = TruncatedLattice::new(n, m, l).expect("ranges are valid");
                if lat.node_count() <= node_cap as u128 {
                    out.push((n, m, l));
                }
            }
        }
    }
    out
}

/// Header of the report CSV.
pub const REPORT_COLUMNS: [&str; 10] = [
    "n",
    "m",
    "l",
    "c",
    "conjectured_h",
    "g_formula",
    "construction_count",
    "searched_h",
    "searched_g",
    "flags",
];

/// Writes one CSV row per report, with header [`REPORT_COLUMNS`].
/// Missing values are written as `-`.
pub fn write_report_csv<W: io::Write>(writer: W, reports: &[ConjectureReport]) -> Result<()> {
    let err = |e: csv::Error| Error::Format(e.to_string());
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(REPORT_COLUMNS).map_err(err)?;
    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".to_string());
    for r in reports {
        csv.write_record([
            r.lattice.n().to_string(),
            r.lattice.m().to_string(),
            r.lattice.l().to_string(),
            r.c().to_string(),
            r.conjectured_h.to_string(),
            opt(r.g_formula.as_ref().map(ToString::to_string)),
            opt(r.construction.map(|(_, count)| count.to_string())),
            r.searched_h.cell(),
            r.searched_g.cell(),
            r.flags().join(";"),
        ])
        .map_err(err)?;
    }
    csv.flush().map_err(|e| Error::Format(e.to_string()))
}
