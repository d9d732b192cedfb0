//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cutset_core::formulas::{binomial, check_identities, conjecture_h_value};
use cutset_core::search::{report_instances, write_report_csv, DEFAULT_NODE_CAP};
use cutset_core::{
    check_index_monotonicity, conjecture_report, cutset_bicolor, cutset_fourcolor, cutset_level, cutset_product,
    exact_g, exact_h, griggs_partition, is_cutset, start_level_counts, width, Cutset, NodeSet, SearchBudget,
    SearchOptions, SearchStatus, TruncatedLattice,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn c(n: u32, k: u32) -> usize {
    binomial(i64::from(n), i64::from(k))
        .unwrap()
        .try_into()
        .expect("small binomial")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every builder output for `n <= max_n`, tagged with its name.
fn all_builders(max_n: u32) -> Vec<(String, Cutset)> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for m in 0..=n {
            out.push((format!("level({n},{m})"), cutset_level(n, m).unwrap()));
            if n > m {
                out.push((format!("bicolor({n},{m})"), cutset_bicolor(n, m).unwrap()));
            }
            if n >= 2 * m + 2 {
                out.push((format!("fourcolor({n},{m})"), cutset_fourcolor(n, m).unwrap()));
            }
            for l in 2 * m..=n.saturating_sub(m) {
                if m + l <= n {
                    out.push((format!("product({n},{m},{l})"), cutset_product(n, m, l).unwrap()));
                }
            }
        }
    }
    out
}

/// Every maximal chain, as node lists, by extending one element at a time.
fn maximal_chains(lat: &TruncatedLattice) -> Vec<Vec<NodeSet>> {
    fn extend(lat: &TruncatedLattice, chain: &mut Vec<NodeSet>, out: &mut Vec<Vec<NodeSet>>) {
        let last = *chain.last().unwrap();
        if last.level() == lat.l() {
            out.push(chain.clone());
            return;
        }
        for i in 1..=lat.n() {
            if !last.contains(i) {
                chain.push(last.with(i).unwrap());
                extend(lat, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    for bottom in cutset_core::level_nodes(lat.n(), lat.m()).unwrap() {
        extend(lat, &mut vec![bottom], &mut out);
    }
    out
}

/// Largest antichain by trying every subfamily.
fn brute_width(family: &[NodeSet]) -> usize {
    let k = family.len();
    let comparable: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i && !family[i].is_incomparable(family[j]))
                .fold(0, |acc, j| acc | 1 << j)
        })
        .collect();
    let mut best = 0;
    for mask in 0u32..1 << k {
        let size = mask.count_ones() as usize;
        if size > best && (0..k).all(|i| mask >> i & 1 == 0 || mask & comparable[i] == 0) {
            best = size;
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 0..=12u32 {
        for m in 0..=n {
            if n > m {
                let got = cutset_bicolor(n, m).unwrap().chain_count();
                ensure(got == c(n - 1, m), || format!("bicolor({n},{m}) has {got} chains"))?;
                checked += 1;
            }
            if n >= 2 * m + 2 {
                let want: usize = (0..=m).map(|j| c(n - 2 * j - 2, m - j)).sum();
                let got = cutset_fourcolor(n, m).unwrap().chain_count();
                ensure(got == want, || {
                    format!("fourcolor({n},{m}) has {got} chains, want {want}")
                })?;
                checked += 1;
            }
            for l in 2 * m..=n {
                if l + m <= n {
                    let want = c(n, m) - if m == 0 { 0 } else { c(n, m - 1) };
                    let got = cutset_product(n, m, l).unwrap().chain_count();
                    ensure(got == want, || {
                        format!("product({n},{m},{l}) has {got} chains, want {want}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} builder outputs"))
}

fn criterion_2() -> Outcome {
    let builders = all_builders(10);
    let mut naive = 0;
    for (name, cutset) in &builders {
        let lat = cutset.lattice();
        let nodes = cutset.nodes();
        let report = is_cutset(lat, &nodes).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.is_cutset, || {
            format!("{name} is not a cutset, misses {:?}", report.missed_chain)
        })?;
        if lat.n() <= 7 {
            let set: std::collections::HashSet<NodeSet> = nodes.iter().copied().collect();
            for chain in maximal_chains(lat) {
                ensure(chain.iter().any(|a| set.contains(a)), || {
                    format!("{name} misses {chain:?}")
                })?;
            }
            naive += 1;
        }
    }
    Ok(format!("{} outputs, {naive} enumerated chain by chain", builders.len()))
}

fn criterion_3() -> Outcome {
    let mut tight = 0;
    for (name, cutset) in all_builders(10) {
        if cutset.chain_count() <= 1 {
            continue;
        }
        let w = width(&cutset.nodes()).map_err(|e| format!("{name}: {e}"))?.width;
        ensure(w == cutset.chain_count(), || {
            format!("{name}: width {w}, {} chains", cutset.chain_count())
        })?;
        tight += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut families = 0;
    for _ in 0..150 {
        let n = rng.gen_range(1..=7u32);
        let size = rng.gen_range(0..=18usize).min(1 << n);
        let mut family: Vec<NodeSet> = Vec::new();
        while family.len() < size {
            let a = NodeSet::from_bits(n, rng.gen_range(0..1u64 << n)).unwrap();
            if !family.contains(&a) {
                family.push(a);
            }
        }
        let got = width(&family).map_err(|e| e.to_string())?.width;
        let want = brute_width(&family);
        ensure(got == want, || {
            format!("width {got} vs brute force {want} on {family:?}")
        })?;
        families += 1;
    }
    Ok(format!(
        "{tight} outputs tight, {families} random families match brute force"
    ))
}

fn criterion_4() -> Outcome {
    for m in 0..=6u32 {
        let k = 2 * m;
        let p = griggs_partition(k, m as usize + 1).map_err(|e| e.to_string())?;
        let chains = p.chains();
        ensure(chains.len() == c(k, m), || format!("m={m}: {} chains", chains.len()))?;
        let covered: usize = chains.iter().map(|ch| ch.size()).sum();
        ensure(covered == 1 << k, || format!("m={m}: chains cover {covered} nodes"))?;
        let mut seen = std::collections::HashSet::new();
        for ch in chains {
            ensure(ch.size() <= m as usize + 1, || {
                format!("m={m}: chain of size {}", ch.size())
            })?;
            for a in ch.nodes() {
                ensure(seen.insert(*a), || format!("m={m}: {a} on two chains"))?;
            }
        }
        let starts = start_level_counts(chains);
        let want: BTreeMap<u32, usize> = (0..=m)
            .map(|j| (j, c(k, j) - if j == 0 { 0 } else { c(k, j - 1) }))
            .filter(|&(_, count)| count > 0)
            .collect();
        ensure(starts == want, || {
            format!("m={m}: start counts {starts:?}, want {want:?}")
        })?;
    }
    let mut broken = Vec::new();
    for m in 0..=5u32 {
        let p = griggs_partition(2 * m, m as usize + 1).map_err(|e| e.to_string())?;
        let report = check_index_monotonicity(p.chains());
        if !report.holds() {
            broken.push(format!("m={m}: {} violating pairs", report.violations.len()));
        }
    }
    if broken.is_empty() {
        Ok("partition properties for m <= 6, monotonicity for m <= 5".into())
    } else {
        Err(format!(
            "partition properties hold for m <= 6; index monotonicity fails ({})",
            broken.join(", ")
        ))
    }
}

fn criterion_5() -> Outcome {
    let checks = check_identities(40, 10).map_err(|e| e.to_string())?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    ensure(failed.is_empty(), || {
        format!("{} failures, first {:?}", failed.len(), failed[0])
    })?;
    ensure(!checks.is_empty(), || "no checks ran".into())?;
    Ok(format!("{} identity instances", checks.len()))
}

fn criterion_6() -> Outcome {
    let opts = SearchOptions::default();
    let mut cases = vec![
        ("h", 3, 1, 2, 2),
        ("h", 4, 1, 3, 3),
        ("h", 5, 1, 4, 4),
        ("h", 4, 1, 2, 3),
        ("g", 4, 1, 2, 3),
    ];
    for (n, m) in [(3u32, 1u32), (4, 2)] {
        cases.push(("h", n, m, m, c(n, m)));
    }
    for (target, n, m, l, want) in cases {
        let r = match target {
            "h" => exact_h(n, m, l, &opts),
            _ => exact_g(n, m, l, &opts),
        }
        .map_err(|e| e.to_string())?;
        ensure(r.status == SearchStatus::Exact && r.value == Some(want), || {
            format!("{target}({n},{m},{l}) gave {} , want {want}", r.cell())
        })?;
    }
    Ok("7 anchors".into())
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for n in 0..=40u32 {
        for m in 0..=10u32.min(n / 2) {
            let plateau =
                binomial(i64::from(n), i64::from(m)).unwrap() - binomial(i64::from(n), i64::from(m) - 1).unwrap();
            for l in 2 * m..=n - m {
                let v = conjecture_h_value(u64::from(n), u64::from(m), u64::from(l)).unwrap();
                ensure(v == plateau, || format!("({n},{m},{l}) gives {v}, want {plateau}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances"))
}

fn criterion_8() -> Outcome {
    let opts = SearchOptions {
        budget: SearchBudget {
            max_nodes_expanded: 20_000_000,
            wall_clock_limit: Duration::from_secs(20),
        },
        ..SearchOptions::default()
    };
    let instances = report_instances(0..=64, 0..=32, DEFAULT_NODE_CAP);
    let mut reports = Vec::new();
    for &(n, m, l) in &instances {
        reports.push(conjecture_report(n, m, l, &opts).map_err(|e| format!("({n},{m},{l}): {e}"))?);
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("conjecture_report.csv");
    let file = std::fs::File::create(&path).map_err(|e| e.to_string())?;
    write_report_csv(file, &reports).map_err(|e| e.to_string())?;
    let mut exact_h_rows = 0;
    let mut unresolved = 0;
    for r in &reports {
        let lat = r.lattice;
        let h = r.searched_h.is_exact().then_some(r.searched_h.value).flatten();
        let g = r.searched_g.is_exact().then_some(r.searched_g.value).flatten();
        if let (Some(h), Some((_, count))) = (h, r.construction) {
            ensure(h <= count, || format!("{lat}: searched h {h} > construction {count}"))?;
        }
        if let (Some(g), Some(h)) = (g, h) {
            ensure(g <= h, || format!("{lat}: searched g {g} > searched h {h}"))?;
        }
        exact_h_rows += usize::from(h.is_some());
        unresolved += usize::from(h.is_none()) + usize::from(g.is_none());
    }
    Ok(format!(
        "{} rows, {exact_h_rows} with exact h, {unresolved} searches unresolved, written to {}",
        reports.len(),
        path.display()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("C1 construction counts", Duration::from_secs(10), criterion_1),
        ("C2 cutset validity", Duration::from_secs(60), criterion_2),
        ("C3 width tightness", Duration::from_secs(120), criterion_3),
        ("C4 griggs partition properties", Duration::from_secs(60), criterion_4),
        ("C5 identity suite", Duration::from_secs(10), criterion_5),
        ("C6 search anchors", Duration::from_secs(300), criterion_6),
        ("C7 constant plateau", Duration::from_secs(5), criterion_7),
        (
            "C8 conjecture comparison report",
            Duration::from_secs(3600),
            criterion_8,
        ),
    ];
    let mut failures = 0;
    for (name, limit, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = started.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} ({elapsed:.2?})");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
