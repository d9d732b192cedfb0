//! `cutset`: build, verify and search cutsets of truncated Boolean lattices.
//!
//! Exit codes: 0 success, 2 bad parameters or input, 3 verification failure,
//! 4 search budget exhausted.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cutset_core::formulas::{check_identities, write_identities_csv};
use cutset_core::search::{report_instances, write_report_csv, DEFAULT_NODE_CAP};
use cutset_core::{
    conjecture_report, cutset_auto, exact_g, exact_h, is_cutset, width, CutsetFile, Error, Method, SearchBudget,
    SearchOptions,
};
use serde_json::json;

const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "cutset", version, about = "Cutsets of truncated Boolean lattices B_n(m,l)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an explicit cutset and write it as JSON.
    Construct(ConstructArgs),
    /// Check a cutset file and report its width.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exact minimum width (h) or per-level bound (g) by exhaustive search.
    Search(SearchArgs),
    /// Conjecture comparison CSV over a range of lattices.
    Report(ReportArgs),
    /// Check the binomial identities and write them as CSV.
    Identities {
        #[arg(long, default_value_t = 40)]
        max_n: u64,
        #[arg(long, default_value_t = 10)]
        max_m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Level,
    Bicolor,
    Fourcolor,
    Product,
    Auto,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    /// Top level. Implied for level, bicolor and fourcolor.
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Write the cutset here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    H,
    G,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Branch-and-bound nodes to expand before giving up.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Largest lattice, in nodes, accepted for search.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Prune symmetric branches at the root.
    #[arg(long)]
    symmetry: bool,
}

impl BudgetArgs {
    fn options(self) -> Result<SearchOptions, Failure> {
        let mut budget = SearchBudget::default();
        if let Some(nodes) = self.max_nodes {
            budget.max_nodes_expanded = nodes;
        }
        if let Some(secs) = self.time_limit {
            budget.wall_clock_limit =
                Duration::try_from_secs_f64(secs).map_err(|_| Failure::domain(format!("bad time limit {secs}")))?;
        }
        if budget.max_nodes_expanded == 0 || budget.wall_clock_limit.is_zero() {
            return Err(Failure::domain("the search budget must be positive"));
        }
        Ok(SearchOptions {
            budget,
            node_cap: self.cap,
            threads: self.threads.max(1),
            symmetry: self.symmetry,
        })
    }
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    l: u32,
    #[arg(long, value_enum)]
    target: TargetArg,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    n_min: u32,
    #[arg(long)]
    n_max: u32,
    #[arg(long, default_value_t = 0)]
    m_min: u32,
    #[arg(long)]
    m_max: Option<u32>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::WitnessRejected(_) => EXIT_VERIFY,
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::domain(e.to_string())
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn construct(args: ConstructArgs) -> Result<u8, Failure> {
    let (n, m) = (args.n, args.m);
    let cutset = match args.method {
        MethodArg::Auto => {
            let l = args.l.ok_or_else(|| Failure::domain("--l is required for auto"))?;
            cutset_auto(n, m, l)?
        }
        MethodArg::Product => {
            let l = args.l.ok_or_else(|| Failure::domain("--l is required for product"))?;
            Method::Product.build(n, m, l)?
        }
        fixed => {
            let (method, top) = match fixed {
                MethodArg::Level => (Method::Level, m),
                MethodArg::Bicolor => (Method::Bicolor, m + 1),
                _ => (Method::Fourcolor, m + 2),
            };
            method.build(n, m, args.l.unwrap_or(top))?
        }
    };
    let mut text = cutset.to_file().to_json();
    text.push('\n');
    emit(args.out.as_ref(), &text)?;
    let summary = json!({
        "method": cutset.method(),
        "chain_count": cutset.chain_count(),
        "levels_used": cutset.levels_used().map(|(lo, hi)| [lo, hi]),
    });
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    let report = is_cutset(cutset.lattice(), &cutset.nodes())?;
    if !report.is_cutset {
        eprintln!("constructed family is not a cutset: {}", json!(report));
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn verify(input: PathBuf) -> Result<u8, Failure> {
    let text = fs::read_to_string(&input)?;
    let file = CutsetFile::from_json(&text)?;
    let lattice = file.lattice()?;
    let nodes = file.nodes()?;
    let report = is_cutset(&lattice, &nodes)?;
    let w = width(&nodes)?;
    let mut out = json!({
        "format": file.format,
        "is_cutset": report.is_cutset,
        "width": w.width,
        "antichain_size": w.antichain_witness.len(),
        "chain_cover_size": w.chain_cover.len(),
    });
    if let Some(chain) = &report.missed_chain {
        out["missed_chain"] = json!(chain);
    }
    println!("{out}");
    Ok(if report.is_cutset { 0 } else { EXIT_VERIFY })
}

fn search(args: SearchArgs) -> Result<u8, Failure> {
    let options = args.budget.options()?;
    let result = match args.target {
        TargetArg::H => exact_h(args.n, args.m, args.l, &options)?,
        TargetArg::G => exact_g(args.n, args.m, args.l, &options)?,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&result.to_json()).expect("json values serialize")
    );
    Ok(if result.is_exact() { 0 } else { EXIT_BUDGET })
}

fn report(args: ReportArgs) -> Result<u8, Failure> {
    let m_max = args.m_max.unwrap_or(args.n_max / 2);
    if args.n_min > args.n_max || args.m_min > m_max {
        return Err(Failure::domain("empty parameter range"));
    }
    let options = args.budget.options()?;
    let instances = report_instances(args.n_min..=args.n_max, args.m_min..=m_max, options.node_cap);
    let reports = instances
        .iter()
        .map(|&(n, m, l)| conjecture_report(n, m, l, &options))
        .collect::<Result<Vec<_>, _>>()?;
    let mut buf = Vec::new();
    write_report_csv(&mut buf, &reports)?;
    emit(args.out.as_ref(), &String::from_utf8(buf).expect("csv output is utf-8"))?;
    Ok(0)
}

fn identities(max_n: u64, max_m: u64, out: Option<PathBuf>) -> Result<u8, Failure> {
    let checks = check_identities(max_n, max_m)?;
    let mut buf = Vec::new();
    write_identities_csv(&mut buf, &checks)?;
    emit(out.as_ref(), &String::from_utf8(buf).expect("csv output is utf-8"))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        eprintln!("{failed} identity checks failed");
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => construct(args),
        Command::Verify { input } => verify(input),
        Command::Search(args) => search(args),
        Command::Report(args) => report(args),
        Command::Identities { max_n, max_m, out } => identities(max_n, max_m, out),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
