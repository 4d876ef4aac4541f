mod manifest;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use monobound::certify::{check_proof, prove_nonrealizable, ProofTree, ProveOptions, ProveOutcome};
use monobound::classes::named_class;
use monobound::enumerate::{enumerate, EnumerateError, EnumerateOptions};
use monobound::galediagram::Var;
use monobound::orientation::{canonical_form, HamiltonOrder};
use monobound::polytope::{dual_graph, symmetry_group, Params, VertexLabel};
use monobound::realize::{
    longest_monotone_path, realize_classes, search_monotone, verify_realization, Realization, SearchOptions,
    SearchOutcome,
};

use manifest::{manifest_name, write_artifact, ManifestBuilder};

/// Exit statuses besides success.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Internal = 1,
    /// Search budget exhausted or stored evidence missing; nothing refuted.
    NotFound = 3,
    /// A claim was checked and does not hold.
    Invalid = 4,
}

#[derive(Parser)]
#[command(name = "monobound", version, about = "Hamilton HK AOFs on the duals of cyclic polytopes C_d(d+3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate Hamilton HK AOFs up to symmetry and reversal.
    Enumerate(EnumerateArgs),
    /// Search for a realization of a class (or of any class in a file).
    Realize(RealizeArgs),
    /// Search for a sign-level non-realizability proof.
    Certify(CertifyArgs),
    /// Re-check a stored proof from scratch.
    CheckCert { file: PathBuf },
    /// Re-verify a stored realization.
    Verify(VerifyArgs),
    /// Search for a realization with a long monotone path.
    SearchMonotone(SearchArgs),
    /// Summarise the stored fixtures as a classification table.
    Report {
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    d: usize,
    /// Maximum number of search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Start from every vertex instead of one per symmetry orbit.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    zero_based: bool,
    /// Write classes_d<D>.txt and its manifest here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RealizeArgs {
    /// Stem of the output file; defaults to the class name or file stem.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// A class name such as R1_4, or a file of orders.
    #[arg(long)]
    class: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random configurations.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    zero_based: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Stem of the output file; defaults to the class name or file stem.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// A class name such as NR1_4, or a file holding one order.
    #[arg(long)]
    class: String,
    /// Only zero the heights of these triples, e.g. 345,145.
    #[arg(long, value_delimiter = ',')]
    zeroed: Vec<String>,
    /// Branch on this sign variable at the root, e.g. [257].
    #[arg(long)]
    branch: Option<String>,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Maximum number of sign assumptions tried.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long)]
    zero_based: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Also require the induced order to lie in this class.
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    zero_based: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 6)]
    d: usize,
    #[arg(long, default_value_t = 26)]
    target: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Re-verify this stored witness instead of searching.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long)]
    zero_based: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Realize(a) => cmd_realize(a),
        Command::Certify(a) => cmd_certify(a),
        Command::CheckCert { file } => cmd_check(&file),
        Command::Verify(a) => cmd_verify(a),
        Command::SearchMonotone(a) => cmd_search_monotone(a),
        Command::Report { fixtures } => report::cmd_report(&fixtures),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Internal as u8)
        }
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn print_lossy(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(Into::into),
    }
}

/// Orders given by name or file, with the dimension they live in.
struct ClassInput {
    name: String,
    d: usize,
    orders: Vec<HamiltonOrder>,
}

fn resolve_class(spec: &str, d: Option<usize>, zero_based: bool) -> Result<ClassInput> {
    let input = if let Some(named) = named_class(spec) {
        ClassInput { name: named.name.to_lowercase(), d: named.d, orders: vec![named.order()?] }
    } else {
        let path = Path::new(spec);
        let text = std::fs::read_to_string(path).with_context(|| format!("{spec} is neither a class name nor a file"))?;
        let orders = read_orders(&text, zero_based)?;
        let first = orders.first().with_context(|| format!("{spec} contains no orders"))?;
        let inferred = dimension_for(first.len())?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("class").to_string();
        ClassInput { name, d: inferred, orders }
    };
    if let Some(d) = d {
        if d != input.d {
            bail!("{spec} lives in dimension {}, not {d}", input.d);
        }
    }
    let graph = dual_graph(Params::corank3(input.d)?)?;
    for o in &input.orders {
        HamiltonOrder::new(&graph, o.0.clone())?;
    }
    Ok(input)
}

/// Lines containing `<` are orders; lines starting with `#` are comments.
fn read_orders(text: &str, zero_based: bool) -> Result<Vec<HamiltonOrder>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.starts_with('#') && l.contains('<'))
        .map(|l| HamiltonOrder::parse(l, zero_based).map_err(Into::into))
        .collect()
}

fn dimension_for(vertices: usize) -> Result<usize> {
    for d in 2..=12 {
        if dual_graph(Params::corank3(d)?)?.len() == vertices {
            return Ok(d);
        }
    }
    bail!("no C_d(d+3) dual has {vertices} vertices")
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<Status> {
    let mut m = ManifestBuilder::new();
    m.param("d", a.d).param("raw", a.raw);
    if let Some(b) = a.budget {
        m.budget("nodes", b);
    }
    if let Some(t) = a.time_limit {
        m.budget("seconds", t);
    }
    let opts = EnumerateOptions {
        node_budget: a.budget,
        time_budget: a.time_limit.map(Duration::from_secs),
        jobs: a.jobs,
        raw: a.raw,
        hk_max_dim: None,
    };
    let e = match enumerate(a.d, &opts) {
        Ok(e) => e,
        Err(EnumerateError::BudgetExceeded { kind, nodes, partial }) => {
            println!("NOT_FOUND: {kind} budget exhausted after {nodes} nodes; {} classes so far", partial.len());
            return Ok(Status::NotFound);
        }
        Err(e) => return Err(e.into()),
    };
    let header = format!(
        "{} classes ({} orders up to reversal, symmetry group of order {})",
        e.classes.len(),
        e.orders_up_to_reversal()?,
        e.group_order
    );
    eprintln!("{} search nodes, {:.1} s", e.nodes, e.elapsed.as_secs_f64());
    if let Some(dir) = &a.out {
        let file = format!("classes_d{}.txt", a.d);
        let mut text = format!("# manifest: {}\n{header}\n", manifest_name(&file));
        for c in &e.classes {
            text.push_str(&c.order().to_text(false));
            text.push('\n');
        }
        let path = write_artifact(dir, &file, &text, &m.finish(header.clone()))?;
        eprintln!("wrote {}", path.display());
    }
    let mut listing = format!("{header}\n");
    for c in &e.classes {
        listing.push_str(&c.order().to_text(a.zero_based));
        listing.push('\n');
    }
    print_lossy(&listing)?;
    Ok(Status::Ok)
}

fn cmd_realize(a: RealizeArgs) -> Result<Status> {
    let input = resolve_class(&a.class, a.d, a.zero_based)?;
    let params = Params::corank3(input.d)?;
    let mut m = ManifestBuilder::new();
    m.param("d", input.d).param("class", &a.class).seed(a.seed).budget("samples", a.budget);
    let opts = SearchOptions { seed: a.seed, samples: a.budget, jobs: a.jobs };
    match realize_classes(params, &input.orders, &opts)? {
        SearchOutcome::Found { mut realization, sample } => {
            verify_realization(&realization).context("search returned an unverified realization")?;
            let group = symmetry_group(params)?;
            let class = canonical_form(&HamiltonOrder(realization.order.clone()), &group)?;
            let (len, _) = longest_monotone_path(&realization)?;
            let summary = format!("realized at sample {sample}; longest monotone path {len}");
            println!("{summary}");
            println!("induced order: {}", HamiltonOrder(realization.order.clone()).to_text(a.zero_based));
            println!("class: {}", class.order().to_text(a.zero_based));
            if let Some(dir) = &a.out {
                let file = format!("{}.realization.json", a.name.as_deref().unwrap_or(&input.name));
                realization.manifest = Some(manifest_name(&file));
                let text = serde_json::to_string_pretty(&*realization)? + "\n";
                let path = write_artifact(dir, &file, &text, &m.finish(summary))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(Status::Ok)
        }
        SearchOutcome::NotFound { samples } => {
            println!("NOT_FOUND: no realization in {samples} samples (non-conclusive)");
            Ok(Status::NotFound)
        }
    }
}

fn parse_label(text: &str, zero_based: bool) -> Result<VertexLabel> {
    VertexLabel::parse(text.trim(), zero_based).map_err(Into::into)
}

fn cmd_certify(a: CertifyArgs) -> Result<Status> {
    let input = resolve_class(&a.class, a.d, a.zero_based)?;
    let [order] = &input.orders[..] else {
        bail!("certify expects exactly one order, {} has {}", a.class, input.orders.len());
    };
    let zeroed = if a.zeroed.is_empty() {
        None
    } else {
        Some(a.zeroed.iter().map(|z| parse_label(z, a.zero_based)).collect::<Result<Vec<_>>>()?)
    };
    let root_branch = match &a.branch {
        Some(text) => Some(Var::parse(text, a.zero_based).with_context(|| format!("bad sign variable {text:?}"))?.0),
        None => None,
    };
    let mut m = ManifestBuilder::new();
    m.param("d", input.d).param("class", &a.class).param("depth", a.depth).budget("assumptions", a.budget as u64);
    if let Some(z) = &zeroed {
        m.param("zeroed", z.iter().map(|l| l.render(false)).collect::<Vec<_>>().join(","));
    }
    if let Some(v) = root_branch {
        m.param("branch", v);
    }
    let opts = ProveOptions { depth: a.depth, assumption_budget: a.budget, zeroed, root_branch };
    match prove_nonrealizable(input.d, order, &opts)? {
        ProveOutcome::Proved(mut tree) => {
            check_proof(&tree).context("the search produced a proof that does not check")?;
            print!("{}", tree.render(a.zero_based));
            let summary = format!("proved: {} branches, {} leaf rows", tree.branch_count(), tree.leaf_rows());
            println!("{summary}");
            if let Some(dir) = &a.out {
                let file = format!("{}.proof", a.name.as_deref().unwrap_or(&input.name));
                tree.manifest = Some(manifest_name(&file));
                let path = write_artifact(dir, &file, &tree.to_json(), &m.finish(summary))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(Status::Ok)
        }
        ProveOutcome::NotFound { assumptions, budget_exhausted } => {
            let why = if budget_exhausted { "budget exhausted" } else { "search space exhausted" };
            println!("NOT_FOUND: no proof after {assumptions} assumptions, {why} (non-conclusive)");
            Ok(Status::NotFound)
        }
    }
}

fn cmd_check(file: &Path) -> Result<Status> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let tree = match ProofTree::from_json(&text) {
        Ok(t) => t,
        Err(e) => {
            println!("INVALID: malformed proof: {e}");
            return Ok(Status::Invalid);
        }
    };
    match check_proof(&tree) {
        Ok(()) => {
            println!("valid: d={}, {} branches, {} leaf rows", tree.d, tree.branch_count(), tree.leaf_rows());
            Ok(Status::Ok)
        }
        Err(e) => {
            println!("INVALID: {e}");
            Ok(Status::Invalid)
        }
    }
}

fn load_realization(file: &Path) -> Result<Realization> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))
}

fn cmd_verify(a: VerifyArgs) -> Result<Status> {
    let r = load_realization(&a.file)?;
    if let Err(e) = verify_realization(&r) {
        println!("INVALID: {e}");
        return Ok(Status::Invalid);
    }
    let (len, _) = longest_monotone_path(&r)?;
    println!("verified: d={}, longest monotone path {len}", r.d);
    println!("induced order: {}", HamiltonOrder(r.order.clone()).to_text(a.zero_based));
    if let Some(spec) = &a.class {
        let input = resolve_class(spec, Some(r.d), a.zero_based)?;
        let group = symmetry_group(Params::corank3(r.d)?)?;
        let induced = canonical_form(&HamiltonOrder(r.order.clone()), &group)?;
        let hit = input.orders.iter().map(|o| canonical_form(o, &group)).collect::<Result<Vec<_>, _>>()?.contains(&induced);
        if !hit {
            println!("INVALID: the induced order is not in {spec}");
            return Ok(Status::Invalid);
        }
        println!("the induced order lies in {spec}");
    }
    Ok(Status::Ok)
}

fn cmd_search_monotone(a: SearchArgs) -> Result<Status> {
    if let Some(file) = &a.fixture {
        let r = load_realization(file)?;
        if let Err(e) = verify_realization(&r) {
            println!("INVALID: {e}");
            return Ok(Status::Invalid);
        }
        let (len, path) = longest_monotone_path(&r)?;
        println!("verified: d={}, longest monotone path {len}", r.d);
        println!("path: {}", HamiltonOrder(path).to_text(a.zero_based));
        return Ok(if r.d == a.d && len >= a.target { Status::Ok } else { Status::Invalid });
    }
    let params = Params::corank3(a.d)?;
    let mut m = ManifestBuilder::new();
    m.param("d", a.d).param("target", a.target).seed(a.seed).budget("samples", a.budget);
    let opts = SearchOptions { seed: a.seed, samples: a.budget, jobs: a.jobs };
    match search_monotone(params, a.target, &opts)? {
        SearchOutcome::Found { mut realization, sample } => {
            verify_realization(&realization).context("search returned an unverified realization")?;
            let (len, path) = longest_monotone_path(&realization)?;
            let summary = format!("found at sample {sample}; longest monotone path {len}");
            println!("{summary}");
            println!("path: {}", HamiltonOrder(path).to_text(a.zero_based));
            if let Some(dir) = &a.out {
                let file = format!("monotone_d{}.realization.json", a.d);
                realization.manifest = Some(manifest_name(&file));
                let text = serde_json::to_string_pretty(&*realization)? + "\n";
                let path = write_artifact(dir, &file, &text, &m.finish(summary))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(Status::Ok)
        }
        SearchOutcome::NotFound { samples } => {
            println!("NOT_FOUND: no path through {} vertices in {samples} samples (non-conclusive)", a.target);
            Ok(Status::NotFound)
        }
    }
}
