//! Command-line front end: reproducible batch runs over the library with
//! machine-readable output.
//!
//! Exit codes: 0 on success, 1 when a check finds a failure (a product
//! violation, a six-cycle, a breached hard cap), 2 on invalid input.
//! Output is deterministic for a fixed command line (including `--seed`)
//! and independent of `--workers`.

use crate::arith::FactorSieve;
use crate::decompose::{lemma_decompose, min_v_decompose, SplitCase};
use crate::encode::EdgeGraph;
use crate::extremal::{
    bound_furedi_balanced, bound_furedi_unbalanced, bound_gyori, brute_force_ex_c6,
    brute_force_ex_c6_bipartite,
};
use crate::ledger::{
    census_range, check_hard_caps, g3_bound_report, partition_edges, theoretical_caps,
    write_census_csv, write_ledger_csv, BoundConstants, PartitionLedger, DEFAULT_HARD_CAP_FLOOR,
};
use crate::sidonkit::{
    base_construction, exact_max_3sidon, greedy_3sidon, read_set_file, verify_k_sidon,
    verify_square_free_products, write_set_file,
};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const SIEVE_LIMIT_ENV: &str = "MULTSIDON_SIEVE_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "multsidon",
    version,
    about = "Multiplicative Sidon sets: splits, product graphs, edge ledgers, and searches"
)]
pub struct Cli {
    /// Flat key=value config file; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Worker threads for parallel scans (0 = library default). Results
    /// are independent of this setting.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for randomized test-set generation.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Factorization sieve capacity; defaults to what the command needs,
    /// or the MULTSIDON_SIEVE_LIMIT environment variable.
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct SetSource {
    /// Read the set from a file (one integer per line, # comments).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Use the primes-plus-doubled-primes construction.
    #[arg(long)]
    base: bool,

    /// Use the greedy scan of {1..n}.
    #[arg(long)]
    greedy: bool,

    /// Sample this many distinct elements of {1..n} with --seed.
    #[arg(long, value_name = "SIZE")]
    random_set: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split every m in [1, n] as m = u*v and check the split machinery is
    /// total; with --m, show the splits of one element.
    Decompose {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Run both product verifiers over a set file.
    Verify {
        /// Set file to check.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Tuple length for the equal-products check.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Subset size for the square-products check (default 2k).
        #[arg(long, value_name = "COUNT")]
        square_count: Option<usize>,
    },
    /// Build the product graph of a set and look for a six-cycle.
    Encode {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        source: SetSource,
        /// Write the edge list ("u v element" lines) to this file.
        #[arg(long, value_name = "PATH")]
        export: Option<PathBuf>,
        /// Write the chosen set to this file.
        #[arg(long, value_name = "PATH")]
        save_set: Option<PathBuf>,
    },
    /// Partition a product graph's edges and compare counts against caps.
    Ledger {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        source: SetSource,
        /// Scale below which hard caps are reported but not enforced.
        #[arg(long, default_value_t = DEFAULT_HARD_CAP_FLOOR)]
        floor: u64,
    },
    /// Count integers by number of prime factors against the ceiling
    /// formula.
    Census {
        #[arg(long)]
        x: u64,
        /// Single factor-count i to report.
        #[arg(long)]
        i: Option<u32>,
        /// Report every i in 0..=i_max instead.
        #[arg(long, default_value_t = 10)]
        i_max: u32,
    },
    /// Search {1..n} for a large multiplicative 3-Sidon subset.
    Search {
        #[arg(long)]
        n: u64,
        /// Exhaustive branch-and-bound (exact maximum).
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Single greedy pass.
        #[arg(long)]
        greedy: bool,
        /// Node budget for the exact search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustive six-cycle-free edge maxima and the bound formulas.
    Extremal {
        /// Compute the general table for 1..=max_n vertices.
        #[arg(long, default_value_t = 6)]
        max_n: u64,
        /// Also compute the bipartite table up to this side size.
        #[arg(long, value_name = "SIZE")]
        bipartite: Option<u64>,
    },
    /// Evaluate the headline bound pieces over a range of n.
    Bounds {
        #[arg(long)]
        n_from: u64,
        /// Defaults to n_from (single row).
        #[arg(long)]
        n_to: Option<u64>,
        /// Multiplicative step between rows.
        #[arg(long, default_value_t = 10)]
        factor: u64,
    },
}

/// Settings shared by all commands, resolved from flags, config file, and
/// environment (in that precedence order).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: OutputFormat,
    pub workers: usize,
    pub seed: u64,
    pub sieve_limit: Option<u64>,
    pub constants: BoundConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: OutputFormat::Text,
            workers: 0,
            seed: 0,
            sieve_limit: None,
            constants: BoundConstants::default(),
        }
    }
}

/// Parse a flat key=value config file ('#' comments, blank lines allowed)
/// onto `cfg`.
fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| {
            Error::Parse(format!("{}:{}: {what}: {raw:?}", path.display(), lineno + 1))
        };
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" => {
                cfg.format = match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    "text" => OutputFormat::Text,
                    _ => return Err(bad("format must be json, csv, or text")),
                }
            }
            "workers" => cfg.workers = value.parse().map_err(|_| bad("bad workers"))?,
            "seed" => cfg.seed = value.parse().map_err(|_| bad("bad seed"))?,
            "sieve_limit" => {
                cfg.sieve_limit = Some(value.parse().map_err(|_| bad("bad sieve_limit"))?)
            }
            "c2" | "c7" | "c8" | "c9" | "c10" | "delta" | "C_delta" | "c_delta" => {
                let v: f64 = value.parse().map_err(|_| bad("bad constant"))?;
                cfg.constants.set(key, v)?;
            }
            _ => return Err(bad("unknown config key")),
        }
    }
    Ok(())
}

/// Assemble the run configuration: defaults, then config file, then
/// environment, then flags.
fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        apply_config_file(&mut cfg, path)?;
    }
    if cfg.sieve_limit.is_none() {
        if let Ok(raw) = std::env::var(SIEVE_LIMIT_ENV) {
            let v = raw.parse().map_err(|_| {
                Error::InvalidArgument(format!("{SIEVE_LIMIT_ENV} must be an integer, got {raw:?}"))
            })?;
            cfg.sieve_limit = Some(v);
        }
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(l) = cli.sieve_limit {
        cfg.sieve_limit = Some(l);
    }
    cfg.constants.validate()?;
    Ok(cfg)
}

/// Build the sieve: the configured limit if any (it must cover `needed`),
/// otherwise exactly `needed`.
fn make_sieve(cfg: &RunConfig, needed: u64) -> Result<FactorSieve> {
    let needed = needed.max(2);
    let limit = match cfg.sieve_limit {
        Some(l) if l < needed => {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {l} is below the {needed} this command needs"
            )));
        }
        Some(l) => l,
        None => needed,
    };
    FactorSieve::new(limit)
}

/// Resolve a set source to concrete elements of {1..n}.
fn resolve_set(source: &SetSource, n: u64, sieve: &FactorSieve, cfg: &RunConfig) -> Result<Vec<u64>> {
    let chosen = [
        source.input.is_some(),
        source.base,
        source.greedy,
        source.random_set.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if chosen > 1 {
        return Err(Error::InvalidArgument(
            "pick one of --input, --base, --greedy, --random-set".into(),
        ));
    }
    if let Some(path) = &source.input {
        return read_set_file(path);
    }
    if source.greedy {
        return greedy_3sidon(n);
    }
    if let Some(size) = source.random_set {
        if size > n {
            return Err(Error::InvalidArgument(format!(
                "cannot sample {size} distinct elements from 1..={n}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut set: Vec<u64> =
            sample(&mut rng, n as usize, size as usize).iter().map(|i| i as u64 + 1).collect();
        set.sort_unstable();
        return Ok(set);
    }
    // --base, also the default.
    base_construction(n, sieve)
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json encodes"));
}

/// u128 products as JSON numbers when they fit, decimal strings otherwise.
fn product_json(p: u128) -> Value {
    match u64::try_from(p) {
        Ok(small) => json!(small),
        Err(_) => json!(p.to_string()),
    }
}

fn violation_json(v: &crate::sidonkit::Violation) -> Value {
    json!({
        "lhs": v.lhs,
        "rhs": v.rhs,
        "product": product_json(v.product),
        "product_formula": "prod(lhs) = prod(rhs)",
    })
}

/// Entry point used by the binary: parse, run, map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here; usage errors exit 2.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let cfg = resolve_config(cli)?;
    if cfg.workers > 0 {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
    }
    match &cli.command {
        Command::Decompose { n, m } => cmd_decompose(&cfg, *n, *m),
        Command::Verify { input, k, square_count } => {
            cmd_verify(&cfg, input, *k, square_count.unwrap_or(2 * k))
        }
        Command::Encode { n, source, export, save_set } => {
            cmd_encode(&cfg, *n, source, export.as_deref(), save_set.as_deref())
        }
        Command::Ledger { n, source, floor } => cmd_ledger(&cfg, *n, source, *floor),
        Command::Census { x, i, i_max } => cmd_census(&cfg, *x, *i, *i_max),
        Command::Search { n, exact, greedy, budget } => {
            cmd_search(&cfg, *n, *exact, *greedy, *budget)
        }
        Command::Extremal { max_n, bipartite } => cmd_extremal(&cfg, *max_n, *bipartite),
        Command::Bounds { n_from, n_to, factor } => {
            cmd_bounds(&cfg, *n_from, n_to.unwrap_or(*n_from), *factor)
        }
    }
}

fn cmd_decompose(cfg: &RunConfig, n: u64, m: Option<u64>) -> Result<i32> {
    let sieve = make_sieve(cfg, n)?;
    if let Some(m) = m {
        let lemma = lemma_decompose(m, n, &sieve)?;
        let min_v = min_v_decompose(m, n, &sieve)?;
        match cfg.format {
            OutputFormat::Json => print_json(&json!({
                "m": m,
                "n": n,
                "constructive": {"u": lemma.u, "v": lemma.v, "case": format!("{:?}", lemma.case)},
                "min_v": {"u": min_v.u, "v": min_v.v, "case": format!("{:?}", min_v.case)},
                "case_formula": "LargePrime: u prime, u^3 > n^2; Balanced: u^3,v^3 <= n^2, 2*Omega(u)-2 <= Omega(v)",
            })),
            OutputFormat::Csv => {
                println!("m,route,u,v,case");
                println!("{m},constructive,{},{},{:?}", lemma.u, lemma.v, lemma.case);
                println!("{m},min_v,{},{},{:?}", min_v.u, min_v.v, min_v.case);
            }
            OutputFormat::Text => {
                println!("m = {m} (n = {n})");
                println!("  constructive: u = {}, v = {} [{:?}]", lemma.u, lemma.v, lemma.case);
                println!("  min-v:        u = {}, v = {} [{:?}]", min_v.u, min_v.v, min_v.case);
            }
        }
        return Ok(0);
    }

    use rayon::prelude::*;
    let (balanced, large_prime) = (1..=n)
        .into_par_iter()
        .map(|m| {
            let lemma = lemma_decompose(m, n, &sieve).expect("split is total");
            let min_v = min_v_decompose(m, n, &sieve).expect("split is total");
            debug_assert_eq!(lemma.u * lemma.v, m);
            debug_assert_eq!(min_v.u * min_v.v, m);
            match min_v.case {
                SplitCase::Balanced => (1u64, 0u64),
                SplitCase::LargePrime => (0, 1),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    match cfg.format {
        OutputFormat::Json => print_json(&json!({
            "n": n,
            "scanned": n,
            "balanced": balanced,
            "balanced_formula": "#{m : min-v split has u^3,v^3 <= n^2}",
            "large_prime": large_prime,
            "large_prime_formula": "#{m : min-v split has u prime, u^3 > n^2}",
            "total_ok": balanced + large_prime == n,
        })),
        OutputFormat::Csv => {
            println!("n,scanned,balanced,large_prime,total_ok");
            println!("{n},{n},{balanced},{large_prime},{}", balanced + large_prime == n);
        }
        OutputFormat::Text => {
            println!("scanned m = 1..{n}: every element split");
            println!("  balanced splits:    {balanced}");
            println!("  large-prime splits: {large_prime}");
        }
    }
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, input: &Path, k: usize, square_count: usize) -> Result<i32> {
    let set = read_set_file(input)?;
    let max = set.iter().max().copied().unwrap_or(2);
    let sieve = make_sieve(cfg, max)?;
    let violation = verify_k_sidon(&set, k)?;
    let witness = verify_square_free_products(&set, square_count, &sieve)?;
    let failed = violation.is_some() || witness.is_some();

    match cfg.format {
        OutputFormat::Json => print_json(&json!({
            "elements": set.len(),
            "k": k,
            "k_sidon_ok": violation.is_none(),
            "violation": violation.as_ref().map(violation_json),
            "square_count": square_count,
            "square_free_ok": witness.is_none(),
            "square_witness": witness,
        })),
        OutputFormat::Csv => {
            println!("check,ok,detail");
            match &violation {
                None => println!("k_sidon,true,"),
                Some(v) => println!(
                    "k_sidon,false,{}={} (product {})",
                    join(&v.lhs, "*"),
                    join(&v.rhs, "*"),
                    v.product
                ),
            }
            match &witness {
                None => println!("square_free,true,"),
                Some(w) => println!("square_free,false,{}", join(w, "*")),
            }
        }
        OutputFormat::Text => {
            println!("set: {} elements from {}", set.len(), input.display());
            match &violation {
                None => println!("{k}-tuple products: no violation"),
                Some(v) => println!(
                    "{k}-tuple products: VIOLATION {} = {} = {}",
                    join(&v.lhs, "*"),
                    join(&v.rhs, "*"),
                    v.product
                ),
            }
            match &witness {
                None => println!("{square_count}-subset squares: none"),
                Some(w) => println!("{square_count}-subset squares: WITNESS {}", join(w, "*")),
            }
        }
    }
    Ok(if failed { 1 } else { 0 })
}

fn join(values: &[u64], sep: &str) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn cmd_encode(
    cfg: &RunConfig,
    n: u64,
    source: &SetSource,
    export: Option<&Path>,
    save_set: Option<&Path>,
) -> Result<i32> {
    let sieve = make_sieve(cfg, n)?;
    let set = resolve_set(source, n, &sieve, cfg)?;
    if let Some(path) = save_set {
        write_set_file(path, &set)?;
    }
    let graph = EdgeGraph::build(&set, n, &sieve)?;
    if let Some(path) = export {
        std::fs::write(path, graph.export())?;
    }
    let hexagon = graph.find_hexagon();
    let solution = hexagon.as_ref().map(crate::encode::hexagon_to_solution);

    match cfg.format {
        OutputFormat::Json => print_json(&json!({
            "n": n,
            "elements": set.len(),
            "edges": graph.edges().len(),
            "skipped_squares": graph.skipped_squares(),
            "full_vertex_count": graph.full_vertex_count(),
            "full_vertex_count_formula": "pi(n) + floor(n^(2/3)) - pi(floor(n^(2/3)))",
            "isolated_vertices": graph.isolated_vertex_count(),
            "hexagon": hexagon.as_ref().map(|h| json!({
                "vertices": h.vertices,
                "labels": h.labels,
            })),
            "equal_products": solution.as_ref().map(|s| json!({
                "lhs": s.lhs,
                "rhs": s.rhs,
                "product": product_json(s.product),
            })),
        })),
        OutputFormat::Csv => {
            println!("n,elements,edges,skipped_squares,full_vertices,isolated,hexagon");
            println!(
                "{n},{},{},{},{},{},{}",
                set.len(),
                graph.edges().len(),
                graph.skipped_squares().len(),
                graph.full_vertex_count(),
                graph.isolated_vertex_count(),
                hexagon
                    .as_ref()
                    .map_or(String::new(), |h| h.vertices.map(|v| v.to_string()).join(" "))
            );
        }
        OutputFormat::Text => {
            println!("graph over {{1..{n}}}: {} elements -> {} edges", set.len(), graph.edges().len());
            println!(
                "vertices: {} total, {} isolated; skipped squares: {}",
                graph.full_vertex_count(),
                graph.isolated_vertex_count(),
                graph.skipped_squares().len()
            );
            match (&hexagon, &solution) {
                (Some(h), Some(s)) => {
                    println!("six-cycle: {:?}", h.vertices);
                    println!(
                        "equal products: {} = {} = {}",
                        join(&s.lhs, "*"),
                        join(&s.rhs, "*"),
                        s.product
                    );
                }
                _ => println!("six-cycle: none"),
            }
        }
    }
    Ok(if hexagon.is_some() { 1 } else { 0 })
}

fn cmd_ledger(cfg: &RunConfig, n: u64, source: &SetSource, floor: u64) -> Result<i32> {
    let sieve = make_sieve(cfg, n)?;
    let set = resolve_set(source, n, &sieve, cfg)?;
    let graph = EdgeGraph::build(&set, n, &sieve)?;
    let mut ledger = partition_edges(&graph, n, &sieve)?;
    let caps = theoretical_caps(n, &sieve, &cfg.constants)?;
    ledger.apply_caps(&caps);
    let report = check_hard_caps(&ledger, &sieve, floor)?;

    match cfg.format {
        OutputFormat::Json => print_json(&json!({
            "n": n,
            "k_bands": ledger.k_bands,
            "k_bands_formula": "max(1, floor(ln n / 6))",
            "elements": set.len(),
            "total_edges": ledger.total,
            "skipped_squares": ledger.skipped_squares,
            "parts": ledger_parts_json(&ledger),
            "caps": {
                "per_side_band_sum": caps.per_side_band_sum,
                "per_side_band_sum_formula":
                    "c8*n^(2/3)*(ln n)^(2^(1/3)-1/3)*(lnln n)^2 + c9*n^(2/3)*(lnln n)^2",
                "grand_total": caps.grand_total,
                "grand_total_formula":
                    "pi(n)+pi(n/2)+c10*n^(2/3)*(ln n)^(2^(1/3)-1/3)*(lnln n)^2",
            },
            "hard_caps": {
                "asserted": report.asserted,
                "g0_count": report.g0_count,
                "g0_cap": report.g0_cap,
                "g0_cap_formula": "n^(2/3)",
                "gk1_count": report.gk1_count,
                "gk1_cap": report.gk1_cap,
                "gk1_cap_formula": "pi(n)+pi(n/2)+n^(2/3)/2",
                "violations": report.violations,
            },
        })),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_ledger_csv(&mut buf, &ledger)?;
            print!("{}", String::from_utf8(buf).expect("csv is utf8"));
        }
        OutputFormat::Text => {
            println!(
                "ledger at n = {n}: {} edges over {} parts (K = {})",
                ledger.total,
                ledger.parts.len(),
                ledger.k_bands
            );
            let mut buf = Vec::new();
            write_ledger_csv(&mut buf, &ledger)?;
            print!("{}", String::from_utf8(buf).expect("csv is utf8"));
            if report.asserted {
                if report.violations.is_empty() {
                    println!("hard caps: ok");
                } else {
                    for v in &report.violations {
                        println!("hard caps: BREACH {v}");
                    }
                }
            } else {
                println!("hard caps: reported only (n below floor {floor})");
            }
        }
    }
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}

fn ledger_parts_json(ledger: &PartitionLedger) -> Value {
    let rows: Vec<Value> = ledger
        .parts
        .iter()
        .map(|(key, e)| {
            json!({
                "part": format!("{key:?}"),
                "edge_count": e.edge_count,
                "cap": e.cap,
                "cap_kind": format!("{:?}", e.cap_kind).to_lowercase(),
                "cap_formula": e.cap_formula,
            })
        })
        .collect();
    Value::Array(rows)
}

fn cmd_census(cfg: &RunConfig, x: u64, i: Option<u32>, i_max: u32) -> Result<i32> {
    let sieve = make_sieve(cfg, x)?;
    let rows = match i {
        Some(i) => vec![crate::ledger::census(x, i, &sieve, &cfg.constants)?],
        None => census_range(x, i_max, &sieve, &cfg.constants)?,
    };
    match cfg.format {
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x,
                        "i": r.i,
                        "N_exact": r.n_exact,
                        "N_exact_formula": "#{m <= x : Omega(m) <= i}",
                        "M_exact": r.m_exact,
                        "M_exact_formula": "#{m <= x : Omega(m) >= i}",
                        "bound_value": r.bound_value,
                        "bound_value_formula": "C_delta*(x/ln x)*(lnln x)^(i-1)/(i-1)!",
                        "remark_exponent": r.remark_exponent,
                        "remark_exponent_formula": "alpha - alpha*ln(alpha), alpha = (i-1)/lnln x",
                    })
                })
                .collect();
            print_json(&Value::Array(items));
        }
        OutputFormat::Csv | OutputFormat::Text => {
            let mut buf = Vec::new();
            write_census_csv(&mut buf, &rows)?;
            print!("{}", String::from_utf8(buf).expect("csv is utf8"));
        }
    }
    Ok(0)
}

fn cmd_search(cfg: &RunConfig, n: u64, exact: bool, greedy: bool, budget: Option<u64>) -> Result<i32> {
    if budget == Some(0) {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    if exact == greedy {
        return Err(Error::InvalidArgument("pick exactly one of --exact or --greedy".into()));
    }
    if exact {
        let res = exact_max_3sidon(n, budget)?;
        debug_assert!(verify_k_sidon(&res.set, 3)?.is_none());
        match cfg.format {
            OutputFormat::Json => print_json(&json!({
                "n": res.n,
                "mode": "exact",
                "size": res.size,
                "size_formula": "max |A|, A in {1..n} with no equal disjoint triple products",
                "set": res.set,
                "optimal": res.optimal,
                "nodes_explored": res.nodes_explored,
                "budget_hit": res.budget_hit,
            })),
            OutputFormat::Csv => {
                println!("n,mode,size,optimal,nodes_explored,budget_hit,set");
                println!(
                    "{},exact,{},{},{},{},{}",
                    res.n,
                    res.size,
                    res.optimal,
                    res.nodes_explored,
                    res.budget_hit,
                    join(&res.set, " ")
                );
            }
            OutputFormat::Text => {
                println!("exact search over {{1..{}}}: size {} ({})", res.n, res.size, if res.optimal { "optimal" } else { "budget hit" });
                println!("set: {:?}", res.set);
                println!("nodes explored: {}", res.nodes_explored);
            }
        }
    } else {
        let set = greedy_3sidon(n)?;
        debug_assert!(verify_k_sidon(&set, 3)?.is_none());
        match cfg.format {
            OutputFormat::Json => print_json(&json!({
                "n": n,
                "mode": "greedy",
                "size": set.len(),
                "set": set,
            })),
            OutputFormat::Csv => {
                println!("n,mode,size,set");
                println!("{n},greedy,{},{}", set.len(), join(&set, " "));
            }
            OutputFormat::Text => {
                println!("greedy scan of {{1..{n}}}: kept {} elements", set.len());
                println!("set: {set:?}");
            }
        }
    }
    Ok(0)
}

fn cmd_extremal(cfg: &RunConfig, max_n: u64, bipartite: Option<u64>) -> Result<i32> {
    let mut general = Vec::new();
    for n in 1..=max_n {
        let res = brute_force_ex_c6(n)?;
        let (balanced_low, balanced_high) = bound_furedi_balanced(n);
        general.push((n, res.max_edges, res.nodes_explored, balanced_low, balanced_high));
    }
    let mut bip = Vec::new();
    if let Some(side) = bipartite {
        for u in 1..=side {
            for v in 1..=u {
                let res = brute_force_ex_c6_bipartite(u, v)?;
                let unbalanced = bound_furedi_unbalanced(u, v);
                let gyori = bound_gyori(u, v)?;
                bip.push((u, v, res.max_edges, unbalanced, gyori));
            }
        }
    }

    match cfg.format {
        OutputFormat::Json => print_json(&json!({
            "general": general
                .iter()
                .map(|(n, ex, nodes, lo, hi)| {
                    json!({
                        "n": n,
                        "max_edges": ex,
                        "nodes_explored": nodes,
                        "balanced_bound_tight": lo,
                        "balanced_bound_tight_formula": "0.6272*n^(4/3)",
                        "balanced_bound_simple": hi,
                        "balanced_bound_simple_formula": "n^(4/3)",
                    })
                })
                .collect::<Vec<_>>(),
            "bipartite": bip
                .iter()
                .map(|(u, v, z, unb, gy)| {
                    json!({
                        "u": u,
                        "v": v,
                        "max_edges": z,
                        "unbalanced_bound": unb,
                        "unbalanced_bound_formula": "2^(1/3)*(u*v)^(2/3) + 16*(u+v)",
                        "two_sided_bound": gy,
                        "two_sided_bound_formula": "2u + v^2/2",
                    })
                })
                .collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => {
            println!("kind,n_or_u,v,max_edges,bound_a,bound_b");
            for (n, ex, _, lo, hi) in &general {
                println!("general,{n},,{ex},{lo:.4},{hi:.4}");
            }
            for (u, v, z, unb, gy) in &bip {
                println!("bipartite,{u},{v},{z},{unb:.4},{gy:.4}");
            }
        }
        OutputFormat::Text => {
            println!("six-cycle-free edge maxima:");
            for (n, ex, nodes, _, hi) in &general {
                println!("  n = {n}: {ex} edges (bound {hi:.2}, {nodes} nodes)");
            }
            for (u, v, z, unb, gy) in &bip {
                println!("  bipartite {u}x{v}: {z} edges (bounds {unb:.2} / {gy:.2})");
            }
        }
    }
    Ok(0)
}

fn cmd_bounds(cfg: &RunConfig, n_from: u64, n_to: u64, factor: u64) -> Result<i32> {
    if factor < 2 {
        return Err(Error::InvalidArgument("factor must be at least 2".into()));
    }
    if n_to < n_from {
        return Err(Error::InvalidArgument("n_to must be at least n_from".into()));
    }
    let sieve = make_sieve(cfg, n_to)?;
    let mut rows = Vec::new();
    let mut n = n_from;
    loop {
        rows.push(g3_bound_report(n, &sieve)?);
        match n.checked_mul(factor) {
            Some(next) if next <= n_to => n = next,
            _ => break,
        }
    }

    match cfg.format {
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "pi_n": r.pi_n,
                        "pi_half": r.pi_half,
                        "exponent": r.exponent,
                        "exponent_formula": "2^(1/3) - 1/3",
                        "main_error": r.main_error,
                        "main_error_formula": "n^(2/3)*(ln n)^(2^(1/3)-1/3)",
                        "proof_error": r.proof_error,
                        "proof_error_formula": "n^(2/3)*(ln n)^(2^(1/3)-1/3)*(lnln n)^2",
                        "lower_error": r.lower_error,
                        "lower_error_formula": "n^(2/3)/(ln n)^(4/3)",
                        "upper_estimate": r.upper_estimate,
                        "upper_estimate_formula": "pi(n)+pi(n/2)+main_error",
                        "o1": r.o1,
                    })
                })
                .collect();
            print_json(&Value::Array(items));
        }
        OutputFormat::Csv => {
            println!("n,pi_n,pi_half,exponent,main_error,proof_error,lower_error,upper_estimate,o1");
            for r in &rows {
                println!(
                    "{},{},{},{:.6},{:.4},{:.4},{:.4},{:.4},{}",
                    r.n, r.pi_n, r.pi_half, r.exponent, r.main_error, r.proof_error, r.lower_error, r.upper_estimate, r.o1
                );
            }
        }
        OutputFormat::Text => {
            for r in &rows {
                println!(
                    "n = {}: pi(n) = {}, pi(n/2) = {}, error term ~ {:.2} (exponent {:.4} + {})",
                    r.n, r.pi_n, r.pi_half, r.main_error, r.exponent, r.o1
                );
            }
        }
    }
    Ok(0)
}
