//! Argument parsing and the subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dualram_core::algebras::{epi_set, free_algebra, hom_set};
use dualram_core::chains::enumerate_rigid_surjections;
use dualram_core::ordered::{ordered_free, rigid_epi_set, OrderedAlgebra};
use dualram_core::ramsey::segments::{plan_segments, segment_induction, SegmentOutcome};
use dualram_core::ramsey::transport::{transport_into, ColoringMode};
use dualram_core::ramsey::{
    check_arrow, check_coloring, gr_witness_search, hom, small_degree_bounds, ArrowCertificate, Category, Coloring, Direction, Object,
    SearchConfig, Verdict, VerdictKind,
};
use dualram_core::terms::{enumerate_neat, render};

use crate::catalog::{Catalog, CATALOG_ENV};
use crate::io::{term_to_json, to_pretty, AlgebraFile};
use crate::report::RunReport;
use crate::suite::{self, Mutant, Scope, SuiteConfig};

/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;
/// Exit code for inputs that parse but cannot be processed.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dualram", version, about = "Workbench for dual Ramsey arrows over chains and ordered algebras")]
pub struct Cli {
    /// Catalog directory (defaults to $RAMSEY_WORKBENCH_CATALOG, then the bundled catalog).
    #[arg(long, global = true, value_name = "DIR")]
    pub catalog: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Print results as JSON instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write a run report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Record wall-clock timings in the run report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List rigid surjections, terms or morphisms.
    Enumerate {
        #[command(subcommand)]
        kind: EnumerateKind,
    },
    /// Build the free algebra of a catalog variety.
    Free {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        n: usize,
        /// Order the carrier by least terms in the neat order.
        #[arg(long)]
        ordered: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Decide a partition arrow C ⟵ (B)^A_{k,t}.
    CheckArrow(ArrowArgs),
    /// Least n with n ⟵ (b)^a_k among finite chains.
    GrSearch {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Catalog-relative bounds on the small Ramsey degree of an object.
    Degree {
        #[arg(long)]
        category: Category,
        #[arg(long, value_enum, default_value_t = DirectionArg::Dual)]
        direction: DirectionArg,
        #[arg(long)]
        a: String,
        /// Candidate objects B, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        /// Candidate objects C, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<String>,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[arg(long, default_value_t = 3)]
        t_max: usize,
    },
    /// Transport a chain arrow to an ordered free algebra and validate it.
    Transport {
        #[arg(long)]
        variety: String,
        /// Ordered algebra A (catalog name or free:VARIETY:N).
        #[arg(long)]
        a: String,
        /// Ordered algebra B.
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Largest chain tried for the chain-level arrow.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ColoringsArg::All)]
        colorings: ColoringsArg,
        /// Number of random colorings.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Reduce colorings of rigid epimorphisms onto A one segment at a time.
    SegmentInduction {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Generators of the smaller free algebra (defaults to |A|).
        #[arg(long)]
        m: Option<usize>,
        /// Explicit chain sizes P_0, …, P_s instead of planning them.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Random colorings tried after the constant one.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Replay the lemma battery at finite sizes.
    VerifySuite {
        #[arg(long, value_enum, default_value_t = Scope::All)]
        scope: Scope,
        #[arg(long, default_value_t = 6)]
        max_chain: usize,
        #[arg(long, default_value_t = 8)]
        max_term_len: usize,
        #[arg(long, default_value_t = 3)]
        max_generators: usize,
        /// Run with a deliberate defect to check that the suite fails.
        #[arg(long, value_enum)]
        inject_mutant: Option<Mutant>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EnumerateKind {
    RigidSurjections {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Terms {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        max_shape_len: usize,
    },
    /// Homomorphisms between catalog algebras.
    Homs {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Surjective homomorphisms between catalog algebras.
    Epis {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Rigid epimorphisms between ordered catalog algebras.
    RigidEpis {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Debug, Args)]
pub struct ArrowArgs {
    #[arg(long)]
    pub category: Category,
    #[arg(long, value_enum, default_value_t = DirectionArg::Dual)]
    pub direction: DirectionArg,
    #[arg(long)]
    pub c: String,
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Check only this coloring (JSON) instead of all colorings.
    #[arg(long, value_name = "FILE")]
    pub coloring: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Dual,
    Direct,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Dual => Direction::Dual,
            DirectionArg::Direct => Direction::Direct,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColoringsArg {
    All,
    Random,
}

/// What a subcommand produced.
struct Outcome {
    summary: String,
    results: Value,
    exit: i32,
}

impl Outcome {
    fn ok(summary: String, results: Value) -> Self {
        Outcome { summary, results, exit: 0 }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let echo = command_echo(&args);
    match execute(&cli, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

/// The arguments after the program name, without `--report FILE`: where a
/// report is written is not an input of the run.
fn command_echo(args: &[std::ffi::OsString]) -> Vec<String> {
    let mut echo = Vec::new();
    let mut skip_next = false;
    for a in args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()) {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        if a == "--report" {
            skip_next = true;
        } else if !a.starts_with("--report=") {
            echo.push(a);
        }
    }
    echo
}

fn load_catalog(explicit: Option<&Path>) -> Result<Catalog> {
    let dir = Catalog::locate(explicit);
    let named = explicit.is_some() || std::env::var_os(CATALOG_ENV).is_some();
    if !named && !dir.is_dir() {
        return Ok(Catalog::default());
    }
    Catalog::load(&dir).with_context(|| format!("loading catalog {}", dir.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn execute(cli: &Cli, echo: Vec<String>) -> Result<i32> {
    let start = Instant::now();
    let catalog = load_catalog(cli.catalog.as_deref())?;
    let config = SearchConfig {
        node_budget: cli.budget,
        seed: cli.seed,
        ..SearchConfig::default()
    };
    let outcome = match &cli.command {
        Command::Enumerate { kind } => enumerate(&catalog, kind)?,
        Command::Free { variety, n, ordered, out } => free(&catalog, variety, *n, *ordered, out.as_deref())?,
        Command::CheckArrow(args) => arrow(&catalog, args, &config)?,
        Command::GrSearch { a, b, k, max_n, out } => gr_search(*a, *b, *k, *max_n, out.as_deref(), &config)?,
        Command::Degree {
            category,
            direction,
            a,
            b,
            c,
            k_max,
            t_max,
        } => degree(&catalog, *category, (*direction).into(), a, b, c, (*k_max, *t_max), &config)?,
        Command::Transport {
            variety,
            a,
            b,
            k,
            t,
            max_n,
            colorings,
            count,
            out,
        } => {
            let mode = match colorings {
                ColoringsArg::All => ColoringMode::All,
                ColoringsArg::Random => ColoringMode::Random {
                    count: *count,
                    seed: cli.seed,
                },
            };
            transport(&catalog, variety, (a, b), (*k, *t), *max_n, &mode, out.as_deref(), &config)?
        }
        Command::SegmentInduction {
            variety,
            a,
            k,
            m,
            sizes,
            max_n,
            count,
            out,
        } => segments(&catalog, variety, a, *k, *m, sizes.as_deref(), *max_n, *count, out.as_deref(), &config)?,
        Command::VerifySuite {
            scope,
            max_chain,
            max_term_len,
            max_generators,
            inject_mutant,
        } => {
            let sc = SuiteConfig {
                max_chain: *max_chain,
                max_term_len: *max_term_len,
                max_generators: *max_generators,
                mutant: *inject_mutant,
                seed: cli.seed,
            };
            verify(&catalog, *scope, &sc)?
        }
    };

    if cli.json {
        print!("{}", to_pretty(&outcome.results)?);
    } else {
        print!("{}", outcome.summary);
    }
    if let Some(path) = &cli.report {
        let mut report = RunReport::new(echo, &catalog.digest, cli.seed, outcome.results);
        if cli.timings {
            report.timings = Some(json!({ "total_ms": start.elapsed().as_millis() as u64 }));
        }
        write_file(path, &to_pretty(&report)?)?;
    }
    Ok(outcome.exit)
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn enumerate(catalog: &Catalog, kind: &EnumerateKind) -> Result<Outcome> {
    let mut s = String::new();
    let (entries, count) = match kind {
        EnumerateKind::RigidSurjections { n, k } => {
            let maps = enumerate_rigid_surjections(*n, *k);
            for m in &maps {
                writeln!(s, "{:?}", m.table)?;
            }
            (to_value(&maps)?, maps.len())
        }
        EnumerateKind::Terms { sig, vars, max_shape_len } => {
            let sig = catalog.signature(sig)?;
            let terms = enumerate_neat(sig, *vars, *max_shape_len);
            let mut listed = Vec::with_capacity(terms.len());
            for t in &terms {
                let r = render(t, sig);
                writeln!(s, "{r}")?;
                listed.push(json!({ "rendered": r, "term": term_to_json(t, sig) }));
            }
            (Value::Array(listed), terms.len())
        }
        EnumerateKind::Homs { from, to } | EnumerateKind::Epis { from, to } => {
            let (a, b) = (catalog.algebra(from)?, catalog.algebra(to)?);
            let maps = match kind {
                EnumerateKind::Homs { .. } => hom_set(a, b)?,
                _ => epi_set(a, b)?,
            };
            let tables: Vec<&Vec<usize>> = maps.iter().map(|h| &h.table).collect();
            for t in &tables {
                writeln!(s, "{t:?}")?;
            }
            (to_value(&tables)?, tables.len())
        }
        EnumerateKind::RigidEpis { from, to } => {
            let (a, b) = (catalog.ordered(from)?, catalog.ordered(to)?);
            let maps = rigid_epi_set(a, b)?;
            for h in &maps {
                writeln!(s, "{:?}", h.table)?;
            }
            (to_value(&maps)?, maps.len())
        }
    };
    writeln!(s, "{count} entries")?;
    Ok(Outcome::ok(s, json!({ "count": count, "entries": entries })))
}

fn free(catalog: &Catalog, variety: &str, n: usize, ordered: bool, out: Option<&Path>) -> Result<Outcome> {
    let v = catalog.variety(variety)?;
    let mut s = String::new();
    let results = if ordered {
        let f = ordered_free(v, n)?;
        let sig = f.ordered.signature().clone();
        let file = AlgebraFile::from_ordered(&format!("free:{variety}:{n}"), &f.ordered);
        writeln!(s, "free algebra of {variety} on {n} generators: {} elements", f.size())?;
        writeln!(s, "order by least terms in the neat well-order (cover length {}):", f.cover_length)?;
        for (e, t) in f.min_terms.iter().enumerate() {
            writeln!(s, "  {e}: {}", render(t, &sig))?;
        }
        if let Some(path) = out {
            write_file(path, &to_pretty(&file)?)?;
        }
        let min_terms: Vec<Value> = f
            .min_terms
            .iter()
            .enumerate()
            .map(|(e, t)| json!({ "element": e, "rendered": render(t, &sig), "term": term_to_json(t, &sig) }))
            .collect();
        json!({ "size": f.size(), "cover_length": f.cover_length, "algebra": file, "min_terms": min_terms })
    } else {
        let f = free_algebra(v, n)?;
        let file = AlgebraFile::from_algebra(&format!("free:{variety}:{n}"), &f.algebra, None);
        writeln!(s, "free algebra of {variety} on {n} generators: {} elements", f.size())?;
        writeln!(s, "generators at {:?}", f.generator_elements)?;
        if let Some(path) = out {
            write_file(path, &to_pretty(&file)?)?;
        }
        json!({ "size": f.size(), "generators": f.generator_elements, "algebra": file })
    };
    Ok(Outcome::ok(s, results))
}

/// The result a check in `category` replays.
fn theorem_name(category: Category) -> &'static str {
    match category {
        Category::ChainsRs => "dual Ramsey theorem for finite chains (Graham–Rothschild)",
        Category::OrderedAlgebrasRe => "dual Ramsey property of ordered algebras under rigid epimorphisms",
        Category::AlgebrasEpi => "dual small Ramsey degrees of algebras under epimorphisms",
    }
}

fn verdict_exit(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::Holds => 0,
        VerdictKind::Fails => 1,
        VerdictKind::Unknown => 2,
    }
}

fn describe(cert: &ArrowCertificate, refs: (&str, &str, &str)) -> Result<String> {
    let q = &cert.query;
    let mut s = String::new();
    let arrow = match q.direction {
        Direction::Dual => "⟵",
        Direction::Direct => "⟶",
    };
    writeln!(s, "{} {arrow} ({})^{}_{{{},{}}} in {}: {}", refs.0, refs.1, refs.2, q.k, q.t, q.category, kind_name(cert.kind()))?;
    writeln!(s, "  by the {}", theorem_name(q.category))?;
    writeln!(
        s,
        "  hom-sets: {} colored, {} witnesses, {} connecting; method {:?}, {} nodes",
        cert.hom_sizes.colored, cert.hom_sizes.witnesses, cert.hom_sizes.connecting, cert.stats.method, cert.stats.nodes
    )?;
    match &cert.verdict {
        Verdict::Holds { witness: Some(w), .. } => writeln!(s, "  witness {:?}", w.table)?,
        Verdict::Holds { .. } => writeln!(s, "  every coloring has a witness")?,
        Verdict::Fails { coloring } if coloring.len() <= 32 => writeln!(s, "  refuting coloring {:?}", coloring.colors)?,
        Verdict::Fails { coloring } => writeln!(s, "  refuting coloring of {} morphisms (see --json or --out)", coloring.len())?,
        Verdict::Unknown { reason } => writeln!(s, "  {reason}")?,
    }
    Ok(s)
}

fn kind_name(k: VerdictKind) -> &'static str {
    match k {
        VerdictKind::Holds => "HOLDS",
        VerdictKind::Fails => "FAILS",
        VerdictKind::Unknown => "UNKNOWN",
    }
}

fn arrow(catalog: &Catalog, args: &ArrowArgs, config: &SearchConfig) -> Result<Outcome> {
    let cat = args.category;
    let (c, b, a) = (catalog.object(cat, &args.c)?, catalog.object(cat, &args.b)?, catalog.object(cat, &args.a)?);
    let cert = match &args.coloring {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let coloring: Coloring = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if coloring.k != args.k {
                bail!("the coloring uses k = {}, the query k = {}", coloring.k, args.k);
            }
            check_coloring(cat, args.direction.into(), (&c, &b, &a), &coloring, args.t)?
        }
        None => check_arrow(cat, args.direction.into(), &c, &b, &a, args.k, args.t, config)?,
    };
    if let Some(path) = &args.out {
        write_file(path, &to_pretty(&cert)?)?;
    }
    Ok(Outcome {
        summary: describe(&cert, (&args.c, &args.b, &args.a))?,
        exit: verdict_exit(cert.kind()),
        results: to_value(&cert)?,
    })
}

fn gr_search(a: usize, b: usize, k: usize, max_n: usize, out: Option<&Path>, config: &SearchConfig) -> Result<Outcome> {
    let found = gr_witness_search(a, b, k, max_n, config)?;
    if let Some(path) = out {
        write_file(path, &to_pretty(&found)?)?;
    }
    let mut s = String::new();
    writeln!(s, "least n with n ⟵ ({b})^{a}_{k}, by the {}", theorem_name(Category::ChainsRs))?;
    for (n, kind) in &found.history {
        writeln!(s, "  n = {n}: {}", kind_name(*kind))?;
    }
    match found.n {
        Some(n) => writeln!(s, "least n = {n}")?,
        None => writeln!(s, "no n ≤ {max_n} certified")?,
    }
    Ok(Outcome {
        summary: s,
        exit: if found.n.is_some() { 0 } else { 2 },
        results: to_value(&found)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn degree(
    catalog: &Catalog,
    category: Category,
    direction: Direction,
    a: &str,
    bs: &[String],
    cs: &[String],
    (k_max, t_max): (usize, usize),
    config: &SearchConfig,
) -> Result<Outcome> {
    let a_obj = catalog.object(category, a)?;
    let b_objs = bs.iter().map(|r| catalog.object(category, r)).collect::<Result<Vec<_>>>()?;
    let c_objs = cs.iter().map(|r| catalog.object(category, r)).collect::<Result<Vec<_>>>()?;
    let bounds = small_degree_bounds(category, direction, &a_obj, &b_objs, &c_objs, k_max, t_max, config)?;
    let mut s = String::new();
    writeln!(s, "small Ramsey degree of {a} in {category}, relative to the candidates given")?;
    writeln!(s, "  lower bound {}", bounds.lower)?;
    match bounds.upper {
        Some(u) => writeln!(s, "  upper bound {u}")?,
        None => writeln!(s, "  no upper bound up to t = {t_max}")?,
    }
    for (k, bi, t) in &bounds.refutations {
        writeln!(s, "  every C fails for k = {k}, B = {}, t = {t}", bs[*bi])?;
    }
    if bounds.undecided > 0 {
        writeln!(s, "  {} checks undecided", bounds.undecided)?;
    }
    Ok(Outcome::ok(s, to_value(&bounds)?))
}

fn ordered_object(catalog: &Catalog, reference: &str) -> Result<OrderedAlgebra> {
    match catalog.object(Category::OrderedAlgebrasRe, reference)? {
        Object::Ordered(a) => Ok(a),
        _ => Err(anyhow!("`{reference}` is not an ordered algebra")),
    }
}

#[allow(clippy::too_many_arguments)]
fn transport(
    catalog: &Catalog,
    variety: &str,
    (a_ref, b_ref): (&str, &str),
    (k, t): (usize, usize),
    max_n: usize,
    mode: &ColoringMode,
    out: Option<&Path>,
    config: &SearchConfig,
) -> Result<Outcome> {
    let v = catalog.variety(variety)?;
    let (a, b) = (ordered_object(catalog, a_ref)?, ordered_object(catalog, b_ref)?);
    if !v.contains(a.algebra())? || !v.contains(b.algebra())? {
        bail!("A and B must lie in {variety}");
    }
    let mut s = String::new();
    writeln!(s, "transport of the {} to ordered free algebras of {variety}", theorem_name(Category::ChainsRs))?;
    let (bc, ac) = (Object::Chain(b.size()), Object::Chain(a.size()));
    let mut chain_cert = None;
    for n in b.size()..=max_n {
        let cert = check_arrow(Category::ChainsRs, Direction::Dual, &Object::Chain(n), &bc, &ac, k, t, config)?;
        writeln!(s, "  chains: {n} ⟵ ({})^{}_{{{k},{t}}}: {}", b.size(), a.size(), kind_name(cert.kind()))?;
        match cert.kind() {
            VerdictKind::Holds => {
                chain_cert = Some(cert);
                break;
            }
            VerdictKind::Fails => {}
            VerdictKind::Unknown => break,
        }
    }
    let Some(chain_cert) = chain_cert else {
        writeln!(s, "UNKNOWN at step chain-arrow: no chain certificate up to n = {max_n}")?;
        return Ok(Outcome {
            summary: s,
            results: json!({ "outcome": "UNKNOWN", "step": "chain-arrow", "max_n": max_n }),
            exit: 2,
        });
    };
    let n = chain_cert.query.c;
    let free = ordered_free(v, n)?;
    writeln!(s, "  ordered free algebra on {n} generators: {} elements", free.size())?;
    let report = transport_into(&free, &a, &b, k, t, mode)?;
    let validated = report.traces.iter().filter(|tr| tr.validated).count();
    writeln!(s, "  pulled back {} colorings along the reflection, pushed chain witnesses forward", report.traces.len())?;
    writeln!(s, "  {validated} of {} transported witnesses validated directly", report.traces.len())?;
    writeln!(s, "{}", kind_name(report.certificate.kind()))?;
    if let Some(path) = out {
        write_file(path, &to_pretty(&report)?)?;
    }
    Ok(Outcome {
        summary: s,
        exit: verdict_exit(report.certificate.kind()),
        results: json!({ "chain_certificate": chain_cert, "transport": report }),
    })
}

#[allow(clippy::too_many_arguments)]
fn segments(
    catalog: &Catalog,
    variety: &str,
    a_ref: &str,
    k: usize,
    m: Option<usize>,
    sizes: Option<&[usize]>,
    max_n: usize,
    count: usize,
    out: Option<&Path>,
    config: &SearchConfig,
) -> Result<Outcome> {
    let v = catalog.variety(variety)?;
    let a = ordered_object(catalog, a_ref)?;
    let s_count = a.size();
    let mut s = String::new();
    writeln!(s, "segment-by-segment induction for colorings of rigid epimorphisms onto {a_ref}")?;
    let sizes = match sizes {
        Some(given) => given.to_vec(),
        None => match plan_segments(s_count, k, m.unwrap_or(s_count), max_n, config)? {
            Some(planned) => planned,
            None => {
                writeln!(s, "UNKNOWN at step plan: some chain size exceeds {max_n}")?;
                return Ok(Outcome {
                    summary: s,
                    results: json!({ "outcome": "UNKNOWN", "step": "plan", "max_n": max_n }),
                    exit: 2,
                });
            }
        },
    };
    if sizes.len() != s_count + 1 {
        bail!("{} chain sizes given for {s_count} segments", sizes.len());
    }
    writeln!(s, "  chain sizes {sizes:?}")?;
    let big = ordered_free(v, sizes[s_count])?;
    let small = ordered_free(v, sizes[0])?;
    let domain = hom(Category::OrderedAlgebrasRe, &Object::Ordered(big.ordered.clone()), &Object::Ordered(a.clone()))?;
    let mut colorings = vec![Coloring::constant(k, domain.clone(), 0)?];
    for i in 0..count as u64 {
        colorings.push(Coloring::random(k, domain.clone(), config.seed.wrapping_add(i))?);
    }
    let budget = config.node_budget.unwrap_or(1_000_000);
    let mut outcomes = Vec::with_capacity(colorings.len());
    let mut certified = 0;
    for (i, chi) in colorings.iter().enumerate() {
        let outcome = segment_induction(&a, &sizes, &big, &small, chi, budget)?;
        let label = if i == 0 { "constant".to_string() } else { format!("random #{i}") };
        match &outcome {
            SegmentOutcome::Certified(c) => {
                certified += 1;
                writeln!(s, "  {label}: certified, {} colors left, u = {:?}", c.colors_used.len(), c.u.table)?;
            }
            SegmentOutcome::Unknown { step, reason } => writeln!(s, "  {label}: UNKNOWN at segment {step}: {reason}")?,
        }
        outcomes.push(json!({ "coloring": label, "result": outcome }));
    }
    writeln!(s, "{certified} of {} colorings certified", colorings.len())?;
    let results = json!({ "sizes": sizes, "free_size": big.size(), "outcomes": outcomes });
    if let Some(path) = out {
        write_file(path, &to_pretty(&results)?)?;
    }
    Ok(Outcome {
        summary: s,
        exit: if certified == colorings.len() { 0 } else { 2 },
        results,
    })
}

fn verify(catalog: &Catalog, scope: Scope, config: &SuiteConfig) -> Result<Outcome> {
    let report = suite::run(scope, config, catalog);
    let mut s = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(s, "{status} [{:?}] {} ({} cases)", c.scope, c.property, c.cases)?;
        if let Some(f) = &c.failure {
            writeln!(s, "     {f}")?;
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    writeln!(s, "{} checks, {failed} failed", report.checks.len())?;
    Ok(Outcome {
        summary: s,
        exit: if report.passed { 0 } else { 1 },
        results: to_value(&report)?,
    })
}
