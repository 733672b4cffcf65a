use std::io::{ErrorKind, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use maxmatch::extremal::{asymptotic_constants, asymptotic_ratio_with, build_optimal, is_minimum, ASYMPTOTIC_DIGITS};
use maxmatch::matching::{
    bipartition_condition, local_conditions, match_stats, matching_polynomial, vertex_types, VertexType, Witness,
};
use maxmatch::outline::outline;
use maxmatch::verify::{
    figure9_checks, local_condition_checks, lower_bound_checks, optimality_checks, table_checks, transfer_checks,
    verify_optimal_by_enumeration, CheckRecord, Manifest,
};
use maxmatch::enumerate::enumerate_free_trees;
use maxmatch::expr::{expr_to_tree, parse_expr, parse_tree, recognise};
use maxmatch::{Error, RootedTree, Tree};

#[derive(Parser)]
#[command(name = "maxmatch", version, about = "Count maximum matchings in trees and build the trees with the most")]
struct Cli {
    /// Print one JSON object per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matching number and maximum-matching counts at the root.
    Count(Input),
    /// Root statistics, bipartition condition and local conditions.
    Stats(Input),
    /// Type (A or B) of every vertex.
    Types(Input),
    /// Coefficients of the matching polynomial.
    Poly(Input),
    /// The tree(s) of order n with the most maximum matchings.
    Optimal {
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Dsl)]
        emit: Emit,
    },
    /// Whether a tree has the fewest maximum matchings for its order.
    Minimal(Input),
    /// All free trees of order n.
    Enumerate {
        n: usize,
        /// Search for the maximisers of m and compare with the construction.
        #[arg(long)]
        verify_optimal: bool,
        /// Print only the number of trees.
        #[arg(long, conflicts_with = "verify_optimal")]
        count: bool,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Reproduce the replacement tables.
    Tables {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check (m, m0) of the reference rooted trees.
    Fig9 {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Compare m of the optimal tree with the asymptotic formula, or list
    /// the constants.
    Asymptotics {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = ASYMPTOTIC_DIGITS)]
        digits: usize,
    },
    /// Outline graph of a tree, or of the optimal tree of order --n.
    Outline {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with_all = ["expr", "file"])]
        n: Option<usize>,
    },
    /// Parse an expression and print its normal form.
    Parse { expr: String },
}

#[derive(Args)]
struct Input {
    /// Tree expression; read from --file or standard input when absent.
    expr: Option<String>,
    /// File holding an expression or an edge list.
    #[arg(long, short, conflicts_with = "expr")]
    file: Option<PathBuf>,
    /// Root vertex; defaults to the expression root or vertex 0.
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Lower bound, tables, reference trees, local conditions and chain growth.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    tables: bool,
    #[arg(long)]
    fig9: bool,
    /// Exhaustive lower-bound check up to this order.
    #[arg(long)]
    lower_bound: Option<usize>,
    /// Local conditions on constructed optimal trees up to this order.
    #[arg(long)]
    local: Option<usize>,
    /// Chain growth up to this many links.
    #[arg(long)]
    transfer: Option<usize>,
    /// Optimality by enumeration for orders 4 up to this one.
    #[arg(long)]
    optimal: Option<usize>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Edges,
    Dsl,
}

enum Failure {
    Usage(String),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
}

/// Writes a line to stdout; a closed pipe ends the process quietly.
fn say(line: &str) {
    if let Err(e) = writeln!(std::io::stdout().lock(), "{line}") {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

impl Out {
    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            say(&value.to_string());
        } else {
            say(&text());
        }
    }

    fn records(&self, records: &[CheckRecord]) -> Outcome {
        for r in records {
            if self.json {
                say(&r.to_json());
            } else {
                say(&r.to_string());
            }
        }
        let failed = records.iter().filter(|r| !r.passed()).count();
        if failed > 0 {
            Err(Failure::Checks(failed))
        } else {
            Ok(())
        }
    }
}

fn looks_like_edge_list(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("n ") || l.starts_with(|c: char| c.is_ascii_digit()))
}

impl Input {
    fn read(&self) -> Result<RootedTree, Failure> {
        let text = match (&self.expr, &self.file) {
            (Some(e), None) => e.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
            (None, None) => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
                s
            }
            (Some(_), Some(_)) => return Err(Failure::Usage("give either an expression or --file".into())),
        };
        let mut rt = if looks_like_edge_list(&text) {
            RootedTree::new(Tree::parse_edge_list(&text)?, 0)?
        } else {
            parse_tree(text.trim())?
        };
        if let Some(r) = self.root {
            rt = RootedTree::new(rt.tree, r)?;
        }
        Ok(rt)
    }
}

fn manifest(path: &Option<PathBuf>) -> Result<Manifest, Failure> {
    Ok(match path {
        Some(p) => Manifest::load(Path::new(p))?,
        None => Manifest::embedded(),
    })
}

fn edges_json(t: &Tree) -> Value {
    json!(t.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>())
}

fn count(out: &Out, input: &Input) -> Outcome {
    let rt = input.read()?;
    let s = match_stats(&rt);
    out.emit(
        json!({
            "order": rt.order(), "mu": s.mu, "m": s.m.to_string(), "m0": s.m0.to_string(),
            "m1": s.m1.to_string(), "type": s.node_type.to_string(), "rho": s.rho.to_string(),
        }),
        || format!("mu={} m={} m0={} m1={} type={} rho={}", s.mu, s.m, s.m0, s.m1, s.node_type, s.rho),
    );
    Ok(())
}

fn stats(out: &Out, input: &Input) -> Outcome {
    let rt = input.read()?;
    let s = match_stats(&rt);
    let types = vertex_types(&rt.tree);
    let bip = bipartition_condition(&rt.tree).ok();
    let lc = local_conditions(&rt.tree);
    let failed: Vec<String> = lc
        .witnesses
        .iter()
        .map(|(i, w)| match w {
            Witness::Vertex(v) => format!("LC{i} at vertex {v}"),
            Witness::Edge(u, v) => format!("LC{i} at edge {u}-{v}"),
        })
        .collect();
    out.emit(
        json!({
            "order": rt.order(), "root": rt.root, "mu": s.mu, "m": s.m.to_string(), "m0": s.m0.to_string(),
            "m1": s.m1.to_string(), "type": s.node_type.to_string(), "rho": s.rho.to_string(),
            "type_a": types.count(VertexType::A), "type_b": types.count(VertexType::B),
            "bipartition_condition": bip, "local_conditions": lc.flags(), "violations": failed,
        }),
        || {
            let flags: Vec<String> = lc
                .flags()
                .iter()
                .enumerate()
                .map(|(i, ok)| format!("LC{}={}", i + 1, if *ok { "yes" } else { "no" }))
                .collect();
            let mut text = format!(
                "order={} root={}\nmu={} m={} m0={} m1={} type={} rho={}\ntype A vertices={} type B vertices={}\nbipartition condition={}\n{}",
                rt.order(),
                rt.root,
                s.mu,
                s.m,
                s.m0,
                s.m1,
                s.node_type,
                s.rho,
                types.count(VertexType::A),
                types.count(VertexType::B),
                bip.map_or("n/a".to_string(), |b| b.to_string()),
                flags.join(" "),
            );
            for f in &failed {
                text.push_str(&format!("\n  {f}"));
            }
            text
        },
    );
    Ok(())
}

fn types(out: &Out, input: &Input) -> Outcome {
    let rt = input.read()?;
    let types = vertex_types(&rt.tree);
    for v in 0..rt.order() {
        let ty = types.get(v);
        out.emit(json!({"vertex": v, "type": ty.to_string()}), || format!("{v} {ty}"));
    }
    Ok(())
}

fn poly(out: &Out, input: &Input) -> Outcome {
    let rt = input.read()?;
    let p = matching_polynomial(&rt.tree);
    let coeffs: Vec<String> = p.coeffs.iter().map(|c| c.to_string()).collect();
    out.emit(json!({"coeffs": coeffs}), || {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => c.clone(),
                1 => format!("{c} x"),
                _ => format!("{c} x^{k}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    });
    Ok(())
}

fn optimal(out: &Out, n: usize, emit: Emit) -> Outcome {
    let family = build_optimal(n)?;
    let m = family.m();
    for member in &family.members {
        let dsl = member.expr.to_string();
        out.emit(
            json!({"n": n, "m": m.to_string(), "dsl": dsl, "edges": edges_json(&member.tree)}),
            || match emit {
                Emit::Dsl => dsl.clone(),
                Emit::Edges => member.tree.to_edge_list(Some(&format!("m = {m}"))).trim_end().to_string(),
            },
        );
    }
    Ok(())
}

fn minimal(out: &Out, input: &Input) -> Outcome {
    let rt = input.read()?;
    let n = rt.order();
    let m = match_stats(&rt).m;
    let bound = if n % 2 == 0 { 1 } else { 2 };
    let min = is_minimum(&rt.tree);
    out.emit(
        json!({"order": n, "m": m.to_string(), "lower_bound": bound, "is_minimum": min}),
        || format!("order={n} m={m} lower bound={bound} minimum={min}"),
    );
    Ok(())
}

fn enumerate(out: &Out, n: usize, verify_optimal: bool, only_count: bool) -> Outcome {
    if verify_optimal {
        let r = verify_optimal_by_enumeration(n)?;
        say(&r.to_json().to_string());
        return if r.matches_construction { Ok(()) } else { Err(Failure::Checks(1)) };
    }
    let trees = enumerate_free_trees(n)?;
    if only_count {
        let c = trees.count();
        out.emit(json!({"n": n, "count": c}), || c.to_string());
        return Ok(());
    }
    for t in trees {
        out.emit(json!({"n": n, "edges": edges_json(&t)}), || {
            t.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
        });
    }
    Ok(())
}

fn verify(out: &Out, a: &VerifyArgs) -> Outcome {
    let lower_bound = a.lower_bound.or(a.all.then_some(14));
    let local = a.local.or(a.all.then_some(200));
    let transfer = a.transfer.or(a.all.then_some(30));
    let tables = a.tables || a.all;
    let fig9 = a.fig9 || a.all;
    if !(tables || fig9) && lower_bound.is_none() && local.is_none() && transfer.is_none() && a.optimal.is_none() {
        return Err(Failure::Usage("nothing to verify; pass --all or a suite flag".into()));
    }
    let manifest = manifest(&a.manifest)?;
    let mut records = Vec::new();
    if let Some(n) = lower_bound {
        records.extend(lower_bound_checks(n)?);
    }
    if tables {
        records.extend(table_checks(&manifest));
    }
    if fig9 {
        records.extend(figure9_checks(&manifest));
    }
    if let Some(n) = local {
        records.extend(local_condition_checks(21..=n)?);
    }
    if let Some(k) = transfer {
        records.extend(transfer_checks(k)?);
    }
    if let Some(n) = a.optimal {
        records.extend(optimality_checks(4..=n)?);
    }
    out.records(&records)
}

fn asymptotics(out: &Out, n: Option<usize>, digits: usize) -> Outcome {
    match n {
        Some(n) => {
            let r = asymptotic_ratio_with(n, digits)?;
            let j = n % 7;
            out.emit(
                json!({
                    "n": n, "m": r.m.to_string(), "j": j, "digits": digits,
                    "ratio": r.ratio_decimal().to_string(), "constant": r.constant_decimal().to_string(),
                    "relative_error": r.relative_error_text(),
                }),
                || {
                    format!(
                        "n={n} m={}\nm / lambda^(n/7) = {}\nc_{j} = {}\nrelative error = {}",
                        r.m,
                        r.ratio_decimal(),
                        r.constant_decimal(),
                        r.relative_error_text()
                    )
                },
            );
        }
        None => {
            for c in asymptotic_constants() {
                out.emit(serde_json::to_value(&c).expect("constants serialise"), || {
                    format!(
                        "c_{} = ({} lambda - {}) / ({} lambda^({}/7)) = {}  published {}  relative error {}",
                        c.j, c.p, c.q, c.d, c.j, c.value, c.published, c.relative_error
                    )
                });
            }
        }
    }
    Ok(())
}

fn show_outline(out: &Out, input: &Input, n: Option<usize>) -> Outcome {
    let tree = match n {
        Some(n) => build_optimal(n)?.members.swap_remove(0).tree,
        None => input.read()?.tree,
    };
    let o = outline(&tree);
    out.emit(
        json!({
            "order": tree.order(),
            "skeleton_order": o.skeleton.order(),
            "skeleton_edges": edges_json(&o.skeleton),
            "special_leaves": o.special_leaves.iter().map(|(v, t)| json!({"vertex": v, "tag": t.to_string()})).collect::<Vec<_>>(),
            "special_edges": o.special_edges.iter().map(|e| json!({"upper": e.upper, "lower": e.lower, "k": e.k})).collect::<Vec<_>>(),
            "tag_counts": o.tag_counts(),
        }),
        || o.to_string().trim_end().to_string(),
    );
    Ok(())
}

fn parse(out: &Out, text: &str) -> Outcome {
    let e = parse_expr(text)?;
    let ty = e.type_check()?;
    let normal = recognise(&expr_to_tree(&e)?)?;
    out.emit(
        json!({"expr": normal.to_string(), "order": e.order(), "type": ty.to_string()}),
        || normal.to_string(),
    );
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::Count(i) => count(&out, i),
        Command::Stats(i) => stats(&out, i),
        Command::Types(i) => types(&out, i),
        Command::Poly(i) => poly(&out, i),
        Command::Optimal { n, emit } => optimal(&out, *n, *emit),
        Command::Minimal(i) => minimal(&out, i),
        Command::Enumerate { n, verify_optimal, count } => enumerate(&out, *n, *verify_optimal, *count),
        Command::Verify(a) => verify(&out, a),
        Command::Tables { manifest: m } => out.records(&table_checks(&manifest(m)?)),
        Command::Fig9 { manifest: m } => out.records(&figure9_checks(&manifest(m)?)),
        Command::Asymptotics { n, digits } => asymptotics(&out, *n, *digits),
        Command::Outline { input, n } => show_outline(&out, input, *n),
        Command::Parse { expr } => parse(&out, expr),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
