//! Acceptance criteria. Each prints one PASS/FAIL line; the process fails if
//! any criterion fails or runs over its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use maxmatch::continuants::{certify_below, continuant, continued_fraction, path_m_via_continuants, rat, UBound};
use maxmatch::enumerate::{enumerate_free_trees, enumerate_rooted_trees};
use maxmatch::expr::{format_expr, parse_tree};
use maxmatch::extremal::{asymptotic_constants, asymptotic_ratio_with, build_optimal, LOCAL_EXCEPTIONS};
use maxmatch::matching::{
    bipartition_condition, count_max_matchings, count_max_matchings_bruteforce, edge_decomposition_check,
    local_conditions, matching_polynomial, rooted_bipartition_condition, vertex_types, VertexType,
};
use maxmatch::verify::{
    transfer_checks, verify_figure9, verify_lower_bound, verify_optimal_by_enumeration, verify_replacement_tables,
    AlphaCondition, ExpectedRow, Manifest,
};
use maxmatch::{rooted_canonical_code, Tree};

/// Relative tolerance of the asymptotic ratio at n = 700..=706 is
/// 1 / ASYMPTOTIC_TOLERANCE_INV.
const ASYMPTOTIC_TOLERANCE_INV: u64 = 100_000_000;
/// Largest order checked by exhaustive search.
const SEARCH_MAX: usize = 18;
const ORACLE_MAX: usize = 12;
const LOWER_BOUND_MAX: usize = 16;
const LOCAL_RANGE: (usize, usize) = (21, 200);
const TRANSFER_LINKS: usize = 30;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_rows(tree_rows: bool) -> Verdict {
    let manifest = Manifest::embedded();
    let rows: Vec<_> = manifest
        .replacements
        .iter()
        .filter(|r| matches!(r.expected, ExpectedRow::Tree { .. }) == tree_rows)
        .collect();
    let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
    let mut crossovers = Vec::new();
    for r in verify_replacement_tables() {
        let Some(row) = rows.iter().find(|row| row.label == r.label) else {
            continue;
        };
        let findings = r.outcome.map_err(|e| e.to_string())?;
        if let (Some(c), Some(AlphaCondition::Below(_) | AlphaCondition::Above(_))) = (findings.crossover, &row.condition) {
            crossovers.push(c.to_string());
        }
    }
    if tree_rows {
        ensure(labels.len() == 4, || format!("expected 4 tree rows, found {}", labels.len()))?;
        Ok(format!("{} rows exact", labels.len()))
    } else {
        ensure(labels.len() == 25, || format!("expected 25 rooted rows, found {}", labels.len()))?;
        Ok(format!("{} rows exact, thresholds {}", labels.len(), crossovers.join(" ")))
    }
}

fn criterion_1() -> Verdict {
    table_rows(true)
}

fn criterion_2() -> Verdict {
    table_rows(false)
}

fn criterion_3() -> Verdict {
    let rows = verify_figure9();
    ensure(rows.len() == 9, || format!("expected 9 reference trees, found {}", rows.len()))?;
    for r in rows {
        r.outcome.map_err(|e| e.to_string())?;
    }
    Ok("9 (m, m0) pairs exact".into())
}

fn criterion_4() -> Verdict {
    let mut previous = BigInt::zero();
    for n in 4..=SEARCH_MAX {
        let r = verify_optimal_by_enumeration(n).map_err(|e| e.to_string())?;
        let size = if n == 6 { 2 } else { 1 };
        ensure(r.matches_construction && r.argmax.len() == size, || {
            format!("n={n}: argmax size {} matches {}", r.argmax.len(), r.matches_construction)
        })?;
        ensure(r.max_m >= previous, || format!("max m decreased at n={n}"))?;
        previous = r.max_m;
    }
    if std::env::var_os("MAXMATCH_ACCEPT_N20").is_some() {
        let r = verify_optimal_by_enumeration(20).map_err(|e| e.to_string())?;
        ensure(r.matches_construction && r.argmax.len() == 1, || "n=20 search disagrees".into())?;
    }
    for (n, m) in [(9, 15), (10, 21), (11, 30), (17, 216), (20, 571)] {
        let got = build_optimal(n).map_err(|e| e.to_string())?.m();
        ensure(got == BigInt::from(m), || format!("m(T_{n}) = {got}, expected {m}"))?;
    }
    let f34 = build_optimal(34).map_err(|e| e.to_string())?;
    let m34: Vec<BigInt> = f34.trees().map(|t| count_max_matchings(t).1).collect();
    ensure(m34.len() == 2 && m34[0] == m34[1], || format!("n=34 counts {m34:?}"))?;
    for n in LOCAL_RANGE.0..=LOCAL_RANGE.1 {
        if LOCAL_EXCEPTIONS.contains(&n) {
            continue;
        }
        for t in build_optimal(n).map_err(|e| e.to_string())?.trees() {
            let lc = local_conditions(t);
            ensure(lc.all(), || format!("n={n} fails {:?}", lc.flags()))?;
        }
    }
    Ok(format!(
        "search 4..={SEARCH_MAX} agrees, n=34 tie m={}, local conditions hold on {}..={}",
        m34[0], LOCAL_RANGE.0, LOCAL_RANGE.1
    ))
}

fn criterion_5() -> Verdict {
    let mut trees = 0;
    for n in 1..=ORACLE_MAX {
        for t in enumerate_free_trees(n).map_err(|e| e.to_string())? {
            trees += 1;
            let (mu, m) = count_max_matchings(&t);
            let (bmu, bm) = count_max_matchings_bruteforce(&t).map_err(|e| e.to_string())?;
            ensure((mu, &m) == (bmu, &bm), || format!("order {n}: dp ({mu}, {m}) vs brute force ({bmu}, {bm})"))?;
            let p = matching_polynomial(&t);
            ensure(p.degree() == mu && p.coeffs[mu] == m, || format!("order {n}: polynomial top coefficient"))?;
        }
    }
    Ok(format!("{trees} trees, zero mismatches"))
}

fn criterion_6() -> Verdict {
    let r = verify_lower_bound(LOWER_BOUND_MAX).map_err(|e| e.to_string())?;
    ensure(r.counterexamples.is_empty(), || format!("{} counterexamples", r.counterexamples.len()))?;
    Ok(format!("{} trees, {} attain the bound, zero counterexamples", r.trees_checked, r.minimum_trees))
}

fn criterion_7() -> Verdict {
    for rec in transfer_checks(TRANSFER_LINKS).map_err(|e| e.to_string())? {
        ensure(rec.passed(), || rec.actual.clone())?;
    }
    Ok(format!("k <= {TRANSFER_LINKS} exact, quotients monotone"))
}

fn criterion_8() -> Verdict {
    for c in asymptotic_constants() {
        ensure(c.matches_published, || format!("c_{} = {} vs {}", c.j, c.value, c.published))?;
    }
    let tol = BigRational::new(BigInt::one(), BigInt::from(ASYMPTOTIC_TOLERANCE_INV));
    let mut worst = String::new();
    for n in 700..=706 {
        let r = asymptotic_ratio_with(n, 40).map_err(|e| e.to_string())?;
        ensure(r.relative_error <= tol, || format!("n={n}: relative error {}", r.relative_error_text()))?;
        worst = r.relative_error_text();
    }
    Ok(format!("constants match to 1e-14; ratios within 1e-8 (n=706: {worst})"))
}

fn criterion_9() -> Verdict {
    let cases = [
        (UBound::U0, 1, 2, "0.1153"),
        (UBound::U0, 2, 3, "0.0597"),
        (UBound::U0, 3, 4, "0.0373"),
        (UBound::U1, 1, 2, "0.3007"),
        (UBound::U1, 2, 3, "0.1113"),
        (UBound::U1, 3, 4, "0.0596"),
    ];
    for (which, l, u, bound) in cases {
        let b = maxmatch::continuants::parse_rational(bound).map_err(|e| e.to_string())?;
        let iv = certify_below(which, &rat(l, 1), &rat(u, 1), &b).map_err(|e| format!("{which}({l},{u}): {e}"))?;
        ensure(iv.hi < b && iv.lo <= iv.hi, || format!("{which}({l},{u}) enclosure"))?;
    }
    Ok("six enclosures below their bounds".into())
}

fn criterion_10() -> Verdict {
    // Continuants: reversal symmetry, left recurrence, continued fraction ratio.
    let xs: Vec<BigRational> = [3, 1, 4, 1, 5, 9, 2, 6].iter().map(|&v| rat(v, 1)).collect();
    for len in 1..=xs.len() {
        let s = &xs[..len];
        let rev: Vec<_> = s.iter().rev().cloned().collect();
        ensure(continuant(s) == continuant(&rev), || "continuant symmetry".into())?;
        if len >= 2 {
            let left = &s[0] * continuant(&s[1..]) + continuant(&s[2..]);
            ensure(continuant(s) == left, || "left recurrence".into())?;
            let cf = continued_fraction(s).map_err(|e| e.to_string())?;
            ensure(cf == continuant(s) / continuant(&s[1..]), || "continued fraction ratio".into())?;
        }
    }

    let mut paths = 0usize;
    let mut bip_trees = 0usize;
    for n in 2..=ORACLE_MAX {
        for t in enumerate_free_trees(n).map_err(|e| e.to_string())? {
            let types = vertex_types(&t);
            for &(u, v) in t.edges() {
                ensure(!(types.get(u) == VertexType::A && types.get(v) == VertexType::A), || {
                    format!("adjacent type-A vertices in order {n}")
                })?;
                for (s, w) in [(u, v), (v, u)] {
                    if types.get(s) == VertexType::A {
                        let d = edge_decomposition_check(&t, s, w).map_err(|e| e.to_string())?;
                        ensure(d.lhs == d.rhs, || format!("edge decomposition in order {n}"))?;
                    }
                }
            }
            if !bipartition_condition(&t).map_err(|e| e.to_string())? {
                continue;
            }
            bip_trees += 1;
            let m = count_max_matchings(&t).1;
            let leaves: Vec<usize> = (0..n).filter(|&v| t.is_leaf(v)).collect();
            for (i, &a) in leaves.iter().enumerate() {
                for &b in &leaves[i + 1..] {
                    let path = tree_path(&t, a, b);
                    let via = path_m_via_continuants(&t, &path).map_err(|e| e.to_string())?;
                    ensure(via == m, || format!("path formula in order {n}: {via} vs {m}"))?;
                    paths += 1;
                }
            }
        }
    }

    let mut rooted = 0usize;
    for n in 1..=ORACLE_MAX {
        for rt in enumerate_rooted_trees(n).map_err(|e| e.to_string())? {
            if !rooted_bipartition_condition(&rt) {
                continue;
            }
            rooted += 1;
            let text = format_expr(&rt).map_err(|e| e.to_string())?;
            let back = parse_tree(&text).map_err(|e| e.to_string())?;
            ensure(rooted_canonical_code(&back) == rooted_canonical_code(&rt), || format!("round trip of {text}"))?;
        }
    }
    Ok(format!(
        "continuant identities; {paths} leaf-to-leaf paths on {bip_trees} trees; {rooted} rooted round trips"
    ))
}

fn tree_path(t: &Tree, a: usize, b: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; t.order()];
    let mut queue = std::collections::VecDeque::from([a]);
    parent[a] = a;
    while let Some(v) = queue.pop_front() {
        for &w in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(parent[*path.last().unwrap()]);
    }
    path
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Verdict, u64); 10] = [
        (1, "tree replacement table", criterion_1, 1),
        (2, "rooted replacement table", criterion_2, 5),
        (3, "reference rooted trees", criterion_3, 1),
        (4, "optimal trees by exhaustive search", criterion_4, 60),
        (5, "dynamic program against brute force and polynomial", criterion_5, 30),
        (6, "lower bound and its equality cases", criterion_6, 60),
        (7, "chain growth", criterion_7, 1),
        (8, "asymptotic constants", criterion_8, 5),
        (9, "exchange bounds", criterion_9, 1),
        (10, "property suites", criterion_10, 120),
    ];
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}; took {:.2} s, limit {limit} s", elapsed.as_secs_f64()))
            }
            v => v,
        };
        match verdict {
            Ok(msg) => println!("PASS criterion {id} ({name}): {msg} [{:.2} s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {id} ({name}): {msg} [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
