//! The frozen optimal trees of orders 6 and 13 must agree with an exhaustive
//! search. Set `MAXMATCH_REGENERATE_FIXTURES=1` to rewrite them from the search.

use std::path::PathBuf;

use maxmatch::enumerate::{enumerate_free_trees_with, EnumLimits};
use maxmatch::extremal::fixture;
use maxmatch::matching::count_max_matchings;
use maxmatch::{canonical_code, Tree};

fn argmax(n: usize) -> Vec<Tree> {
    let mut best = Vec::new();
    let mut best_m = None;
    for t in enumerate_free_trees_with(n, &EnumLimits::default()).unwrap() {
        let (_, m) = count_max_matchings(&t);
        match best_m.as_ref().map(|b| m.cmp(b)) {
            None | Some(std::cmp::Ordering::Greater) => {
                best_m = Some(m);
                best = vec![t];
            }
            Some(std::cmp::Ordering::Equal) => best.push(t),
            Some(std::cmp::Ordering::Less) => {}
        }
    }
    best
}

fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures").join(file)
}

#[test]
fn fixtures_match_search() {
    let regenerate = std::env::var("MAXMATCH_REGENERATE_FIXTURES").is_ok_and(|v| v == "1");

    let six: Vec<Tree> = argmax(6)
        .into_iter()
        .filter(|t| canonical_code(t) != canonical_code(&Tree::star(6)))
        .collect();
    assert_eq!(six.len(), 1, "exactly one optimal tree of order 6 besides the star");
    let thirteen = argmax(13);
    assert_eq!(thirteen.len(), 1, "unique optimal tree of order 13");

    for (name, file, found) in [
        ("T_6_2_star", "t6_2_star.edges", &six[0]),
        ("T_13_star", "t13_star.edges", &thirteen[0]),
    ] {
        if regenerate {
            std::fs::write(fixture_path(file), found.to_edge_list(Some(name))).unwrap();
            continue;
        }
        let on_disk = Tree::parse_edge_list(&std::fs::read_to_string(fixture_path(file)).unwrap()).unwrap();
        let embedded = fixture(name).unwrap();
        assert_eq!(embedded, on_disk);
        assert_eq!(canonical_code(&embedded), canonical_code(found), "{name} is stale");
    }
}
