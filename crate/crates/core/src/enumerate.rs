//! Exhaustive generation of free and rooted trees, one per isomorphism class.
//!
//! Both generators walk level sequences (pre-order depth lists). Rooted trees
//! use the Beyer-Hedetniemi successor; free trees use the Wright-Richmond-
//! Odlyzko-McKay refinement that keeps only canonical centred layouts.

use crate::error::{Error, Result};
use crate::tree::{RootedTree, Tree};

/// Upper bounds on enumeration orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub free: usize,
    pub rooted: usize,
}

/// Environment variable overriding both caps.
pub const CAP_ENV_VAR: &str = "MAXMATCH_ENUM_CAP";

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            free: 24,
            rooted: 16,
        }
    }
}

impl EnumLimits {
    /// Defaults, with both caps replaced by `MAXMATCH_ENUM_CAP` when it holds
    /// a natural number.
    pub fn from_env() -> EnumLimits {
        match std::env::var(CAP_ENV_VAR).ok().and_then(|s| s.trim().parse().ok()) {
            Some(cap) => EnumLimits {
                free: cap,
                rooted: cap,
            },
            None => EnumLimits::default(),
        }
    }

    pub fn check_free(&self, n: usize) -> Result<()> {
        if n > self.free {
            return Err(Error::ResourceGuard {
                what: "free-tree enumeration order",
                size: n,
                cap: self.free,
            });
        }
        Ok(())
    }

    pub fn check_rooted(&self, n: usize) -> Result<()> {
        if n > self.rooted {
            return Err(Error::ResourceGuard {
                what: "rooted-tree enumeration order",
                size: n,
                cap: self.rooted,
            });
        }
        Ok(())
    }
}

/// Tree with the given level sequence; vertex `i` is the `i`-th entry.
pub fn tree_from_levels(levels: &[usize]) -> Tree {
    let mut stack: Vec<usize> = Vec::with_capacity(levels.len());
    let mut edges = Vec::with_capacity(levels.len().saturating_sub(1));
    for (i, &level) in levels.iter().enumerate() {
        while let Some(&top) = stack.last() {
            if levels[top] >= level {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&parent) = stack.last() {
            edges.push((parent, i));
        }
        stack.push(i);
    }
    Tree::from_edges(levels.len(), &edges).expect("level sequence describes a tree")
}

/// Next level sequence in reverse lexicographic order, modifying from
/// position `p` (by default the last entry greater than 1).
fn next_rooted(levels: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = levels.len() - 1;
            while levels[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while levels[q] != levels[p] - 1 {
        q -= 1;
    }
    let mut out = levels.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

/// Splits a layout into the first subtree of the root (shifted up one level)
/// and the remainder.
fn split(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .skip(2)
        .find(|&(_, &l)| l == 1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|&l| l - 1).collect();
    let rest = std::iter::once(0).chain(layout[m..].iter().copied()).collect();
    (left, rest)
}

/// Advances `candidate` to the next layout that is canonical for a free tree.
fn next_free(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split(&candidate);
    let left_height = left.iter().copied().max().unwrap_or(0);
    let rest_height = rest.iter().copied().max().unwrap_or(0);
    let mut valid = rest_height >= left_height;
    if valid && rest_height == left_height {
        if left.len() > rest.len() || (left.len() == rest.len() && left > rest) {
            valid = false;
        }
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split(&next);
        let h = new_left.iter().copied().max().unwrap_or(0);
        let len = next.len();
        for (slot, value) in next[len - (h + 1)..].iter_mut().zip(1..) {
            *slot = value;
        }
    }
    Some(next)
}

/// Stream of free trees of one order.
#[derive(Debug, Clone)]
pub struct FreeTrees {
    state: Option<Vec<usize>>,
    single: bool,
}

impl Iterator for FreeTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.single {
            self.single = false;
            return Some(Tree::single());
        }
        let layout = next_free(self.state.take()?)?;
        let tree = tree_from_levels(&layout);
        self.state = next_rooted(&layout, None);
        Some(tree)
    }
}

/// One tree per isomorphism class of order `n`, using caps from the
/// environment.
pub fn enumerate_free_trees(n: usize) -> Result<FreeTrees> {
    enumerate_free_trees_with(n, &EnumLimits::from_env())
}

pub fn enumerate_free_trees_with(n: usize, limits: &EnumLimits) -> Result<FreeTrees> {
    if n == 0 {
        return Err(Error::OrderTooSmall(0));
    }
    limits.check_free(n)?;
    if n == 1 {
        return Ok(FreeTrees {
            state: None,
            single: true,
        });
    }
    let layout: Vec<usize> = (0..=n / 2).chain(1..(n + 1) / 2).collect();
    Ok(FreeTrees {
        state: Some(layout),
        single: false,
    })
}

/// Stream of rooted trees of one order; each is rooted at vertex 0.
#[derive(Debug, Clone)]
pub struct RootedTrees {
    state: Option<Vec<usize>>,
}

impl Iterator for RootedTrees {
    type Item = RootedTree;

    fn next(&mut self) -> Option<RootedTree> {
        let levels = self.state.take()?;
        let tree = tree_from_levels(&levels);
        if levels.len() > 1 {
            self.state = next_rooted(&levels, None);
        }
        Some(RootedTree { tree, root: 0 })
    }
}

/// One rooted tree per rooted-isomorphism class of order `n`, using caps from
/// the environment.
pub fn enumerate_rooted_trees(n: usize) -> Result<RootedTrees> {
    enumerate_rooted_trees_with(n, &EnumLimits::from_env())
}

pub fn enumerate_rooted_trees_with(n: usize, limits: &EnumLimits) -> Result<RootedTrees> {
    if n == 0 {
        return Err(Error::OrderTooSmall(0));
    }
    limits.check_rooted(n)?;
    Ok(RootedTrees {
        state: Some((0..n).collect()),
    })
}
