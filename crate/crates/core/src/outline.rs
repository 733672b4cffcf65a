//! Outline graphs: a tree with its chain pieces contracted.
//!
//! Step 1 replaces maximal rooted subtrees isomorphic to `C^k F` or `C^k L`
//! by tagged special leaves, largest first (ties in depth-first order). Step 2
//! replaces every path segment `A - B - A - ... - B - A` whose `A` vertices
//! have degree 2 and whose `B` vertices carry exactly one `C^0 L` and one
//! `C^0 F` leaf by a single special edge `C^k_*`, `k` being the number of
//! such `B` vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::expr::{add_fork, wrap_chain};
use crate::tree::{all_subtree_codes, canonical_code, rooted_canonical_code, RootedTree, Tree, TreeBuilder};

/// Tag of a special leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LeafTag {
    /// `C^k F`.
    ChainF(u32),
    /// `C^k L`.
    ChainL(u32),
}

impl LeafTag {
    pub fn order(&self) -> usize {
        match *self {
            LeafTag::ChainF(k) => 7 * k as usize + 4,
            LeafTag::ChainL(k) => 7 * k as usize + 1,
        }
    }

    /// The rooted tree the tag stands for.
    pub fn expand(&self) -> RootedTree {
        let mut b = TreeBuilder::new();
        let root = self.build(&mut b);
        b.finish_rooted(root)
    }

    fn build(&self, b: &mut TreeBuilder) -> usize {
        let (k, mut root) = match *self {
            LeafTag::ChainF(k) => (k, add_fork(b)),
            LeafTag::ChainL(k) => (k, b.add_root()),
        };
        for _ in 0..k {
            root = wrap_chain(b, root);
        }
        root
    }
}

impl fmt::Display for LeafTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafTag::ChainF(k) => write!(f, "C^{k}F"),
            LeafTag::ChainL(k) => write!(f, "C^{k}L"),
        }
    }
}

/// A special edge `C^k_*` between two skeleton vertices. Expanding it
/// inserts `C^k A(.)` with the operand's single branch at `lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpecialEdge {
    pub upper: usize,
    pub lower: usize,
    pub k: u32,
}

/// Skeleton tree with tagged special leaves and special edges.
#[derive(Debug, Clone)]
pub struct OutlineGraph {
    pub skeleton: Tree,
    pub special_leaves: BTreeMap<usize, LeafTag>,
    pub special_edges: Vec<SpecialEdge>,
    /// Vertex of the source tree each skeleton vertex came from.
    pub origin: Vec<usize>,
}

impl OutlineGraph {
    /// Rebuilds a tree from the outline by expanding every tag.
    pub fn expand(&self) -> Tree {
        let mut b = TreeBuilder::new();
        let image: Vec<usize> = (0..self.skeleton.order())
            .map(|v| match self.special_leaves.get(&v) {
                Some(tag) => tag.build(&mut b),
                None => b.add_root(),
            })
            .collect();
        let special: HashMap<(usize, usize), &SpecialEdge> = self
            .special_edges
            .iter()
            .flat_map(|e| [((e.upper, e.lower), e), ((e.lower, e.upper), e)])
            .collect();
        for &(u, v) in self.skeleton.edges() {
            match special.get(&(u, v)) {
                Some(e) => {
                    let mut top = b.add_root();
                    b.connect(top, image[e.lower]);
                    for _ in 0..e.k {
                        top = wrap_chain(&mut b, top);
                    }
                    b.connect(image[e.upper], top);
                }
                None => b.connect(image[u], image[v]),
            }
        }
        b.finish()
    }

    /// Number of occurrences of each tag, keyed by its text (`C^3F`, `C^1_*`).
    pub fn tag_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for tag in self.special_leaves.values() {
            *out.entry(tag.to_string()).or_default() += 1;
        }
        for e in &self.special_edges {
            *out.entry(format!("C^{}_*", e.k)).or_default() += 1;
        }
        out
    }

    /// Skeleton vertices that are neither special leaves nor special-edge
    /// interiors.
    pub fn plain_vertices(&self) -> Vec<usize> {
        (0..self.skeleton.order())
            .filter(|v| !self.special_leaves.contains_key(v))
            .collect()
    }

    /// Skeleton vertices adjacent both to a `C^k L` leaf and a `C^k F` leaf.
    pub fn mixed_tag_vertices(&self) -> Vec<usize> {
        self.plain_vertices()
            .into_iter()
            .filter(|&v| {
                let tags: Vec<&LeafTag> = self
                    .skeleton
                    .neighbors(v)
                    .iter()
                    .filter_map(|w| self.special_leaves.get(w))
                    .collect();
                tags.iter().any(|t| matches!(t, LeafTag::ChainL(_)))
                    && tags.iter().any(|t| matches!(t, LeafTag::ChainF(_)))
            })
            .collect()
    }
}

impl fmt::Display for OutlineGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "skeleton order {}", self.skeleton.order())?;
        for v in 0..self.skeleton.order() {
            match self.special_leaves.get(&v) {
                Some(tag) => writeln!(f, "  {v}: leaf {tag}")?,
                None => writeln!(f, "  {v}: vertex of degree {}", self.skeleton.degree(v))?,
            }
        }
        let special: BTreeSet<(usize, usize)> = self
            .special_edges
            .iter()
            .map(|e| (e.upper.min(e.lower), e.upper.max(e.lower)))
            .collect();
        for &(u, v) in self.skeleton.edges() {
            if special.contains(&(u.min(v), u.max(v))) {
                continue;
            }
            writeln!(f, "  {u} - {v}")?;
        }
        for e in &self.special_edges {
            writeln!(f, "  {} - {} : C^{}_*", e.upper, e.lower, e.k)?;
        }
        Ok(())
    }
}

/// Canonical codes of `C^k L` and `C^k F` for the orders present in a tree.
struct ChainCodes {
    by_order: HashMap<usize, (Vec<u8>, LeafTag)>,
}

impl ChainCodes {
    fn up_to(n: usize) -> ChainCodes {
        let mut by_order = HashMap::new();
        for k in 0.. {
            let mut any = false;
            for tag in [LeafTag::ChainL(k), LeafTag::ChainF(k)] {
                if tag.order() <= n {
                    any = true;
                    by_order.insert(tag.order(), (rooted_canonical_code(&tag.expand()).code, tag));
                }
            }
            if !any {
                break;
            }
        }
        ChainCodes { by_order }
    }

    fn matches(&self, size: usize, code: &[u8]) -> Option<LeafTag> {
        self.by_order
            .get(&size)
            .filter(|(c, _)| c.as_slice() == code)
            .map(|&(_, tag)| tag)
    }
}

struct Candidate {
    size: usize,
    rank: usize,
    root: usize,
    /// `None` when the candidate is the whole tree.
    parent: Option<usize>,
    tag: LeafTag,
}

/// Depth-first preorder from vertex 0 with parents.
fn preorder(t: &Tree) -> (Vec<usize>, Vec<usize>) {
    let n = t.order();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in t.neighbors(v).iter().rev() {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    (order, parent)
}

fn collect_vertices(t: &Tree, root: usize, blocked: Option<usize>) -> Vec<usize> {
    t.component(root, blocked).1
}

/// Computes the outline graph of a tree.
pub fn outline(t: &Tree) -> OutlineGraph {
    let n = t.order();
    let codes = ChainCodes::up_to(n);
    let (pre, parent) = preorder(t);
    let mut rank = vec![0; n];
    for (i, &v) in pre.iter().enumerate() {
        rank[v] = i;
    }
    let down_codes = all_subtree_codes(t, 0);
    let mut size = vec![1usize; n];
    for &v in pre.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }

    let mut candidates = Vec::new();
    let fits = |s: usize| codes.by_order.contains_key(&s);
    if fits(n) {
        for &v in &pre {
            if let Some(tag) = codes.matches(n, &rooted_canonical_code(&RootedTree { tree: t.clone(), root: v }).code) {
                candidates.push(Candidate { size: n, rank: rank[v], root: v, parent: None, tag });
                break;
            }
        }
    }
    for &v in pre.iter().skip(1) {
        let p = parent[v];
        if fits(size[v]) {
            if let Some(tag) = codes.matches(size[v], &down_codes[v].code) {
                candidates.push(Candidate { size: size[v], rank: rank[v], root: v, parent: Some(p), tag });
            }
        }
        let up = n - size[v];
        if fits(up) {
            let (comp, _) = t.component(p, Some(v));
            if let Some(tag) = codes.matches(up, &rooted_canonical_code(&comp).code) {
                candidates.push(Candidate { size: up, rank: rank[v], root: p, parent: Some(v), tag });
            }
        }
    }
    candidates.sort_by_key(|c| (std::cmp::Reverse(c.size), c.rank, c.root));

    let mut removed = vec![false; n];
    let mut tags: HashMap<usize, LeafTag> = HashMap::new();
    for c in &candidates {
        let verts = collect_vertices(t, c.root, c.parent);
        if verts.iter().any(|&v| removed[v] || tags.contains_key(&v)) {
            continue;
        }
        for &v in &verts[1..] {
            removed[v] = true;
        }
        tags.insert(c.root, c.tag);
    }

    let mut skel = Skeleton::new(t, &removed, tags);
    skel.contract_chains();
    skel.finish()
}

/// Mutable skeleton used while contracting special edges.
struct Skeleton {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    tags: HashMap<usize, LeafTag>,
    /// Special edges keyed by their unordered endpoints.
    special: BTreeMap<(usize, usize), SpecialEdge>,
}

impl Skeleton {
    fn new(t: &Tree, removed: &[bool], tags: HashMap<usize, LeafTag>) -> Skeleton {
        let n = t.order();
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in t.edges() {
            if !removed[u] && !removed[v] {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Skeleton {
            adj,
            alive: removed.iter().map(|&r| !r).collect(),
            tags,
            special: BTreeMap::new(),
        }
    }

    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    fn touches_special(&self, v: usize) -> bool {
        self.adj[v].iter().any(|&w| self.special.contains_key(&Self::key(v, w)))
    }

    fn is_path_a(&self, v: usize) -> bool {
        self.alive[v] && !self.tags.contains_key(&v) && self.adj[v].len() == 2 && !self.touches_special(v)
    }

    /// For a chain `B` vertex, its `C^0 L` and `C^0 F` leaves.
    fn chain_b_leaves(&self, v: usize) -> Option<(usize, usize)> {
        if !self.alive[v] || self.tags.contains_key(&v) || self.adj[v].len() != 4 || self.touches_special(v) {
            return None;
        }
        let is_tag_leaf = |w: usize, tag: LeafTag| self.tags.get(&w) == Some(&tag) && self.adj[w].len() == 1;
        let l = self.adj[v].iter().copied().find(|&w| is_tag_leaf(w, LeafTag::ChainL(0)))?;
        let f = self.adj[v].iter().copied().find(|&w| is_tag_leaf(w, LeafTag::ChainF(0)))?;
        let others: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != l && w != f).collect();
        others.iter().all(|&w| self.is_path_a(w)).then_some((l, f))
    }

    fn other(&self, v: usize, from: usize) -> usize {
        *self.adj[v].iter().find(|&&w| w != from).expect("degree-2 vertex")
    }

    fn contract_chains(&mut self) {
        for start in 0..self.adj.len() {
            if !self.is_path_a(start) {
                continue;
            }
            let ends: Vec<usize> = self.adj[start].iter().copied().collect();
            let mut members = vec![start];
            let mut extra = Vec::new();
            let mut outer = [0usize; 2];
            let mut k = 0u32;
            for (side, &first) in ends.iter().enumerate() {
                let (mut prev, mut next) = (start, first);
                loop {
                    let Some((l, f)) = self.chain_b_leaves(next) else {
                        break;
                    };
                    if members.contains(&next) {
                        break;
                    }
                    let a = self.other_path_neighbour(next, prev, l, f);
                    if members.contains(&a) {
                        break;
                    }
                    members.push(next);
                    members.push(a);
                    extra.extend([l, f]);
                    k += 1;
                    prev = a;
                    next = self.other(a, next);
                }
                outer[side] = next;
            }
            for &v in members.iter().chain(&extra) {
                self.alive[v] = false;
                for w in std::mem::take(&mut self.adj[v]) {
                    self.adj[w].remove(&v);
                }
            }
            let [upper, lower] = outer;
            self.adj[upper].insert(lower);
            self.adj[lower].insert(upper);
            self.special.insert(Self::key(upper, lower), SpecialEdge { upper, lower, k });
        }
    }

    fn other_path_neighbour(&self, b: usize, from: usize, l: usize, f: usize) -> usize {
        *self.adj[b]
            .iter()
            .find(|&&w| w != from && w != l && w != f)
            .expect("chain vertex has two path neighbours")
    }

    fn finish(self) -> OutlineGraph {
        let n = self.adj.len();
        let mut label = vec![usize::MAX; n];
        let mut origin = Vec::new();
        for v in 0..n {
            if self.alive[v] {
                label[v] = origin.len();
                origin.push(v);
            }
        }
        let mut edges = Vec::new();
        for &v in &origin {
            for &w in &self.adj[v] {
                if v < w {
                    edges.push((label[v], label[w]));
                }
            }
        }
        let skeleton = Tree::from_edges(origin.len(), &edges).expect("skeleton is a tree");
        let special_leaves = self
            .tags
            .iter()
            .filter(|(v, _)| self.alive[**v])
            .map(|(&v, &tag)| (label[v], tag))
            .collect();
        let special_edges = self
            .special
            .values()
            .map(|e| SpecialEdge {
                upper: label[e.upper],
                lower: label[e.lower],
                k: e.k,
            })
            .collect();
        OutlineGraph {
            skeleton,
            special_leaves,
            special_edges,
            origin,
        }
    }
}

/// True iff expanding the outline gives back a tree isomorphic to `t`.
pub fn round_trips(t: &Tree) -> bool {
    canonical_code(&outline(t).expand()) == canonical_code(t)
}
