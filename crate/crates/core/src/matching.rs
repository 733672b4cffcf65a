//! Maximum matchings in trees: exact counts, vertex types, the matching
//! polynomial, a brute-force oracle, and the structural predicates built on
//! vertex types.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{Orientation, RootedTree, Tree};

/// Whether some maximum matching leaves the vertex uncovered (`A`) or every
/// maximum matching covers it (`B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VertexType {
    A,
    B,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexType::A => "A",
            VertexType::B => "B",
        })
    }
}

/// Exact matching statistics of a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchStats {
    /// Matching number.
    pub mu: usize,
    /// Number of maximum matchings.
    pub m: BigInt,
    /// Number of maximum matchings of the tree with its root deleted.
    pub m0: BigInt,
    /// Number of maximum matchings covering the root.
    pub m1: BigInt,
    pub node_type: VertexType,
    /// `m0 / m`.
    pub rho: BigRational,
}

impl MatchStats {
    /// `m + alpha * m0`, the objective of alpha-optimality.
    pub fn weighted(&self, alpha: &BigRational) -> BigRational {
        BigRational::from_integer(self.m.clone()) + alpha * BigRational::from_integer(self.m0.clone())
    }
}

/// Per-vertex record of the rooted dynamic program.
#[derive(Debug, Clone)]
pub(crate) struct NodeStats {
    pub mu: usize,
    /// Matching number of the subtree with its root deleted.
    pub mu0: usize,
    pub m: BigInt,
    pub m0: BigInt,
    pub m1: BigInt,
}

impl NodeStats {
    pub fn node_type(&self) -> VertexType {
        if self.mu0 == self.mu {
            VertexType::A
        } else {
            VertexType::B
        }
    }

    fn into_stats(self) -> MatchStats {
        let node_type = self.node_type();
        let rho = BigRational::new(self.m0.clone(), self.m.clone());
        MatchStats {
            mu: self.mu,
            m: self.m,
            m0: self.m0,
            m1: self.m1,
            node_type,
            rho,
        }
    }
}

/// Combines the records of the children of a vertex.
///
/// A vertex either stays unmatched, leaving each child subtree free, or is
/// matched to one child `c`, leaving `c`'s own subtree without its root.
pub(crate) fn combine<'a>(children: impl IntoIterator<Item = &'a NodeStats>) -> NodeStats {
    let mut mu0 = 0;
    let mut prod = BigInt::one();
    // Sum over type-A children c of m0(c) * prod_{o != c} m(o).
    let mut gain_a = BigInt::zero();
    // Same sum over type-B children.
    let mut gain_b = BigInt::zero();
    let mut any_a = false;
    for c in children {
        mu0 += c.mu;
        let is_a = c.mu0 == c.mu;
        any_a |= is_a;
        gain_a = gain_a * &c.m;
        gain_b = gain_b * &c.m;
        if is_a {
            gain_a += &c.m0 * &prod;
        } else {
            gain_b += &c.m0 * &prod;
        }
        prod *= &c.m;
    }
    if any_a {
        NodeStats {
            mu: mu0 + 1,
            mu0,
            m: gain_a.clone(),
            m0: prod,
            m1: gain_a,
        }
    } else {
        NodeStats {
            mu: mu0,
            mu0,
            m: &prod + &gain_b,
            m0: prod,
            m1: gain_b,
        }
    }
}

/// Records for every rooted subtree `T(v)` of `t` rooted at `root`.
pub(crate) fn subtree_stats(t: &Tree, root: usize) -> (Orientation, Vec<NodeStats>) {
    let orient = Orientation::of(t, root);
    let mut stats: Vec<Option<NodeStats>> = vec![None; t.order()];
    for &v in orient.order.iter().rev() {
        let s = combine(
            orient.children[v]
                .iter()
                .map(|&c| stats[c].as_ref().expect("children are processed first")),
        );
        stats[v] = Some(s);
    }
    let stats = stats.into_iter().map(|s| s.expect("all vertices visited")).collect();
    (orient, stats)
}

/// Exact statistics of a rooted tree.
pub fn match_stats(rt: &RootedTree) -> MatchStats {
    let (_, mut stats) = subtree_stats(&rt.tree, rt.root);
    stats.swap_remove(rt.root).into_stats()
}

/// Matching number and number of maximum matchings of an unrooted tree.
pub fn count_max_matchings(t: &Tree) -> (usize, BigInt) {
    let (_, mut stats) = subtree_stats(t, 0);
    let s = stats.swap_remove(0);
    (s.mu, s.m)
}

/// Vertex types of an unrooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexTypeMap {
    pub types: Vec<VertexType>,
}

impl VertexTypeMap {
    pub fn get(&self, v: usize) -> VertexType {
        self.types[v]
    }

    pub fn count(&self, ty: VertexType) -> usize {
        self.types.iter().filter(|&&t| t == ty).count()
    }
}

/// Vertex types by a rerooting pass over matching numbers: `v` is of type
/// `A` iff `mu(T - v) == mu(T)`, and `mu(T - v)` is the sum of the matching
/// numbers of the components of `T - v`.
pub fn vertex_types(t: &Tree) -> VertexTypeMap {
    let n = t.order();
    let orient = Orientation::of(t, 0);
    // (mu, mu0) of each subtree below v, rooted at v.
    let mut down = vec![(0usize, 0usize); n];
    for &v in orient.order.iter().rev() {
        down[v] = size_combine(orient.children[v].iter().map(|&c| down[c]));
    }
    // (mu, mu0) of the component of T - v containing parent(v), rooted there.
    let mut up: Vec<Option<(usize, usize)>> = vec![None; n];
    for &p in &orient.order {
        let neighbours: Vec<(usize, usize)> = orient.children[p]
            .iter()
            .map(|&c| down[c])
            .chain(up[p])
            .collect();
        let total: usize = neighbours.iter().map(|x| x.0).sum();
        let a_count = neighbours.iter().filter(|x| x.0 == x.1).count();
        for &c in &orient.children[p] {
            let (mu_c, mu0_c) = down[c];
            let mu0 = total - mu_c;
            let a_left = a_count - usize::from(mu_c == mu0_c);
            let mu = if a_left > 0 { mu0 + 1 } else { mu0 };
            up[c] = Some((mu, mu0));
        }
    }
    let mu_total = down[0].0;
    let types = (0..n)
        .map(|v| {
            let without: usize = orient.children[v].iter().map(|&c| down[c].0).sum::<usize>()
                + up[v].map_or(0, |x| x.0);
            if without == mu_total {
                VertexType::A
            } else {
                VertexType::B
            }
        })
        .collect();
    VertexTypeMap { types }
}

fn size_combine(children: impl Iterator<Item = (usize, usize)>) -> (usize, usize) {
    let mut mu0 = 0;
    let mut any_a = false;
    for (mu, c0) in children {
        mu0 += mu;
        any_a |= mu == c0;
    }
    (if any_a { mu0 + 1 } else { mu0 }, mu0)
}

/// Vertex types by one rooted computation per vertex; quadratic.
pub fn vertex_types_quadratic(t: &Tree) -> VertexTypeMap {
    let types = (0..t.order())
        .map(|v| {
            let (_, stats) = subtree_stats(t, v);
            stats[v].node_type()
        })
        .collect();
    VertexTypeMap { types }
}

/// Largest number of edges accepted by the brute-force oracle.
pub const BRUTEFORCE_EDGE_CAP: usize = 24;

/// Counts maximum matchings by walking every matching of the tree.
pub fn count_max_matchings_bruteforce(t: &Tree) -> Result<(usize, BigInt)> {
    let counts = matching_counts_bruteforce(t)?;
    let mu = counts.len() - 1;
    Ok((mu, BigInt::from(counts[mu])))
}

/// Number of matchings of each size, by exhaustive enumeration.
pub fn matching_counts_bruteforce(t: &Tree) -> Result<Vec<u64>> {
    let edges = t.edges();
    if edges.len() > BRUTEFORCE_EDGE_CAP {
        return Err(Error::ResourceGuard {
            what: "brute-force matching enumeration (edges)",
            size: edges.len(),
            cap: BRUTEFORCE_EDGE_CAP,
        });
    }
    fn walk(edges: &[(usize, usize)], i: usize, used: u64, size: usize, counts: &mut Vec<u64>) {
        if i == edges.len() {
            if counts.len() <= size {
                counts.resize(size + 1, 0);
            }
            counts[size] += 1;
            return;
        }
        walk(edges, i + 1, used, size, counts);
        let (u, v) = edges[i];
        let mask = (1u64 << u) | (1u64 << v);
        if used & mask == 0 {
            walk(edges, i + 1, used | mask, size + 1, counts);
        }
    }
    let mut counts = Vec::new();
    walk(edges, 0, 0, 0, &mut counts);
    Ok(counts)
}

/// Coefficients `a_k`, the number of matchings with `k` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPolynomial {
    pub coeffs: Vec<BigInt>,
}

impl MatchingPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_shift(a: &[BigInt]) -> Vec<BigInt> {
    std::iter::once(BigInt::zero()).chain(a.iter().cloned()).collect()
}

/// Matching polynomial coefficients by a subtree program that tracks
/// generating functions for "root free" and "root matched".
pub fn matching_polynomial(t: &Tree) -> MatchingPolynomial {
    let orient = Orientation::of(t, 0);
    let n = t.order();
    let mut free: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    let mut matched: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for &v in orient.order.iter().rev() {
        let mut prod = vec![BigInt::one()];
        let mut cover: Vec<BigInt> = Vec::new();
        for &c in &orient.children[v] {
            let total_c = poly_add(&free[c], &matched[c]);
            cover = poly_add(&poly_mul(&cover, &total_c), &poly_mul(&poly_shift(&free[c]), &prod));
            prod = poly_mul(&prod, &total_c);
        }
        free[v] = prod;
        matched[v] = cover;
    }
    let mut coeffs = poly_add(&free[0], &matched[0]);
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    MatchingPolynomial { coeffs }
}

/// True iff the type-`A` vertices form one colour class of the tree's
/// bipartition and the type-`B` vertices the other.
pub fn bipartition_condition(t: &Tree) -> Result<bool> {
    if t.order() < 2 {
        return Err(Error::OrderTooSmall(t.order()));
    }
    Ok(bipartition_witness(t, &vertex_types(t)).is_none())
}

/// An edge whose endpoints share a type, if any.
fn bipartition_witness(t: &Tree, types: &VertexTypeMap) -> Option<(usize, usize)> {
    t.edges()
        .iter()
        .copied()
        .find(|&(u, v)| types.get(u) == types.get(v))
}

/// Rooted variant: every vertex of the rooted subtree has branches all of one
/// type, opposite to its own. Equivalent to the bipartition condition of the
/// underlying tree together with the root keeping its type.
pub fn rooted_bipartition_condition(rt: &RootedTree) -> bool {
    rooted_bipartition_violation(rt).is_none()
}

/// First vertex (in breadth-first order) whose branches do not all have the
/// type opposite to its own.
pub(crate) fn rooted_bipartition_violation(rt: &RootedTree) -> Option<usize> {
    let (orient, stats) = subtree_stats(&rt.tree, rt.root);
    orient.order.iter().copied().find(|&v| {
        let ty = stats[v].node_type();
        orient.children[v]
            .iter()
            .any(|&c| stats[c].node_type() == ty)
    })
}

/// Offending vertex or edge for a failed local condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Vertex(usize),
    Edge(usize, usize),
}

/// Outcome of the six local conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LCReport {
    pub lc1: bool,
    pub lc2: bool,
    pub lc3: bool,
    pub lc4: bool,
    pub lc5: bool,
    pub lc6: bool,
    /// `(condition number, witness)` for each failed condition.
    pub witnesses: Vec<(u8, Witness)>,
}

impl LCReport {
    pub fn flags(&self) -> [bool; 6] {
        [self.lc1, self.lc2, self.lc3, self.lc4, self.lc5, self.lc6]
    }

    pub fn all(&self) -> bool {
        self.flags().iter().all(|&b| b)
    }
}

/// Evaluates LC1 to LC6:
///
/// 1. the bipartition condition,
/// 2. type-A vertices have degree 1 or 2,
/// 3. type-B vertices have degree at least 3,
/// 4. each degree-3 vertex has at least two leaf neighbours,
/// 5. maximum degree at most 4,
/// 6. no vertex has three leaf neighbours.
///
/// The order-1 tree has no edges and passes LC1 vacuously.
pub fn local_conditions(t: &Tree) -> LCReport {
    let types = vertex_types(t);
    let n = t.order();
    let leaf_neighbours =
        |v: usize| t.neighbors(v).iter().filter(|&&w| t.is_leaf(w)).count();
    let first_vertex = |pred: &dyn Fn(usize) -> bool| (0..n).find(|&v| pred(v));

    let mut witnesses = Vec::new();
    let lc1 = match bipartition_witness(t, &types) {
        Some((u, v)) => {
            witnesses.push((1, Witness::Edge(u, v)));
            false
        }
        None => true,
    };
    let checks: [(u8, Option<usize>); 5] = [
        (
            2,
            first_vertex(&|v| types.get(v) == VertexType::A && !(1..=2).contains(&t.degree(v))),
        ),
        (
            3,
            first_vertex(&|v| types.get(v) == VertexType::B && t.degree(v) < 3),
        ),
        (
            4,
            first_vertex(&|v| t.degree(v) == 3 && leaf_neighbours(v) < 2),
        ),
        (5, first_vertex(&|v| t.degree(v) > 4)),
        (6, first_vertex(&|v| leaf_neighbours(v) >= 3)),
    ];
    let mut flags = [lc1, true, true, true, true, true];
    for (idx, found) in checks {
        if let Some(v) = found {
            flags[idx as usize - 1] = false;
            witnesses.push((idx, Witness::Vertex(v)));
        }
    }
    LCReport {
        lc1: flags[0],
        lc2: flags[1],
        lc3: flags[2],
        lc4: flags[3],
        lc5: flags[4],
        lc6: flags[5],
        witnesses,
    }
}

/// Both sides of the edge decomposition at an edge `su` with `s` of type A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecomposition {
    /// `m(T)`.
    pub lhs: BigInt,
    /// `m(T_s) m(T_u) + m(T_s - s) m(T_u - u)`.
    pub rhs: BigInt,
    /// `(mu(T_s), mu(T_s - s))`.
    pub mu_s: (usize, usize),
    /// `(mu(T_u), mu(T_u - u))`.
    pub mu_u: (usize, usize),
}

/// Splits `t` at the edge `su` into the component `T_s` containing `s` and
/// `T_u` containing `u`, and evaluates both sides of the decomposition.
pub fn edge_decomposition_check(t: &Tree, s: usize, u: usize) -> Result<EdgeDecomposition> {
    t.check_vertex(s)?;
    t.check_vertex(u)?;
    if !t.are_adjacent(s, u) {
        return Err(Error::NotAdjacent(s, u));
    }
    if vertex_types(t).get(s) != VertexType::A {
        return Err(Error::NotTypeA(s));
    }
    let side_s = match_stats(&t.component(s, Some(u)).0);
    let side_u = match_stats(&t.component(u, Some(s)).0);
    let (_, lhs) = count_max_matchings(t);
    let rhs = &side_s.m * &side_u.m + &side_s.m0 * &side_u.m0;
    Ok(EdgeDecomposition {
        lhs,
        rhs,
        mu_s: (side_s.mu, mu_without_root(&side_s)),
        mu_u: (side_u.mu, mu_without_root(&side_u)),
    })
}

fn mu_without_root(s: &MatchStats) -> usize {
    match s.node_type {
        VertexType::A => s.mu,
        VertexType::B => s.mu - 1,
    }
}
