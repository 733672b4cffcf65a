//! Labelled trees, rooted trees, canonical codes and the edge-list text format.
//!
//! Vertices are dense `0..n` indices. Isomorphism is always decided through
//! [`CanonicalCode`], never by comparing labels.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// An unrooted labelled tree.
///
/// The edge list is kept in the order it was supplied so that the edge-list
/// text format round-trips byte for byte.
#[derive(Clone, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tree")
            .field("n", &self.order())
            .field("edges", &self.edges)
            .finish()
    }
}

/// Builds and validates a tree of order `n` from an edge list.
pub fn tree_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
    Tree::from_edges(n, edges)
}

impl Tree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
        if n == 0 {
            return Err(Error::NotATree("a tree has at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::BadIndex { index: w, order: n });
                }
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NotATree(format!("duplicate edge at vertex {v}")));
            }
        }
        let tree = Tree {
            adj,
            edges: edges.to_vec(),
        };
        let (order, _) = tree.bfs(0, None);
        if order.len() != n {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(tree)
    }

    /// The tree of order 1.
    pub fn single() -> Tree {
        Tree {
            adj: vec![Vec::new()],
            edges: Vec::new(),
        }
    }

    pub fn path(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n, &edges).expect("path is a tree")
    }

    pub fn star(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Tree::from_edges(n, &edges).expect("star is a tree")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::BadIndex {
                index: v,
                order: self.order(),
            })
        }
    }

    /// Breadth-first order from `root`, never entering `blocked`.
    /// Returns the visit order and the parent of each visited vertex.
    pub(crate) fn bfs(&self, root: usize, blocked: Option<usize>) -> (Vec<usize>, Vec<usize>) {
        let n = self.order();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[root] = true;
        if let Some(b) = blocked {
            seen[b] = true;
        }
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        (order, parent)
    }

    /// The connected component of `T - blocked` containing `root`, rooted at
    /// `root` and relabelled in breadth-first order. The second value maps new
    /// labels to the original ones.
    pub fn component(&self, root: usize, blocked: Option<usize>) -> (RootedTree, Vec<usize>) {
        let (order, parent) = self.bfs(root, blocked);
        let mut new_label = vec![usize::MAX; self.order()];
        for (i, &v) in order.iter().enumerate() {
            new_label[v] = i;
        }
        let edges: Vec<_> = order
            .iter()
            .skip(1)
            .map(|&v| (new_label[parent[v]], new_label[v]))
            .collect();
        let tree = Tree::from_edges(order.len(), &edges).expect("component of a tree is a tree");
        (RootedTree { tree, root: 0 }, order)
    }

    /// Applies a relabelling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Tree::from_edges(self.order(), &edges).expect("relabelling preserves trees")
    }

    /// One or two central vertices (minimising eccentricity).
    pub fn centers(&self) -> Vec<usize> {
        let n = self.order();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.adj[v] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    /// Proper 2-colouring with vertex 0 coloured `false`.
    pub fn two_coloring(&self) -> Vec<bool> {
        let (order, parent) = self.bfs(0, None);
        let mut color = vec![false; self.order()];
        for &v in order.iter().skip(1) {
            color[v] = !color[parent[v]];
        }
        color
    }

    /// Writes the tree in the edge-list text format, optionally preceded by
    /// `# comment` header lines.
    pub fn to_edge_list(&self, header: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(h) = header {
            for line in h.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str(&format!("n {}\n", self.order()));
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format: a line `n <count>`, then one `u v`
    /// pair per line. Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Tree> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |message: &str| Error::EdgeList {
                line: line_no,
                message: message.to_string(),
            };
            match n {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(bad("expected header `n <count>`"));
                    }
                    n = Some(
                        fields[1]
                            .parse::<usize>()
                            .map_err(|_| bad("vertex count is not a natural number"))?,
                    );
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(bad("expected a pair `u v`"));
                    }
                    let u = fields[0].parse().map_err(|_| bad("bad vertex index"))?;
                    let v = fields[1].parse().map_err(|_| bad("bad vertex index"))?;
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(Error::EdgeList {
            line: 0,
            message: "missing header `n <count>`".into(),
        })?;
        Tree::from_edges(n, &edges)
    }
}

/// A tree with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub tree: Tree,
    pub root: usize,
}

/// Parent/child orientation of a rooted tree.
#[derive(Debug, Clone)]
pub struct Orientation {
    /// Breadth-first order starting at the root; parents precede children.
    pub order: Vec<usize>,
    /// `parent[root] == usize::MAX`.
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl Orientation {
    pub fn of(tree: &Tree, root: usize) -> Orientation {
        let (order, parent) = tree.bfs(root, None);
        let mut children = vec![Vec::new(); tree.order()];
        for &v in order.iter().skip(1) {
            children[parent[v]].push(v);
        }
        Orientation {
            order,
            parent,
            children,
        }
    }
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<RootedTree> {
        tree.check_vertex(root)?;
        Ok(RootedTree { tree, root })
    }

    /// The single-vertex rooted tree `L`.
    pub fn leaf() -> RootedTree {
        RootedTree {
            tree: Tree::single(),
            root: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.tree.order()
    }

    pub fn orientation(&self) -> Orientation {
        Orientation::of(&self.tree, self.root)
    }

    /// The rooted tree whose root has the given branches.
    pub fn join(branches: &[RootedTree]) -> RootedTree {
        let mut builder = TreeBuilder::new();
        let root = builder.add_root();
        for b in branches {
            builder.attach(root, b);
        }
        builder.finish_rooted(root)
    }

    /// The branches of the root, in neighbour order.
    pub fn branches(&self) -> Vec<RootedTree> {
        rooted_components(&self.tree, self.root)
    }
}

/// The rooted connected components of `T - v`, each rooted at the former
/// neighbour of `v`, in neighbour order.
pub fn rooted_components(t: &Tree, v: usize) -> Vec<RootedTree> {
    t.neighbors(v)
        .iter()
        .map(|&w| t.component(w, Some(v)).0)
        .collect()
}

/// Incremental construction of trees by attaching vertices to parents.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeBuilder {
    pub fn new() -> TreeBuilder {
        TreeBuilder::default()
    }

    pub fn add_root(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_child(&mut self, parent: usize) -> usize {
        let v = self.n;
        self.n += 1;
        self.edges.push((parent, v));
        v
    }

    /// Copies `sub` below `parent` and returns the new label of its root.
    pub fn attach(&mut self, parent: usize, sub: &RootedTree) -> usize {
        let r = self.attach_detached(sub);
        self.edges.push((parent, r));
        r
    }

    /// Copies `sub` as a new component and returns the new label of its root.
    pub fn attach_detached(&mut self, sub: &RootedTree) -> usize {
        let offset = self.n;
        self.n += sub.order();
        self.edges
            .extend(sub.tree.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        sub.root + offset
    }

    pub fn connect(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn finish(self) -> Tree {
        Tree::from_edges(self.n, &self.edges).expect("builder produces a tree")
    }

    pub fn finish_rooted(self, root: usize) -> RootedTree {
        RootedTree {
            tree: self.finish(),
            root,
        }
    }
}

/// AHU-style canonical encoding of a rooted or free tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    pub code: Vec<u8>,
    pub rooted: bool,
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.code))
    }
}

/// Codes of every rooted subtree `T(v)` with respect to `root`, each paired
/// with its own vertex.
pub fn all_subtree_codes(t: &Tree, root: usize) -> Vec<CanonicalCode> {
    let orient = Orientation::of(t, root);
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); t.order()];
    for &v in orient.order.iter().rev() {
        let mut kids: Vec<&[u8]> = orient.children[v].iter().map(|&c| codes[c].as_slice()).collect();
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
        code.push(b'(');
        for k in kids {
            code.extend_from_slice(k);
        }
        code.push(b')');
        codes[v] = code;
    }
    codes
        .into_iter()
        .map(|code| CanonicalCode { code, rooted: true })
        .collect()
}

fn rooted_code_bytes(t: &Tree, root: usize) -> Vec<u8> {
    let orient = Orientation::of(t, root);
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); t.order()];
    for &v in orient.order.iter().rev() {
        let mut kids: Vec<Vec<u8>> = orient.children[v]
            .iter()
            .map(|&c| std::mem::take(&mut codes[c]))
            .collect();
        kids.sort_unstable();
        let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(b'(');
        for k in &kids {
            code.extend_from_slice(k);
        }
        code.push(b')');
        codes[v] = code;
    }
    std::mem::take(&mut codes[root])
}

/// Canonical code of a rooted tree; equal iff rooted-isomorphic.
pub fn rooted_canonical_code(rt: &RootedTree) -> CanonicalCode {
    CanonicalCode {
        code: rooted_code_bytes(&rt.tree, rt.root),
        rooted: true,
    }
}

/// Canonical code of a free tree; equal iff isomorphic.
///
/// The tree is rooted at its center; for bicentral trees the smaller of the
/// two rooted codes is used.
pub fn canonical_code(t: &Tree) -> CanonicalCode {
    let code = t
        .centers()
        .into_iter()
        .map(|c| rooted_code_bytes(t, c))
        .min()
        .expect("a tree has a center");
    CanonicalCode {
        code,
        rooted: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trees_build() {
        let p2 = tree_from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(p2.order(), 2);
        let s4 = tree_from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(s4.degree(1), 3);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(matches!(
            tree_from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            tree_from_edges(4, &[(0, 1), (1, 0), (2, 3)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            tree_from_edges(4, &[(0, 1), (2, 3), (3, 2)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            tree_from_edges(3, &[(0, 1), (1, 5)]),
            Err(Error::BadIndex { index: 5, order: 3 })
        ));
        assert!(matches!(
            tree_from_edges(3, &[(0, 0), (1, 2)]),
            Err(Error::NotATree(_))
        ));
    }

    #[test]
    fn codes_are_relabelling_invariant() {
        let a = tree_from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = tree_from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&Tree::star(4)));
    }

    #[test]
    fn rooted_codes_see_the_root() {
        let p3 = Tree::path(3);
        let end = rooted_canonical_code(&RootedTree::new(p3.clone(), 0).unwrap());
        let mid = rooted_canonical_code(&RootedTree::new(p3.clone(), 1).unwrap());
        let other_end = rooted_canonical_code(&RootedTree::new(p3, 2).unwrap());
        assert_ne!(end, mid);
        assert_eq!(end, other_end);
    }

    #[test]
    fn components_of_paths_and_stars() {
        let leaf = rooted_canonical_code(&RootedTree::leaf());
        let p3 = Tree::path(3);
        let comps = rooted_components(&p3, 1);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| rooted_canonical_code(c) == leaf));

        let s4 = Tree::star(4);
        assert_eq!(rooted_components(&s4, 0).len(), 3);

        let p5 = Tree::path(5);
        let comps = rooted_components(&p5, 1);
        assert_eq!(rooted_canonical_code(&comps[0]), leaf);
        let p3_end = rooted_canonical_code(&RootedTree::new(Tree::path(3), 0).unwrap());
        assert_eq!(rooted_canonical_code(&comps[1]), p3_end);
    }

    #[test]
    fn edge_list_round_trip() {
        let t = tree_from_edges(5, &[(3, 1), (0, 1), (1, 2), (2, 4)]).unwrap();
        let text = t.to_edge_list(Some("T_example"));
        assert_eq!(text, "# T_example\nn 5\n3 1\n0 1\n1 2\n2 4\n");
        let back = Tree::parse_edge_list(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_edge_list(Some("T_example")), text);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let err = Tree::parse_edge_list("n 3\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::EdgeList { line: 3, .. }));
        assert!(Tree::parse_edge_list("# only comments\n").is_err());
        let t = Tree::parse_edge_list("n 1\n").unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn centers() {
        assert_eq!(Tree::path(5).centers(), vec![2]);
        assert_eq!(Tree::path(4).centers(), vec![1, 2]);
        assert_eq!(Tree::star(6).centers(), vec![0]);
        assert_eq!(Tree::single().centers(), vec![0]);
    }
}
