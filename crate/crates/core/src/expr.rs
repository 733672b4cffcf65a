//! Constructor notation for rooted trees.
//!
//! ```text
//! expr  := 'L' | 'F'
//!        | ('A' | 'B') '(' expr (',' expr)* ')'
//!        | ('A' | 'B') expr                   single branch, no parentheses
//!        | ('A' | 'B') digits '*'             named tree: A3* A6* A7* A10* A14* A24* B2*
//!        | chain
//! chain := ('C' | 'C_L' | 'C_{L}' | 'C_{CL}' | 'C_CL') ('^' nat | '^{' nat '}')? expr
//! ```
//!
//! `A(...)` is a type-A root whose branches have type B, `B(...)` a type-B root
//! over type-A branches. `C T` is `A(B(L, F, T))`. The subscripted chains are
//! shorthand, expanded while parsing:
//! `C_L^k S = A(B(L, L, C_L^(k-1) S))` and `C_{CL}^k S = A(B(L, CL, C_{CL}^(k-1) S))`,
//! with exponent 0 meaning `S` itself.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matching::{subtree_stats, VertexType};
use crate::tree::{all_subtree_codes, rooted_canonical_code, CanonicalCode, RootedTree, TreeBuilder};

/// Abstract syntax of the constructor notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeExpr {
    Leaf,
    Fork,
    NodeA(Vec<TreeExpr>),
    NodeB(Vec<TreeExpr>),
    /// `C^k` applied to the operand, `k >= 1`.
    Chain(u32, Box<TreeExpr>),
}

impl TreeExpr {
    pub fn a(children: Vec<TreeExpr>) -> TreeExpr {
        TreeExpr::NodeA(children)
    }

    pub fn b(children: Vec<TreeExpr>) -> TreeExpr {
        TreeExpr::NodeB(children)
    }

    /// `C^k e`, collapsing to `e` when `k == 0`.
    pub fn chain(k: u32, e: TreeExpr) -> TreeExpr {
        if k == 0 {
            e
        } else {
            TreeExpr::Chain(k, Box::new(e))
        }
    }

    /// `C_L^k e`.
    pub fn chain_l(k: u32, e: TreeExpr) -> TreeExpr {
        (0..k).fold(e, |s, _| {
            TreeExpr::a(vec![TreeExpr::b(vec![TreeExpr::Leaf, TreeExpr::Leaf, s])])
        })
    }

    /// `C_{CL}^k e`: `k` nested copies of `A(B(L, CL, .))`.
    pub fn chain_cl(k: u32, e: TreeExpr) -> TreeExpr {
        (0..k).fold(e, |s, _| {
            TreeExpr::a(vec![TreeExpr::b(vec![TreeExpr::Leaf, TreeExpr::chain(1, TreeExpr::Leaf), s])])
        })
    }

    /// Type of the root as declared by the outermost constructor.
    pub fn declared_type(&self) -> VertexType {
        match self {
            TreeExpr::NodeB(_) => VertexType::B,
            _ => VertexType::A,
        }
    }

    /// Number of vertices of the elaborated tree.
    pub fn order(&self) -> usize {
        match self {
            TreeExpr::Leaf => 1,
            TreeExpr::Fork => 4,
            TreeExpr::NodeA(cs) | TreeExpr::NodeB(cs) => 1 + cs.iter().map(TreeExpr::order).sum::<usize>(),
            TreeExpr::Chain(k, e) => 7 * *k as usize + e.order(),
        }
    }

    /// Checks the branch-type rules, naming the first offending subexpression.
    pub fn type_check(&self) -> Result<VertexType> {
        match self {
            TreeExpr::Leaf | TreeExpr::Fork => Ok(VertexType::A),
            TreeExpr::NodeA(cs) | TreeExpr::NodeB(cs) => {
                let own = self.declared_type();
                let want = match own {
                    VertexType::A => VertexType::B,
                    VertexType::B => VertexType::A,
                };
                if cs.is_empty() {
                    return Err(Error::Type(format!("`{self}` has no branches")));
                }
                for c in cs {
                    let got = c.type_check()?;
                    if got != want {
                        return Err(Error::Type(format!(
                            "branch `{c}` of `{self}` has type {got}, expected {want}"
                        )));
                    }
                }
                Ok(own)
            }
            TreeExpr::Chain(_, e) => {
                let got = e.type_check()?;
                if got != VertexType::A {
                    return Err(Error::Type(format!(
                        "chain operand `{e}` has type {got}, expected A"
                    )));
                }
                Ok(VertexType::A)
            }
        }
    }
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, cs: &[TreeExpr]| {
            f.write_str(head)?;
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        };
        match self {
            TreeExpr::Leaf => f.write_str("L"),
            TreeExpr::Fork => f.write_str("F"),
            TreeExpr::NodeA(cs) => list(f, "A", cs),
            TreeExpr::NodeB(cs) => list(f, "B", cs),
            TreeExpr::Chain(1, e) => write!(f, "C{e}"),
            TreeExpr::Chain(k, e) => write!(f, "C^{k}{e}"),
        }
    }
}

/// Named rooted trees accepted by the parser.
pub fn named_tree(name: &str) -> Option<TreeExpr> {
    use TreeExpr::{Fork as F, Leaf as L};
    let ab = |cs: Vec<TreeExpr>| TreeExpr::a(vec![TreeExpr::b(cs)]);
    Some(match name {
        "B2" => TreeExpr::b(vec![L]),
        "A3" => ab(vec![L]),
        "A6" => ab(vec![L, L, L, L]),
        "A7" => ab(vec![L, F]),
        "A10" => ab(vec![L, named_tree("A7")?]),
        "A14" => ab(vec![F, F, F]),
        "A24" => ab(vec![F, F, named_tree("A14")?]),
        _ => return None,
    })
}

#[derive(Clone, Copy)]
enum ChainKind {
    Plain,
    L,
    CL,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn unexpected(&mut self, wanted: &str) -> Error {
        match self.peek() {
            Some(c) => self.error(format!("expected {wanted}, found `{c}`")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("a natural number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::Syntax {
            pos: start,
            message: format!("exponent `{digits}` is too large"),
        })
    }

    fn expr(&mut self) -> Result<TreeExpr> {
        match self.peek() {
            Some('L') => {
                self.pos += 1;
                Ok(TreeExpr::Leaf)
            }
            Some('F') => {
                self.pos += 1;
                Ok(TreeExpr::Fork)
            }
            Some(head @ ('A' | 'B')) => {
                let start = self.pos;
                self.pos += 1;
                match self.peek() {
                    Some(c) if c.is_ascii_digit() => {
                        let k = self.nat()?;
                        self.expect('*')?;
                        named_tree(&format!("{head}{k}")).ok_or(Error::Syntax {
                            pos: start,
                            message: format!("unknown named tree `{head}{k}*`"),
                        })
                    }
                    Some('(') => {
                        let open = self.pos;
                        self.pos += 1;
                        if self.peek() == Some(')') {
                            return Err(Error::Arity { pos: open });
                        }
                        let mut children = vec![self.expr()?];
                        loop {
                            match self.peek() {
                                Some(',') => {
                                    self.pos += 1;
                                    children.push(self.expr()?);
                                }
                                Some(')') => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return Err(self.unexpected("`,` or `)`")),
                            }
                        }
                        Ok(node(head, children))
                    }
                    _ => {
                        let child = self.expr()?;
                        Ok(node(head, vec![child]))
                    }
                }
            }
            Some('C') => {
                self.pos += 1;
                let kind = self.chain_kind()?;
                let k = if self.peek() == Some('^') {
                    self.pos += 1;
                    if self.peek() == Some('{') {
                        self.pos += 1;
                        let k = self.nat()?;
                        self.expect('}')?;
                        k
                    } else {
                        self.nat()?
                    }
                } else {
                    1
                };
                let operand = self.expr()?;
                Ok(match kind {
                    ChainKind::Plain => TreeExpr::chain(k, operand),
                    ChainKind::L => TreeExpr::chain_l(k, operand),
                    ChainKind::CL => TreeExpr::chain_cl(k, operand),
                })
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn chain_kind(&mut self) -> Result<ChainKind> {
        // No whitespace is allowed between `C` and its subscript.
        if self.chars.get(self.pos) != Some(&'_') {
            return Ok(ChainKind::Plain);
        }
        self.pos += 1;
        let braced = self.chars.get(self.pos) == Some(&'{');
        if braced {
            self.pos += 1;
        }
        let rest: String = self.chars[self.pos..].iter().take(2).collect();
        let kind = if rest.starts_with("CL") {
            self.pos += 2;
            ChainKind::CL
        } else if rest.starts_with('L') {
            self.pos += 1;
            ChainKind::L
        } else {
            return Err(self.error("expected chain subscript `L` or `CL`"));
        };
        if braced {
            if self.chars.get(self.pos) != Some(&'}') {
                return Err(self.error("expected `}`"));
            }
            self.pos += 1;
        }
        Ok(kind)
    }
}

fn node(head: char, children: Vec<TreeExpr>) -> TreeExpr {
    if head == 'A' {
        TreeExpr::NodeA(children)
    } else {
        TreeExpr::NodeB(children)
    }
}

/// Parses the constructor notation. Offsets in errors count characters from 0.
pub fn parse_expr(text: &str) -> Result<TreeExpr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

fn build(e: &TreeExpr, b: &mut TreeBuilder) -> usize {
    match e {
        TreeExpr::Leaf => b.add_root(),
        TreeExpr::Fork => add_fork(b),
        TreeExpr::NodeA(cs) | TreeExpr::NodeB(cs) => {
            let roots: Vec<usize> = cs.iter().map(|c| build(c, b)).collect();
            let r = b.add_root();
            for c in roots {
                b.connect(r, c);
            }
            r
        }
        TreeExpr::Chain(k, inner) => {
            let mut r = build(inner, b);
            for _ in 0..*k {
                r = wrap_chain(b, r);
            }
            r
        }
    }
}

/// Adds a fork `A(B(L,L))` as a new component and returns its root.
pub(crate) fn add_fork(b: &mut TreeBuilder) -> usize {
    let root = b.add_root();
    let hub = b.add_child(root);
    b.add_child(hub);
    b.add_child(hub);
    root
}

/// Wraps the component rooted at `r` in one chain link `A(B(L, F, .))` and
/// returns the new root.
pub(crate) fn wrap_chain(b: &mut TreeBuilder, r: usize) -> usize {
    let top = b.add_root();
    let hub = b.add_child(top);
    b.add_child(hub);
    let fork = add_fork(b);
    b.connect(hub, fork);
    b.connect(hub, r);
    top
}

/// Elaborates a well-typed expression into a rooted tree.
pub fn expr_to_tree(e: &TreeExpr) -> Result<RootedTree> {
    e.type_check()?;
    let mut b = TreeBuilder::new();
    let root = build(e, &mut b);
    Ok(b.finish_rooted(root))
}

/// Parses and elaborates in one step.
pub fn parse_tree(text: &str) -> Result<RootedTree> {
    expr_to_tree(&parse_expr(text)?)
}

fn fork_code() -> Vec<u8> {
    b"((()()))".to_vec()
}

/// Recovers an expression from a rooted tree: leaves become `L`, forks `F`,
/// chain links `A(B(L,F,T))` become `C T` (merged into powers), and every
/// other vertex an explicit `A(...)` or `B(...)` with branches ordered by size.
pub fn recognise(rt: &RootedTree) -> Result<TreeExpr> {
    let (orient, stats) = subtree_stats(&rt.tree, rt.root);
    let codes: Vec<CanonicalCode> = all_subtree_codes(&rt.tree, rt.root);
    let fork = fork_code();
    let n = rt.order();
    let mut exprs: Vec<Option<TreeExpr>> = vec![None; n];
    for &v in orient.order.iter().rev() {
        let ty = stats[v].node_type();
        let kids = &orient.children[v];
        if let Some(&bad) = kids.iter().find(|&&c| stats[c].node_type() == ty) {
            return Err(Error::NotBipartite(Some(format!(
                "vertex {v} of type {ty} has a branch at vertex {bad} of the same type"
            ))));
        }
        let e = if kids.is_empty() {
            TreeExpr::Leaf
        } else if codes[v].code == fork {
            TreeExpr::Fork
        } else if is_chain_link(v, &orient.children, &codes, &fork) {
            let hub = kids[0];
            let Some(TreeExpr::NodeB(mut branches)) = exprs[hub].take() else {
                unreachable!("chain hub is recognised as a type-B node")
            };
            let leaf = branches.iter().position(|b| *b == TreeExpr::Leaf).expect("link has a leaf");
            branches.remove(leaf);
            let fork = branches.iter().position(|b| *b == TreeExpr::Fork).expect("link has a fork");
            branches.remove(fork);
            let inner = branches.pop().expect("link has an operand");
            match inner {
                TreeExpr::Chain(k, x) => TreeExpr::Chain(k + 1, x),
                other => TreeExpr::Chain(1, Box::new(other)),
            }
        } else {
            let mut ordered = kids.clone();
            ordered.sort_by(|&x, &y| {
                (rt_order(&codes[x]), &codes[x].code).cmp(&(rt_order(&codes[y]), &codes[y].code))
            });
            let cs: Vec<TreeExpr> = ordered
                .iter()
                .map(|&c| exprs[c].take().expect("branch recognised"))
                .collect();
            match ty {
                VertexType::A => TreeExpr::NodeA(cs),
                VertexType::B => TreeExpr::NodeB(cs),
            }
        };
        exprs[v] = Some(e);
    }
    Ok(exprs[rt.root].take().expect("root recognised"))
}

fn rt_order(code: &CanonicalCode) -> usize {
    code.code.len() / 2
}

/// True iff `v` is the top of a chain link `A(B(L, F, T))`.
fn is_chain_link(v: usize, children: &[Vec<usize>], codes: &[CanonicalCode], fork: &[u8]) -> bool {
    let [hub] = children[v][..] else {
        return false;
    };
    let kids = &children[hub];
    if kids.len() != 3 {
        return false;
    }
    let Some(leaf) = kids.iter().position(|&c| children[c].is_empty()) else {
        return false;
    };
    kids.iter()
        .enumerate()
        .any(|(i, &c)| i != leaf && codes[c].code == fork)
}

/// Best-effort expression text for a rooted tree; see [`recognise`].
pub fn format_expr(rt: &RootedTree) -> Result<String> {
    Ok(recognise(rt)?.to_string())
}

/// `(m, m0)` of an expression, by elaboration.
pub fn expr_counts(e: &TreeExpr) -> Result<(BigInt, BigInt)> {
    let s = crate::matching::match_stats(&expr_to_tree(e)?);
    Ok((s.m, s.m0))
}

/// True iff the two expressions elaborate to isomorphic rooted trees.
pub fn same_tree(a: &TreeExpr, b: &TreeExpr) -> Result<bool> {
    Ok(rooted_canonical_code(&expr_to_tree(a)?) == rooted_canonical_code(&expr_to_tree(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::match_stats;
    use crate::tree::Tree;
    use TreeExpr::*;

    #[test]
    fn parses_direct_grammar() {
        assert_eq!(
            parse_expr("B(L,F,C^2F)").unwrap(),
            NodeB(vec![Leaf, Fork, Chain(2, Box::new(Fork))])
        );
        assert_eq!(parse_expr(" B ( L , F ) ").unwrap(), NodeB(vec![Leaf, Fork]));
        assert_eq!(parse_expr("C^{3}L").unwrap(), Chain(3, Box::new(Leaf)));
        assert_eq!(parse_expr("C^0F").unwrap(), Fork);
        assert_eq!(parse_expr("AB(L,L)").unwrap(), NodeA(vec![NodeB(vec![Leaf, Leaf])]));
    }

    #[test]
    fn expands_sugar() {
        let expanded = NodeA(vec![NodeB(vec![Leaf, Leaf, Leaf])]);
        assert_eq!(parse_expr("C_L L").unwrap(), expanded);
        assert_eq!(parse_expr("C_{L}L").unwrap(), expanded);
        assert_eq!(parse_expr("C_L^0 F").unwrap(), Fork);
        assert_eq!(
            parse_expr("C_{CL}^2 F").unwrap(),
            NodeA(vec![NodeB(vec![
                Leaf,
                Chain(1, Box::new(Leaf)),
                NodeA(vec![NodeB(vec![Leaf, Chain(1, Box::new(Leaf)), Fork])])
            ])])
        );
    }

    #[test]
    fn named_trees() {
        assert_eq!(parse_expr("A3*").unwrap(), NodeA(vec![NodeB(vec![Leaf])]));
        assert_eq!(parse_expr("BA3*").unwrap(), NodeB(vec![NodeA(vec![NodeB(vec![Leaf])])]));
        assert!(matches!(parse_expr("A5*"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(
            parse_expr("A(B(L,L)"),
            Err(Error::Syntax { pos: 8, .. })
        ));
        assert!(matches!(parse_expr("B()"), Err(Error::Arity { pos: 1 })));
        assert!(matches!(parse_expr("L L"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr("C^L"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_expr(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_expr("C_XL"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn print_then_parse() {
        for text in ["B(L,F,C^2F)", "CL", "C^2A(B(L,C^2L,C^3L))", "A(B(L,L))", "CC^2F"] {
            let e = parse_expr(text).unwrap();
            assert_eq!(e.to_string(), text);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn elaboration() {
        let f = parse_tree("F").unwrap();
        let s = match_stats(&f);
        assert_eq!(f.order(), 4);
        assert_eq!((s.m, s.m0), (3.into(), 2.into()));

        let cl = parse_tree("C L").unwrap();
        let s = match_stats(&cl);
        assert_eq!(cl.order(), 8);
        assert_eq!((s.m, s.m0), (11.into(), 8.into()));

        assert!(parse_tree("B(A(B(L,L)))").is_ok());
        assert!(matches!(parse_tree("B(B(L,L))"), Err(Error::Type(_))));
        assert!(matches!(parse_tree("A(L)"), Err(Error::Type(_))));
        assert!(matches!(parse_tree("C B(L,L)"), Err(Error::Type(_))));
    }

    #[test]
    fn recognition() {
        assert_eq!(format_expr(&parse_tree("F").unwrap()).unwrap(), "F");
        assert_eq!(format_expr(&parse_tree("A(B(L,F,L))").unwrap()).unwrap(), "CL");
        assert_eq!(format_expr(&parse_tree("C C^2 F").unwrap()).unwrap(), "C^3F");
        let p4_end = RootedTree::new(Tree::path(4), 0).unwrap();
        assert_eq!(format_expr(&p4_end).unwrap(), "B(A(B(L)))");
        let p4_inner = RootedTree::new(Tree::path(4), 1).unwrap();
        assert!(matches!(format_expr(&p4_inner), Err(Error::NotBipartite(_))));
    }
}
